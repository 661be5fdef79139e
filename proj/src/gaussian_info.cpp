#include "hoinfo/gaussian_info.hpp"

#include "hoinfo/error.hpp"
#include "hoinfo/linalg.hpp"

#include <Eigen/Cholesky>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace hoinfo {

namespace {

std::string describe_subset(std::span<const Index> subset, const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i) out += ", ";
        out += names.at(subset[i]);
    }
    return out + "}";
}

// Column means removed and centered sums of squares, computed the same way
// wherever a correlation entry is needed so that entries agree bit for bit.
struct CenteredColumns {
    std::vector<double> data;  // column-major n x p
    std::vector<double> ss;
    std::size_t n = 0;

    const double* col(std::size_t j) const { return data.data() + j * n; }
};

CenteredColumns center(const Matrix& scores, std::span<const Index> cols) {
    CenteredColumns c;
    c.n = static_cast<std::size_t>(scores.rows());
    const std::size_t p = cols.empty() ? static_cast<std::size_t>(scores.cols()) : cols.size();
    c.data.resize(c.n * p);
    c.ss.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto src = cols.empty() ? static_cast<Eigen::Index>(j) : static_cast<Eigen::Index>(cols[j]);
        const double* x = scores.data() + src * scores.rows();
        double mean = 0.0;
        for (std::size_t i = 0; i < c.n; ++i) mean += x[i];
        mean /= static_cast<double>(c.n);
        double* y = c.data.data() + j * c.n;
        for (std::size_t i = 0; i < c.n; ++i) y[i] = x[i] - mean;
        c.ss[j] = linalg::dot(y, y, c.n);
    }
    return c;
}

double pair_correlation(const CenteredColumns& c, std::size_t a, std::size_t b) {
    return linalg::dot(c.col(a), c.col(b), c.n) / std::sqrt(c.ss[a] * c.ss[b]);
}

double logdet_principal(const Matrix& sigma, const std::vector<Eigen::Index>& idx) {
    if (idx.empty()) return 0.0;
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = sigma(idx[i], idx[j]);
    }
    Eigen::LLT<Matrix> llt(sub);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "principal submatrix is not positive definite");
    }
    double ld = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) ld += 2.0 * std::log(llt.matrixL()(i, i));
    return ld;
}

std::vector<Eigen::Index> range(Eigen::Index lo, Eigen::Index hi) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = lo; i < hi; ++i) out.push_back(i);
    return out;
}

std::vector<Eigen::Index> join(std::vector<Eigen::Index> a, const std::vector<Eigen::Index>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

// ---------------------------------------------------------------- copula

CopulaData::CopulaData(Matrix scores, std::vector<std::string> names)
    : scores_(std::move(scores)), names_(std::move(names)), name_rank_(hoinfo::name_rank(names_)) {
    if (names_.size() != n_vars()) throw Error(ErrorCode::InvalidArgument, "names do not match score columns");
}

std::vector<Index> name_rank(const std::vector<std::string>& names) {
    std::vector<Index> by_name(names.size());
    std::iota(by_name.begin(), by_name.end(), Index{0});
    std::sort(by_name.begin(), by_name.end(), [&](Index a, Index b) { return names[a] < names[b]; });
    std::vector<Index> rank(names.size());
    for (std::size_t r = 0; r < by_name.size(); ++r) rank[by_name[r]] = static_cast<Index>(r);
    return rank;
}

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

CopulaTransformer::CopulaTransformer(const Dataset& d) : n_(d.n_obs()), names_(d.names()) {
    const std::size_t p = d.n_vars();
    order_.resize(p);
    group_start_.resize(p);
    group_of_.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double* x = d.values().data() + j * n_;
        auto& ord = order_[j];
        ord.resize(n_);
        std::iota(ord.begin(), ord.end(), std::size_t{0});
        std::stable_sort(ord.begin(), ord.end(), [x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
        auto& starts = group_start_[j];
        auto& group = group_of_[j];
        group.resize(n_);
        for (std::size_t pos = 0; pos < n_; ++pos) {
            if (pos == 0 || x[ord[pos]] != x[ord[pos - 1]]) starts.push_back(pos);
            group[ord[pos]] = starts.size() - 1;
        }
        starts.push_back(n_);
    }
    score_table_.resize(2 * n_ + 1);
    const double denom = 2.0 * static_cast<double>(n_ + 1);
    for (std::size_t m = 1; m <= 2 * n_; ++m) score_table_[m] = normal_quantile(static_cast<double>(m) / denom);
}

std::optional<std::size_t> CopulaTransformer::transform_rows(std::span<const std::size_t> rows, Matrix& out) const {
    if (rows.size() != n_) throw Error(ErrorCode::InvalidArgument, "resample size must equal N");
    const std::size_t p = n_vars();
    out.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(p));

    std::vector<std::size_t> count(n_, 0);
    for (auto r : rows) ++count[r];

    std::vector<double> group_score;
    for (std::size_t j = 0; j < p; ++j) {
        const auto& ord = order_[j];
        const auto& starts = group_start_[j];
        const std::size_t n_groups = starts.size() - 1;
        group_score.assign(n_groups, 0.0);
        std::size_t before = 0;
        std::size_t occupied = 0;
        for (std::size_t g = 0; g < n_groups; ++g) {
            std::size_t c = 0;
            for (std::size_t pos = starts[g]; pos < starts[g + 1]; ++pos) c += count[ord[pos]];
            if (c == 0) continue;
            ++occupied;
            // midrank = before + (c + 1) / 2, looked up at twice its value
            group_score[g] = score_table_[2 * before + c + 1];
            before += c;
        }
        if (occupied < 2) return j;
        double* y = out.data() + j * n_;
        const auto& group = group_of_[j];
        for (std::size_t t = 0; t < n_; ++t) y[t] = group_score[group[rows[t]]];
    }
    return std::nullopt;
}

CopulaData CopulaTransformer::transform() const {
    std::vector<std::size_t> rows(n_);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Matrix scores;
    if (auto bad = transform_rows(rows, scores)) {
        throw Error(ErrorCode::ConstantColumn, "column '" + names_[*bad] + "' is constant");
    }
    return CopulaData(std::move(scores), names_);
}

CopulaData copula_transform(const Dataset& d) {
    return CopulaTransformer(d).transform();
}

// ---------------------------------------------------------------- correlation

Matrix correlation_matrix(const Matrix& scores) {
    const auto c = center(scores, {});
    const auto p = scores.cols();
    Matrix r(p, p);
    for (Eigen::Index a = 0; a < p; ++a) {
        r(a, a) = 1.0;
        for (Eigen::Index b = a + 1; b < p; ++b) {
            const double v = pair_correlation(c, static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            r(a, b) = v;
            r(b, a) = v;
        }
    }
    return r;
}

CorrelationModel correlation(const CopulaData& d, std::span<const Index> subset) {
    for (auto j : subset) {
        if (j >= d.n_vars()) throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(j));
    }
    const auto c = center(d.scores(), subset);
    const auto k = static_cast<Eigen::Index>(c.ss.size());
    if (d.n_obs() < static_cast<std::size_t>(k) + 1) {
        throw Error(ErrorCode::InvalidArgument, "need N >= k + 1 observations for a correlation of order k");
    }
    Matrix r(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        r(a, a) = 1.0;
        for (Eigen::Index b = a + 1; b < k; ++b) {
            const double v = pair_correlation(c, static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            r(a, b) = v;
            r(b, a) = v;
        }
    }
    try {
        return CorrelationModel(std::move(r));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
        std::vector<Index> all;
        if (subset.empty()) {
            all.resize(d.n_vars());
            std::iota(all.begin(), all.end(), Index{0});
            subset = all;
        }
        throw Error(ErrorCode::NotPositiveDefinite,
                    "sample correlation of " + describe_subset(subset, d.names()) + " is not positive definite");
    }
}

// ---------------------------------------------------------------- information

double total_correlation(const Matrix& sigma) {
    const auto k = sigma.rows();
    double tc = 0.0;
    for (Eigen::Index i = 1; i < k; ++i) {
        const auto past = range(0, i);
        const std::vector<Eigen::Index> cur{i};
        tc += 0.5 * (logdet_principal(sigma, past) + logdet_principal(sigma, cur) -
                     logdet_principal(sigma, join(past, cur)));
    }
    return tc;
}

double dual_total_correlation(const Matrix& sigma) {
    const auto k = sigma.rows();
    double dtc = 0.0;
    for (Eigen::Index i = 1; i < k; ++i) {
        const auto past = range(0, i);
        const std::vector<Eigen::Index> cur{i};
        const auto future = range(i + 1, k);
        dtc += 0.5 * (logdet_principal(sigma, join(past, future)) + logdet_principal(sigma, join(cur, future)) -
                      logdet_principal(sigma, future) - logdet_principal(sigma, join(join(past, cur), future)));
    }
    return dtc;
}

OmegaDecomposition omega_analytic(const CorrelationModel& sigma) {
    const std::size_t k = sigma.dim();
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "O-information needs at least 2 variables");
    OmegaDecomposition out;
    out.tc = total_correlation(sigma.matrix());
    out.dtc = dual_total_correlation(sigma.matrix());
    if (k == 2) {
        out.omega = 0.0;
        return out;
    }
    std::vector<double> buf(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) buf[i * k + j] = sigma(i, j);
    }
    const auto omega = linalg::omega_kernel(buf.data(), k);
    if (!omega) throw Error(ErrorCode::NotPositiveDefinite, "correlation matrix is not positive definite");
    out.omega = *omega;
    assert(std::abs(out.omega - (out.tc - out.dtc)) <= 1e-9 * (1.0 + std::abs(out.tc) + std::abs(out.dtc)));
    return out;
}

double omega_bias_shift(std::size_t k, std::size_t n) {
    if (n <= k + 1) throw Error(ErrorCode::InvalidArgument, "bias correction needs N > k + 1");
    // Entropy of a d-dimensional plug-in Gaussian is corrected by
    // -d*c(N) - sum_{i<=d} psi((N-i)/2)/2; the c(N) parts cancel in Omega.
    auto psi_sum = [n](std::size_t d) {
        double s = 0.0;
        for (std::size_t i = 1; i <= d; ++i) s += 0.5 * boost::math::digamma(0.5 * static_cast<double>(n - i));
        return s;
    };
    const double kd = static_cast<double>(k);
    return -(kd * psi_sum(1) + (kd - 2.0) * psi_sum(k) - kd * psi_sum(k - 1));
}

double omega_estimate(const CopulaData& d, const Multiplet& m, EstimatorOptions opts) {
    const std::size_t k = m.order();
    for (auto j : m.indices()) {
        if (j >= d.n_vars()) throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(j));
    }
    if (d.n_obs() < k + 2) throw Error(ErrorCode::InvalidArgument, "need N >= k + 2 observations");
    // Gather in name-rank order, like the scan does.
    std::vector<Index> cols(m.indices().begin(), m.indices().end());
    const auto& rank = d.name_rank();
    std::sort(cols.begin(), cols.end(), [&](Index a, Index b) { return rank[a] < rank[b]; });
    const auto c = center(d.scores(), cols);
    std::vector<double> buf(k * k);
    for (std::size_t a = 0; a < k; ++a) {
        buf[a * k + a] = 1.0;
        for (std::size_t b = a + 1; b < k; ++b) {
            const double v = pair_correlation(c, a, b);
            buf[a * k + b] = v;
            buf[b * k + a] = v;
        }
    }
    const auto omega = linalg::omega_kernel(buf.data(), k);
    if (!omega) {
        throw Error(ErrorCode::NotPositiveDefinite,
                    "sample correlation of " + describe_subset(m.indices(), d.names()) + " is not positive definite");
    }
    return *omega + (opts.bias_correction ? omega_bias_shift(k, d.n_obs()) : 0.0);
}

// ---------------------------------------------------------------- evaluator

std::vector<double> to_rank_frame(const Matrix& corr, std::span<const Index> name_rank) {
    const std::size_t p = static_cast<std::size_t>(corr.rows());
    std::vector<double> frame(p * p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            frame[name_rank[i] * p + name_rank[j]] =
                corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return frame;
}

OmegaEvaluator::OmegaEvaluator(const Matrix& corr, std::span<const Index> name_rank, std::size_t n_obs,
                               EstimatorOptions opts)
    : owned_(to_rank_frame(corr, name_rank)),
      frame_(owned_.data()),
      p_(static_cast<std::size_t>(corr.rows())),
      rank_(name_rank.begin(), name_rank.end()) {
    init_shift(n_obs, opts);
}

OmegaEvaluator::OmegaEvaluator(const double* frame, std::size_t p, std::span<const Index> name_rank,
                               std::size_t n_obs, EstimatorOptions opts)
    : frame_(frame), p_(p), rank_(name_rank.begin(), name_rank.end()) {
    init_shift(n_obs, opts);
}

void OmegaEvaluator::init_shift(std::size_t n_obs, EstimatorOptions opts) {
    shift_.assign(p_ + 1, 0.0);
    if (!opts.bias_correction) return;
    for (std::size_t k = 3; k <= p_ && k + 1 < n_obs; ++k) shift_[k] = omega_bias_shift(k, n_obs);
}

std::optional<double> OmegaEvaluator::operator()(std::span<const Index> members) const {
    const std::size_t k = members.size();
    constexpr std::size_t kStack = 12;
    Index pos_stack[kStack];
    double buf_stack[kStack * kStack];
    std::vector<Index> pos_heap;
    std::vector<double> buf_heap;
    Index* pos = pos_stack;
    double* buf = buf_stack;
    if (k > kStack) {
        pos_heap.resize(k);
        buf_heap.resize(k * k);
        pos = pos_heap.data();
        buf = buf_heap.data();
    }
    for (std::size_t i = 0; i < k; ++i) pos[i] = rank_[members[i]];
    std::sort(pos, pos + k);
    for (std::size_t a = 0; a < k; ++a) {
        const double* row = frame_ + static_cast<std::size_t>(pos[a]) * p_;
        for (std::size_t b = 0; b < k; ++b) buf[a * k + b] = row[pos[b]];
    }
    auto omega = linalg::omega_kernel(buf, k);
    if (!omega) return std::nullopt;
    return *omega + shift_[k];
}

// ---------------------------------------------------------------- closed forms

double triplet_omega_from_correlations(double rho_xy, double rho_xz, double rho_yz) {
    const double a = rho_xy, b = rho_xz, c = rho_yz;
    const double det = 1.0 - a * a - b * b - c * c + 2.0 * a * b * c;
    if (!(std::abs(a) < 1.0 && std::abs(b) < 1.0 && std::abs(c) < 1.0 && det > 0.0)) {
        throw Error(ErrorCode::NotPositiveDefinite, "triplet correlations do not form a positive-definite matrix");
    }
    return 0.5 * std::log(det / ((1.0 - a * a) * (1.0 - c * c) * (1.0 - b * b)));
}

double conditional_correlation(double rho_xy, double rho_xz, double rho_yz) {
    if (std::abs(rho_xz) >= 1.0 || std::abs(rho_yz) >= 1.0) {
        throw Error(ErrorCode::DegenerateConditioning, "conditioning variable is perfectly correlated");
    }
    return (rho_xy - rho_xz * rho_yz) / (std::sqrt(1.0 - rho_xz * rho_xz) * std::sqrt(1.0 - rho_yz * rho_yz));
}

}  // namespace hoinfo
