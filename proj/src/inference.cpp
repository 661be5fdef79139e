#include "hoinfo/inference.hpp"

#include "hoinfo/error.hpp"
#include "hoinfo/linalg.hpp"
#include "hoinfo/parallel.hpp"
#include "hoinfo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace hoinfo {

void BootstrapConfig::validate() const {
    if (n_resamples < 100) throw Error(ErrorCode::InvalidArgument, "at least 100 bootstrap resamples are required");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    const double lvl = level();
    if (!(lvl > 0.0 && lvl < 1.0)) throw Error(ErrorCode::InvalidArgument, "CI level must lie in (0, 1)");
}

std::string_view to_string(PValueMethod m) noexcept {
    return m == PValueMethod::Normal ? "normal" : "sign";
}

// ---------------------------------------------------------------- resampling

ResampleBank::ResampleBank(const Dataset& d, const BootstrapConfig& cfg, std::size_t threads)
    : n_resamples_(cfg.n_resamples), p_(d.n_vars()), n_obs_(d.n_obs()) {
    cfg.validate();
    const CopulaTransformer transformer(d);
    const CopulaData original = transformer.transform();
    rank_ = original.name_rank();

    // Replicates must be positive definite only if the data itself is.
    std::vector<double> probe = to_rank_frame(correlation_matrix(original.scores()), rank_);
    const bool require_pd = linalg::cholesky_logdet(probe.data(), p_).has_value();

    frames_.resize(n_resamples_ * p_ * p_);
    std::vector<std::size_t> attempts_used(n_resamples_, 0);
    parallel_for(n_resamples_, threads, 8, [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> rows(n_obs_);
        Matrix scores;
        std::vector<double> check(p_ * p_);
        for (std::size_t b = begin; b < end; ++b) {
            bool ok = false;
            for (std::size_t attempt = 0; attempt <= kMaxRedraws && !ok; ++attempt) {
                auto gen = substream(cfg.seed, b, attempt);
                std::uniform_int_distribution<std::size_t> pick(0, n_obs_ - 1);
                for (auto& r : rows) r = pick(gen);
                if (transformer.transform_rows(rows, scores)) continue;
                auto frame = to_rank_frame(correlation_matrix(scores), rank_);
                if (require_pd) {
                    std::copy(frame.begin(), frame.end(), check.begin());
                    if (!linalg::cholesky_logdet(check.data(), p_)) continue;
                }
                std::copy(frame.begin(), frame.end(), frames_.begin() + static_cast<std::ptrdiff_t>(b * p_ * p_));
                attempts_used[b] = attempt;
                ok = true;
            }
            if (!ok) {
                throw Error(ErrorCode::DegenerateResample, "resample " + std::to_string(b) + " stayed degenerate after " +
                                                               std::to_string(kMaxRedraws) + " redraws");
            }
        }
    });
    redraws_ = std::accumulate(attempts_used.begin(), attempts_used.end(), std::size_t{0});
}

namespace {

std::vector<OmegaEvaluator> evaluators(const ResampleBank& bank, EstimatorOptions opts) {
    std::vector<OmegaEvaluator> out;
    out.reserve(bank.size());
    for (std::size_t b = 0; b < bank.size(); ++b) {
        out.emplace_back(bank.frame(b), bank.n_vars(), bank.name_rank(), bank.n_obs(), opts);
    }
    return out;
}

void fill_distribution(const std::vector<OmegaEvaluator>& evals, const Multiplet& m, std::vector<double>& out) {
    out.resize(evals.size());
    for (std::size_t b = 0; b < evals.size(); ++b) {
        auto v = evals[b](m.indices());
        if (!v) {
            throw Error(ErrorCode::DegenerateResample,
                        "resample " + std::to_string(b) + " gives a non-positive-definite submatrix");
        }
        out[b] = *v;
    }
}

}  // namespace

std::vector<std::vector<double>> bootstrap_omegas(const Dataset& d, std::span<const Multiplet> multiplets,
                                                  const BootstrapConfig& cfg, const ResampleOptions& opts) {
    const ResampleBank bank(d, cfg, opts.threads);
    const auto evals = evaluators(bank, opts.estimator);
    std::vector<std::vector<double>> out(multiplets.size());
    parallel_for(multiplets.size(), opts.threads, 64, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fill_distribution(evals, multiplets[i], out[i]);
    });
    return out;
}

// ---------------------------------------------------------------- statistics

std::pair<double, double> percentile_ci(std::span<const double> samples, double level) {
    if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no bootstrap samples");
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "CI level must lie in (0, 1)");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    auto quantile = [&](double q) {
        // 1-based position h = n q + 1/2, clamped to the sample range
        const double h = std::clamp(n * q + 0.5, 1.0, n);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const double frac = h - static_cast<double>(lo);
        if (lo >= s.size()) return s.back();
        return s[lo - 1] + frac * (s[lo] - s[lo - 1]);
    };
    const double tail = (1.0 - level) / 2.0;
    return {quantile(tail), quantile(1.0 - tail)};
}

double bootstrap_pvalue(std::span<const double> samples) {
    std::size_t nonpos = 0, nonneg = 0;
    for (double s : samples) {
        if (s <= 0.0) ++nonpos;
        if (s >= 0.0) ++nonneg;
    }
    const double p = 2.0 * static_cast<double>(std::min(nonpos, nonneg) + 1) /
                     static_cast<double>(samples.size() + 1);
    return std::min(1.0, p);
}

double bootstrap_normal_pvalue(double estimate, std::span<const double> samples) {
    if (samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 bootstrap samples");
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    if (!(sd > 0.0)) return estimate == 0.0 ? 1.0 : 0.0;
    return std::min(1.0, std::erfc(std::abs(estimate) / sd / std::sqrt(2.0)));
}

std::vector<BootstrapSummary> summarize_bootstrap(const ResampleBank& bank, std::span<const Multiplet> multiplets,
                                                  std::span<const double> point_estimates,
                                                  const BootstrapConfig& cfg, PValueMethod method,
                                                  const ResampleOptions& opts) {
    if (point_estimates.size() != multiplets.size()) {
        throw Error(ErrorCode::InvalidArgument, "one point estimate per multiplet is required");
    }
    const auto evals = evaluators(bank, opts.estimator);
    std::vector<BootstrapSummary> out(multiplets.size());
    parallel_for(multiplets.size(), opts.threads, 64, [&](std::size_t begin, std::size_t end) {
        std::vector<double> dist;
        for (std::size_t i = begin; i < end; ++i) {
            fill_distribution(evals, multiplets[i], dist);
            auto [lo, hi] = percentile_ci(dist, cfg.level());
            out[i].ci_low = lo;
            out[i].ci_high = hi;
            out[i].p_raw = method == PValueMethod::Normal ? bootstrap_normal_pvalue(point_estimates[i], dist)
                                                          : bootstrap_pvalue(dist);
        }
    });
    return out;
}

std::vector<double> holm_adjust(std::span<const double> p_raw) {
    const std::size_t m = p_raw.size();
    for (double p : p_raw) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p-values must lie in [0, 1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_raw[a] < p_raw[b]; });
    std::vector<double> out(m);
    double running = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double scaled = std::min(1.0, static_cast<double>(m - j) * p_raw[order[j]]);
        running = std::max(running, scaled);
        out[order[j]] = running;
    }
    return out;
}

// ---------------------------------------------------------------- pruning

bool passes_test(const OInfoEstimate& e, double alpha) noexcept {
    if (!(e.p_adj <= alpha)) return false;
    return e.omega > 0.0 ? e.ci_low > 0.0 : e.ci_high < 0.0;
}

SignificanceReport prune_hierarchical(std::span<const OInfoEstimate> estimates, const PruneOptions& opts) {
    std::map<std::vector<Index>, std::size_t> lookup;
    for (std::size_t i = 0; i < estimates.size(); ++i) lookup.emplace(estimates[i].multiplet.indices(), i);

    std::vector<std::size_t> order(estimates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return estimates[a].multiplet < estimates[b].multiplet; });

    SignificanceReport report;
    for (auto i : order) {
        const auto& e = estimates[i];
        if (!passes_test(e, opts.alpha)) {
            report.rejected_by_test.push_back(
                {e, e.p_adj <= opts.alpha ? TestRejection::IntervalContainsZero : TestRejection::NotSignificant});
            continue;
        }
        const std::size_t k = e.multiplet.order();
        std::optional<Multiplet> overlap;
        if (k >= 4) {
            for (std::size_t drop = 0; drop < k && !overlap; ++drop) {
                auto sub = e.multiplet.without(drop);
                auto it = lookup.find(sub);
                if (it == lookup.end()) {
                    std::string text;
                    for (auto v : sub) text += (text.empty() ? "" : ",") + std::to_string(v);
                    throw Error(ErrorCode::MissingSubsetEstimate, "no estimate for sub-multiplet {" + text + "}");
                }
                const auto& s = estimates[it->second];
                if (opts.same_sign_only && s.sign() != e.sign()) continue;
                if (intervals_overlap(e.ci_low, e.ci_high, s.ci_low, s.ci_high)) overlap = s.multiplet;
            }
        }
        if (overlap) {
            report.rejected_by_pruning.push_back({e, *overlap});
        } else {
            report.retained.push_back(e);
        }
    }
    return report;
}

}  // namespace hoinfo
