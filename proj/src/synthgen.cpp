#include "hoinfo/synthgen.hpp"

#include "hoinfo/error.hpp"
#include "hoinfo/gaussian_info.hpp"
#include "hoinfo/parallel.hpp"
#include "hoinfo/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <limits>
#include <random>

namespace hoinfo {

namespace {

constexpr std::size_t kScanPoints = 1000;
constexpr double kPlantedTolerance = 1e-6;

void check_loadings(const Loadings& l) {
    for (double v : {l.x, l.y, l.z}) {
        if (!(v > 0.0 && v < 1.0)) throw Error(ErrorCode::InvalidArgument, "loadings must lie in (0, 1)");
    }
}

double scan_point(const Loadings& l, std::size_t i) {
    const double lim = ecov_limit(l);
    return -lim + (static_cast<double>(i) + 0.5) * (2.0 * lim / static_cast<double>(kScanPoints));
}

bool is_pd(const Matrix& m) {
    Eigen::LLT<Matrix> llt(m);
    return llt.info() == Eigen::Success;
}

std::size_t var_index(std::size_t triplet, TripletVar v) {
    return 3 * triplet + static_cast<std::size_t>(v);
}

char var_letter(TripletVar v) {
    return "xyz"[static_cast<int>(v)];
}

TripletVar parse_var(const std::string& s) {
    if (s == "x") return TripletVar::X;
    if (s == "y") return TripletVar::Y;
    if (s == "z") return TripletVar::Z;
    throw Error(ErrorCode::SchemaViolation, "link variable must be x, y or z");
}

Matrix assemble_matrix(const LayoutSpec& layout, std::vector<double>* ecovs) {
    const std::size_t t = layout.triplets.size();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(3 * t), static_cast<Eigen::Index>(3 * t));
    for (std::size_t i = 0; i < t; ++i) {
        const double e = resolve_ecov(layout.triplets[i]);
        if (ecovs) ecovs->push_back(e);
        const auto block = triplet_correlation(layout.triplets[i].loadings, e);
        m.block(static_cast<Eigen::Index>(3 * i), static_cast<Eigen::Index>(3 * i), 3, 3) = block.matrix();
    }
    for (const auto& link : layout.links) {
        if (link.triplet_a >= t || link.triplet_b >= t) {
            throw Error(ErrorCode::IndexOutOfRange, "link refers to a missing triplet");
        }
        if (link.triplet_a == link.triplet_b) {
            throw Error(ErrorCode::InvalidArgument, "a link must join two different triplets");
        }
        const auto a = static_cast<Eigen::Index>(var_index(link.triplet_a, link.var_a));
        const auto b = static_cast<Eigen::Index>(var_index(link.triplet_b, link.var_b));
        m(a, b) = link.value;
        m(b, a) = link.value;
    }
    return m;
}

}  // namespace

double ecov_limit(const Loadings& l) {
    check_loadings(l);
    return std::sqrt((1.0 - l.y * l.y) * (1.0 - l.z * l.z));
}

CorrelationModel triplet_correlation(const Loadings& l, double ecov) {
    if (!(std::abs(ecov) < ecov_limit(l))) {
        throw Error(ErrorCode::NotPositiveDefinite,
                    "|ecov| = " + format_number(std::abs(ecov)) + " reaches the limit " + format_number(ecov_limit(l)));
    }
    Matrix m(3, 3);
    m << 1.0, l.x * l.y, l.x * l.z,  //
        l.x * l.y, 1.0, l.y * l.z + ecov,  //
        l.x * l.z, l.y * l.z + ecov, 1.0;
    return CorrelationModel(std::move(m));
}

CorrelationModel triplet_correlation(const TripletSpec& spec) {
    if (!spec.ecov) throw Error(ErrorCode::InvalidArgument, "triplet spec has no explicit ecov");
    return triplet_correlation(spec.loadings, *spec.ecov);
}

double triplet_omega(const Loadings& l, double ecov) {
    const auto m = triplet_correlation(l, ecov);
    return triplet_omega_from_correlations(m(0, 1), m(0, 2), m(1, 2));
}

std::pair<double, double> attainable_omega_range(const Loadings& l) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < kScanPoints; ++i) {
        const double v = triplet_omega(l, scan_point(l, i));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

EcovSolution solve_ecov(double target_omega, const Loadings& l) {
    std::vector<double> grid(kScanPoints), f(kScanPoints);
    for (std::size_t i = 0; i < kScanPoints; ++i) {
        grid[i] = scan_point(l, i);
        f[i] = triplet_omega(l, grid[i]) - target_omega;
    }
    std::vector<double> roots;
    for (std::size_t i = 0; i < kScanPoints; ++i) {
        if (f[i] == 0.0) {
            roots.push_back(grid[i]);
            continue;
        }
        if (i + 1 == kScanPoints || f[i + 1] == 0.0 || (f[i] < 0.0) == (f[i + 1] < 0.0)) continue;
        double a = grid[i], b = grid[i + 1];
        double fa = f[i];
        double mid = 0.5 * (a + b);
        for (int it = 0; it < 200; ++it) {
            mid = 0.5 * (a + b);
            const double fm = triplet_omega(l, mid) - target_omega;
            if (fm == 0.0 || b - a < 1e-16) break;
            if ((fm < 0.0) == (fa < 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        roots.push_back(mid);
    }
    if (roots.empty()) {
        const auto [lo, hi] = attainable_omega_range(l);
        throw Error(ErrorCode::TargetUnattainable, "target Omega " + format_number(target_omega) +
                                                       " outside the attainable range [" + format_number(lo) + ", " +
                                                       format_number(hi) + "] for these loadings");
    }
    const auto best = *std::min_element(roots.begin(), roots.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); });
    return {best, roots.size()};
}

double resolve_ecov(const TripletSpec& spec) {
    if (spec.ecov) return *spec.ecov;
    if (spec.target_omega) return solve_ecov(*spec.target_omega, spec.loadings).ecov;
    throw Error(ErrorCode::InvalidArgument, "triplet spec needs an ecov or a target Omega");
}

LayoutSpec preset_layout(Preset preset, const TripletSpec& each, double link_value) {
    LayoutSpec out;
    std::size_t clusters = 0, per_cluster = 1;
    switch (preset) {
        case Preset::Model1: clusters = 9; per_cluster = 1; break;
        case Preset::Model2: clusters = 3; per_cluster = 3; break;
        case Preset::Model3: clusters = 3; per_cluster = 4; break;
    }
    out.triplets.assign(clusters * per_cluster, each);
    for (std::size_t c = 0; c < clusters; ++c) {
        for (std::size_t a = 0; a < per_cluster; ++a) {
            for (std::size_t b = a + 1; b < per_cluster; ++b) {
                out.links.push_back(
                    {c * per_cluster + a, TripletVar::Z, c * per_cluster + b, TripletVar::Z, link_value});
            }
        }
    }
    return out;
}

std::optional<Preset> parse_preset(std::string_view name) {
    if (name == "model1") return Preset::Model1;
    if (name == "model2") return Preset::Model2;
    if (name == "model3") return Preset::Model3;
    return std::nullopt;
}

LayoutSpec layout_from_json(std::string_view text, const TripletSpec& fallback) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaViolation, std::string("invalid layout JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "layout must be a JSON object");

    auto parse_triplet = [](const json& jt) {
        if (!jt.is_object()) throw Error(ErrorCode::SchemaViolation, "triplet entries must be objects");
        TripletSpec t;
        if (jt.contains("loadings")) {
            const auto& jl = jt["loadings"];
            if (!jl.is_array() || jl.size() != 3) throw Error(ErrorCode::SchemaViolation, "loadings need 3 numbers");
            t.loadings = {jl[0].get<double>(), jl[1].get<double>(), jl[2].get<double>()};
        }
        if (jt.contains("ecov") && !jt["ecov"].is_null()) t.ecov = jt["ecov"].get<double>();
        if (jt.contains("target_omega") && !jt["target_omega"].is_null()) {
            t.target_omega = jt["target_omega"].get<double>();
        }
        if (!t.ecov && !t.target_omega) {
            throw Error(ErrorCode::SchemaViolation, "each triplet needs 'ecov' or 'target_omega'");
        }
        return t;
    };

    std::vector<TripletSpec> triplets;
    if (doc.contains("triplets")) {
        if (!doc["triplets"].is_array()) throw Error(ErrorCode::SchemaViolation, "'triplets' must be an array");
        for (const auto& jt : doc["triplets"]) triplets.push_back(parse_triplet(jt));
    }

    LayoutSpec out;
    const bool has_preset = doc.contains("preset") && !doc["preset"].is_null();
    if (has_preset) {
        const auto name = doc["preset"].get<std::string>();
        const auto preset = parse_preset(name);
        if (!preset) throw Error(ErrorCode::SchemaViolation, "unknown preset '" + name + "'");
        const double link_value = doc.value("link_value", kDefaultLinkValue);
        out = preset_layout(*preset, triplets.size() == 1 ? triplets.front() : fallback, link_value);
        if (triplets.size() > 1) {
            if (triplets.size() != out.triplets.size()) {
                throw Error(ErrorCode::SchemaViolation, "preset '" + name + "' has " +
                                                            std::to_string(out.triplets.size()) + " triplets");
            }
            out.triplets = std::move(triplets);
        }
    } else {
        if (triplets.empty()) throw Error(ErrorCode::SchemaViolation, "layout without preset needs triplets");
        out.triplets = std::move(triplets);
    }

    if (doc.contains("links")) {
        if (!doc["links"].is_array()) throw Error(ErrorCode::SchemaViolation, "'links' must be an array");
        for (const auto& jl : doc["links"]) {
            auto endpoint = [&](const char* key) {
                if (!jl.contains(key) || !jl[key].is_array() || jl[key].size() != 2 || !jl[key][0].is_number_unsigned() ||
                    !jl[key][1].is_string()) {
                    throw Error(ErrorCode::SchemaViolation, std::string("link endpoint '") + key +
                                                                "' must be [triplet, \"x\"|\"y\"|\"z\"]");
                }
                return std::pair{jl[key][0].get<std::size_t>(), parse_var(jl[key][1].get<std::string>())};
            };
            const auto [ta, va] = endpoint("a");
            const auto [tb, vb] = endpoint("b");
            out.links.push_back({ta, va, tb, vb, jl.value("value", kDefaultLinkValue)});
        }
    }
    return out;
}

std::string triplet_label(std::size_t t) {
    if (t < 26) return std::string(1, static_cast<char>('A' + t));
    return "T" + std::to_string(t + 1);
}

AssembledModel assemble(const LayoutSpec& layout) {
    if (layout.triplets.empty()) throw Error(ErrorCode::InvalidArgument, "layout has no triplets");
    std::vector<double> ecovs;
    Matrix m = assemble_matrix(layout, &ecovs);
    if (!is_pd(m)) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
        std::string links;
        for (const auto& l : layout.links) {
            links += (links.empty() ? "" : ", ") + triplet_label(l.triplet_a) + "." + var_letter(l.var_a) + "-" +
                     triplet_label(l.triplet_b) + "." + var_letter(l.var_b) + "=" + format_number(l.value);
        }
        throw Error(ErrorCode::NotPositiveDefinite, "assembled matrix has minimum eigenvalue " +
                                                        format_number(eig.eigenvalues().minCoeff()) + "; links: " +
                                                        (links.empty() ? "none" : links));
    }
    std::vector<std::string> names;
    std::vector<double> omegas;
    for (std::size_t t = 0; t < layout.triplets.size(); ++t) {
        for (char v : {'x', 'y', 'z'}) names.push_back(triplet_label(t) + "." + v);
        omegas.push_back(triplet_omega(layout.triplets[t].loadings, ecovs[t]));
    }
    return {CorrelationModel(std::move(m)), std::move(names), std::move(ecovs), std::move(omegas)};
}

double link_max(const LayoutSpec& layout) {
    if (layout.links.empty()) throw Error(ErrorCode::InvalidArgument, "layout has no links to scale");
    auto with_value = [&](double v) {
        LayoutSpec l = layout;
        for (auto& link : l.links) link.value = v;
        return l;
    };
    if (!is_pd(assemble_matrix(with_value(0.0), nullptr))) {
        throw Error(ErrorCode::NotPositiveDefinite, "layout is not positive definite even without links");
    }
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (is_pd(assemble_matrix(with_value(mid), nullptr)) ? lo : hi) = mid;
    }
    return std::max(0.0, lo - 1e-3);
}

Dataset sample(const CorrelationModel& model, std::size_t n, std::uint64_t seed, std::vector<std::string> names,
               std::size_t threads) {
    const auto p = static_cast<Eigen::Index>(model.dim());
    if (names.empty()) names = default_names(model.dim());
    Eigen::LLT<Matrix> llt(model.matrix());
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "model is not positive definite");
    const Matrix lower = llt.matrixL();

    Matrix x(static_cast<Eigen::Index>(n), p);
    parallel_for(n, threads, 512, [&](std::size_t begin, std::size_t end) {
        Eigen::VectorXd z(p);
        for (std::size_t i = begin; i < end; ++i) {
            auto gen = substream(seed, i);
            std::normal_distribution<double> normal;
            for (Eigen::Index j = 0; j < p; ++j) z(j) = normal(gen);
            for (Eigen::Index r = 0; r < p; ++r) {
                double s = 0.0;
                for (Eigen::Index c = 0; c <= r; ++c) s += lower(r, c) * z(c);
                x(static_cast<Eigen::Index>(i), r) = s;
            }
        }
    });
    if (n >= 2) {
        for (Eigen::Index j = 0; j < p; ++j) {
            auto col = x.col(j);
            double mean = 0.0;
            for (Eigen::Index i = 0; i < col.size(); ++i) mean += col(i);
            mean /= static_cast<double>(n);
            double ss = 0.0;
            for (Eigen::Index i = 0; i < col.size(); ++i) ss += (col(i) - mean) * (col(i) - mean);
            const double sd = std::sqrt(ss / static_cast<double>(n - 1));
            for (Eigen::Index i = 0; i < col.size(); ++i) col(i) = (col(i) - mean) / sd;
        }
    }
    return Dataset(std::move(x), std::move(names));
}

CorrelationModel factor_model_correlation(const FactorModelSpec& spec) {
    const std::size_t p = spec.n_factors * spec.vars_per_factor;
    const double within = spec.loading * spec.loading;
    Matrix m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const bool same = i / spec.vars_per_factor == j / spec.vars_per_factor;
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                i == j ? 1.0 : (same ? within : within * spec.factor_correlation);
        }
    }
    return CorrelationModel(std::move(m));
}

std::vector<std::string> factor_model_names(const FactorModelSpec& spec) {
    std::vector<std::string> names;
    for (std::size_t f = 0; f < spec.n_factors; ++f) {
        for (std::size_t v = 0; v < spec.vars_per_factor; ++v) {
            names.push_back("F" + std::to_string(f + 1) + "." + std::to_string(v + 1));
        }
    }
    return names;
}

Dataset generate_factor_model(const FactorModelSpec& spec, std::uint64_t seed, std::size_t threads) {
    return sample(factor_model_correlation(spec), spec.n_obs, seed, factor_model_names(spec), threads);
}

namespace {

nlohmann::ordered_json matrix_json(const Matrix& m) {
    auto rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string planted_class(double omega) {
    if (omega > kPlantedTolerance) return "redundant";
    if (omega < -kPlantedTolerance) return "synergistic";
    return "null";
}

}  // namespace

std::string layout_manifest_json(const LayoutSpec& layout, const AssembledModel& m, std::size_t n,
                                 std::uint64_t seed) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["kind"] = "layout";
    doc["n"] = n;
    doc["seed"] = seed;
    doc["names"] = m.names;
    doc["correlation"] = matrix_json(m.model.matrix());
    auto triplets = ordered_json::array();
    auto planted = ordered_json::array();
    for (std::size_t t = 0; t < layout.triplets.size(); ++t) {
        const auto& spec = layout.triplets[t];
        ordered_json jt;
        jt["label"] = triplet_label(t);
        jt["members"] = {3 * t, 3 * t + 1, 3 * t + 2};
        jt["loadings"] = {spec.loadings.x, spec.loadings.y, spec.loadings.z};
        jt["ecov"] = m.ecov[t];
        if (spec.target_omega) jt["target_omega"] = *spec.target_omega;
        jt["omega"] = m.omega[t];
        jt["class"] = planted_class(m.omega[t]);
        triplets.push_back(jt);
        if (planted_class(m.omega[t]) != "null") {
            ordered_json jp;
            jp["members"] = jt["members"];
            jp["names"] = {m.names[3 * t], m.names[3 * t + 1], m.names[3 * t + 2]};
            jp["omega"] = m.omega[t];
            jp["class"] = jt["class"];
            planted.push_back(std::move(jp));
        }
    }
    doc["triplets"] = std::move(triplets);
    auto links = ordered_json::array();
    for (const auto& l : layout.links) {
        ordered_json jl;
        jl["a"] = {l.triplet_a, std::string(1, var_letter(l.var_a))};
        jl["b"] = {l.triplet_b, std::string(1, var_letter(l.var_b))};
        jl["value"] = l.value;
        links.push_back(std::move(jl));
    }
    doc["links"] = std::move(links);
    doc["planted"] = std::move(planted);
    return doc.dump(2) + "\n";
}

std::string factor_manifest_json(const FactorModelSpec& spec, std::uint64_t seed) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["kind"] = "factor_model";
    doc["n"] = spec.n_obs;
    doc["seed"] = seed;
    doc["n_factors"] = spec.n_factors;
    doc["vars_per_factor"] = spec.vars_per_factor;
    doc["loading"] = spec.loading;
    doc["factor_correlation"] = spec.factor_correlation;
    doc["names"] = factor_model_names(spec);
    doc["correlation"] = matrix_json(factor_model_correlation(spec).matrix());
    return doc.dump(2) + "\n";
}

}  // namespace hoinfo
