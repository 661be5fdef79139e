#pragma once

#include "hoinfo/datamodel.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hoinfo {

/// Single-factor loadings of the x, y, z indicators of a triplet.
struct Loadings {
    double x = std::sqrt(0.99);
    double y = std::sqrt(0.70);
    double z = std::sqrt(0.30);
};

/// A triplet is fixed either by its residual covariance Cov(e_y, e_z)
/// directly or by the Omega it should carry.
struct TripletSpec {
    Loadings loadings;
    std::optional<double> ecov;
    std::optional<double> target_omega;
};

/// sqrt(theta_y * theta_z): |ecov| must stay strictly below it.
double ecov_limit(const Loadings& l);

/// rho_xy = l_x l_y, rho_xz = l_x l_z, rho_yz = l_y l_z + ecov.
CorrelationModel triplet_correlation(const Loadings& l, double ecov);
CorrelationModel triplet_correlation(const TripletSpec& spec);

/// Omega of the triplet implied by (loadings, ecov).
double triplet_omega(const Loadings& l, double ecov);

struct EcovSolution {
    double ecov = 0.0;
    /// Number of distinct roots found by the bracket scan.
    std::size_t multiplicity = 0;
};

/// Root of ecov -> Omega(ecov) - target. A 1000-point scan over the open
/// admissible interval brackets every sign change; each bracket is bisected
/// and the root with the smallest |ecov| is returned. Throws
/// TargetUnattainable with the achievable range.
EcovSolution solve_ecov(double target_omega, const Loadings& l = {});

/// Approximate [min, max] of Omega over admissible ecov (scan grid).
std::pair<double, double> attainable_omega_range(const Loadings& l = {});

/// Explicit ecov, or the solution for the target Omega.
double resolve_ecov(const TripletSpec& spec);

enum class TripletVar { X = 0, Y = 1, Z = 2 };

struct Link {
    std::size_t triplet_a = 0;
    TripletVar var_a = TripletVar::Z;
    std::size_t triplet_b = 0;
    TripletVar var_b = TripletVar::Z;
    double value = 0.15;
};

struct LayoutSpec {
    std::vector<TripletSpec> triplets;
    std::vector<Link> links;
};

enum class Preset { Model1, Model2, Model3 };

inline constexpr double kDefaultLinkValue = 0.15;

/// Model1: nine unlinked triplets. Model2: three clusters of three triplets,
/// z variables linked pairwise within a cluster. Model3: three clusters of
/// four triplets, z variables linked pairwise within a cluster.
LayoutSpec preset_layout(Preset preset, const TripletSpec& each, double link_value = kDefaultLinkValue);

std::optional<Preset> parse_preset(std::string_view name);

/// Parses the layout JSON file format. With a preset the triplet list may be
/// empty (use `fallback` for every triplet), hold one entry (broadcast), or
/// hold one entry per triplet; extra links are appended to the preset's.
LayoutSpec layout_from_json(std::string_view text, const TripletSpec& fallback = {});

/// "A".."Z", then "T27", "T28", ...
std::string triplet_label(std::size_t t);

struct AssembledModel {
    CorrelationModel model;
    std::vector<std::string> names;  // A.x, A.y, A.z, B.x, ...
    std::vector<double> ecov;        // per triplet
    std::vector<double> omega;       // per triplet, analytic
};

/// Triplet blocks on the diagonal, each link written symmetrically into the
/// two off-diagonal cells. Throws NotPositiveDefinite with the minimum
/// eigenvalue and the link list.
AssembledModel assemble(const LayoutSpec& layout);

/// Largest uniform value for every link that keeps the assembled matrix
/// positive definite, minus a 1e-3 margin.
double link_max(const LayoutSpec& layout);

/// n draws of N(0, model) through its Cholesky factor (row i uses RNG
/// substream (seed, i)), then each column standardized to sample mean 0 and
/// sample variance 1.
Dataset sample(const CorrelationModel& model, std::size_t n, std::uint64_t seed, std::vector<std::string> names = {},
               std::size_t threads = 0);

struct FactorModelSpec {
    std::size_t n_factors = 3;
    double loading = 0.4;
    std::size_t vars_per_factor = 3;
    double factor_correlation = 0.0;
    std::size_t n_obs = 2000;
};

CorrelationModel factor_model_correlation(const FactorModelSpec& spec);
std::vector<std::string> factor_model_names(const FactorModelSpec& spec);
Dataset generate_factor_model(const FactorModelSpec& spec, std::uint64_t seed, std::size_t threads = 0);

/// Ground truth written next to a generated layout dataset: the exact
/// correlation matrix, per-triplet ecov and analytic Omega, and the planted
/// multiplets.
std::string layout_manifest_json(const LayoutSpec& layout, const AssembledModel& m, std::size_t n, std::uint64_t seed);
std::string factor_manifest_json(const FactorModelSpec& spec, std::uint64_t seed);

}  // namespace hoinfo
