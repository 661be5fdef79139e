#pragma once

#include "hoinfo/datamodel.hpp"
#include "hoinfo/gaussian_info.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hoinfo {

struct BootstrapConfig {
    std::size_t n_resamples = 1000;
    double alpha = 0.01;
    /// Defaults to 1 - alpha.
    std::optional<double> ci_level;
    std::uint64_t seed = 0;

    double level() const noexcept { return ci_level.value_or(1.0 - alpha); }
    void validate() const;
};

inline constexpr std::size_t kMaxRedraws = 10;

/// B bootstrap replicates of the full correlation matrix, each stored in
/// name-rank order. Resample b draws N rows with replacement from substream
/// (seed, b); a replicate with a constant column, or a non-positive-definite
/// matrix when the original one is positive definite, is redrawn from
/// (seed, b, attempt) up to kMaxRedraws times.
class ResampleBank {
public:
    ResampleBank(const Dataset& d, const BootstrapConfig& cfg, std::size_t threads = 0);

    std::size_t size() const noexcept { return n_resamples_; }
    std::size_t n_vars() const noexcept { return p_; }
    std::size_t n_obs() const noexcept { return n_obs_; }
    const std::vector<Index>& name_rank() const noexcept { return rank_; }
    const double* frame(std::size_t b) const noexcept { return frames_.data() + b * p_ * p_; }
    /// Total number of redrawn resamples.
    std::size_t redraws() const noexcept { return redraws_; }

private:
    std::size_t n_resamples_ = 0;
    std::size_t p_ = 0;
    std::size_t n_obs_ = 0;
    std::vector<Index> rank_;
    std::vector<double> frames_;
    std::size_t redraws_ = 0;
};

struct ResampleOptions {
    std::size_t threads = 0;
    EstimatorOptions estimator;
};

/// B resampled Omega values per multiplet (outer index follows `multiplets`).
std::vector<std::vector<double>> bootstrap_omegas(const Dataset& d, std::span<const Multiplet> multiplets,
                                                  const BootstrapConfig& cfg, const ResampleOptions& opts = {});

/// Empirical quantiles at (1-level)/2 and 1-(1-level)/2, interpolating
/// linearly between order statistics placed at (i - 0.5)/n.
std::pair<double, double> percentile_ci(std::span<const double> samples, double level);

/// Two-sided sign count: 2 min(#{s <= 0} + 1, #{s >= 0} + 1) / (B + 1), capped at 1.
double bootstrap_pvalue(std::span<const double> samples);

/// Two-sided normal approximation: 2 (1 - Phi(|estimate| / sd(samples))).
double bootstrap_normal_pvalue(double estimate, std::span<const double> samples);

enum class PValueMethod { Normal, Sign };

std::string_view to_string(PValueMethod m) noexcept;

struct BootstrapSummary {
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_raw = 1.0;
};

/// CI and raw p-value of each multiplet, streaming over multiplets so only
/// one resample distribution per worker is alive at a time.
std::vector<BootstrapSummary> summarize_bootstrap(const ResampleBank& bank, std::span<const Multiplet> multiplets,
                                                  std::span<const double> point_estimates,
                                                  const BootstrapConfig& cfg, PValueMethod method,
                                                  const ResampleOptions& opts = {});

/// Holm step-down adjusted p-values, returned in input order.
std::vector<double> holm_adjust(std::span<const double> p_raw);

enum class TestRejection { NotSignificant, IntervalContainsZero };

struct RejectedByTest {
    OInfoEstimate estimate;
    TestRejection reason;
};

struct RejectedByPruning {
    OInfoEstimate estimate;
    Multiplet overlapping_subset;
};

struct SignificanceReport {
    std::vector<OInfoEstimate> retained;
    std::vector<RejectedByTest> rejected_by_test;
    std::vector<RejectedByPruning> rejected_by_pruning;
};

struct PruneOptions {
    double alpha = 0.01;
    /// Compare only against sub-multiplets whose Omega has the same sign.
    bool same_sign_only = false;
};

/// True when p_adj <= alpha and the CI lies strictly on the estimate's side of zero.
bool passes_test(const OInfoEstimate& e, double alpha) noexcept;

inline bool intervals_overlap(double a, double b, double c, double d) noexcept {
    return a <= d && c <= b;
}

/// Significance filter followed by hierarchical CI-overlap pruning. Orders
/// are processed from 4 upwards; a significant order-k multiplet is dropped
/// when its CI overlaps the CI of any of its order-(k-1) sub-multiplets.
/// `estimates` must cover every scanned multiplet.
SignificanceReport prune_hierarchical(std::span<const OInfoEstimate> estimates, const PruneOptions& opts);

}  // namespace hoinfo
