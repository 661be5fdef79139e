#pragma once

#include "hoinfo/datamodel.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hoinfo {

/// Normal scores of a Dataset: column j holds Phi^-1(midrank / (N + 1)).
class CopulaData {
public:
    CopulaData(Matrix scores, std::vector<std::string> names);

    std::size_t n_obs() const noexcept { return static_cast<std::size_t>(scores_.rows()); }
    std::size_t n_vars() const noexcept { return static_cast<std::size_t>(scores_.cols()); }
    const Matrix& scores() const noexcept { return scores_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    /// Position of each column when variables are ordered by name. Submatrices
    /// are always gathered in this order, which makes every estimate
    /// independent of where a variable sits in the input.
    const std::vector<Index>& name_rank() const noexcept { return name_rank_; }

private:
    Matrix scores_;
    std::vector<std::string> names_;
    std::vector<Index> name_rank_;
};

std::vector<Index> name_rank(const std::vector<std::string>& names);

/// Rank machinery built once per Dataset. Besides the plain transform it maps
/// any bootstrap resample (a multiset of row indices of size N) to normal
/// scores in O(N) per column, reusing the original sort order and a table of
/// Phi^-1 at every attainable midrank.
class CopulaTransformer {
public:
    explicit CopulaTransformer(const Dataset& d);

    std::size_t n_obs() const noexcept { return n_; }
    std::size_t n_vars() const noexcept { return order_.size(); }

    /// Scores of the full dataset; throws ConstantColumn.
    CopulaData transform() const;

    /// Scores of rows[0..N). Returns the offending column on a constant
    /// column instead of throwing, so resamplers can redraw.
    std::optional<std::size_t> transform_rows(std::span<const std::size_t> rows, Matrix& out) const;

private:
    std::size_t n_ = 0;
    std::vector<std::string> names_;
    std::vector<std::vector<std::size_t>> order_;       // per column: rows by ascending value
    std::vector<std::vector<std::size_t>> group_start_;  // per column: tie-group boundaries in order_
    std::vector<std::vector<std::size_t>> group_of_;     // per column: tie group of each row
    std::vector<double> score_table_;                    // Phi^-1(m / (2(N+1))), m = 0..2N
};

CopulaData copula_transform(const Dataset& d);

/// Inverse standard normal CDF.
double normal_quantile(double p);

/// Pearson correlation of the score columns: exact unit diagonal and
/// bit-for-bit symmetry. No positive-definiteness check.
Matrix correlation_matrix(const Matrix& scores);

/// Sample correlation of the selected columns (all columns when `subset` is
/// empty). Throws NotPositiveDefinite naming the subset.
CorrelationModel correlation(const CopulaData& d, std::span<const Index> subset = {});

struct OmegaDecomposition {
    double tc = 0.0;
    double dtc = 0.0;
    double omega = 0.0;
};

/// TC, DTC and Omega (nats) of a Gaussian with the given correlation. Omega
/// comes from the log-determinant identity; TC and DTC from their chain
/// sums of (conditional) mutual informations.
OmegaDecomposition omega_analytic(const CorrelationModel& sigma);

/// TC = sum_i I(X_1..X_{i-1}; X_i).
double total_correlation(const Matrix& sigma);
/// DTC = sum_i I(X_1..X_{i-1}; X_i | X_{i+1}..X_k).
double dual_total_correlation(const Matrix& sigma);

struct EstimatorOptions {
    bool bias_correction = false;
};

/// Additive small-sample correction to a plug-in Omega of order k from N
/// samples (entropy-level digamma terms; the log(N-1) terms cancel).
double omega_bias_shift(std::size_t k, std::size_t n);

/// Plug-in Gaussian-copula estimate of Omega for one multiplet.
double omega_estimate(const CopulaData& d, const Multiplet& m, EstimatorOptions opts = {});

/// Evaluates Omega for many multiplets against one full P x P correlation
/// matrix stored in name-rank order.
class OmegaEvaluator {
public:
    /// `corr` is indexed by original column; it is copied into name-rank
    /// order. `n_obs` only matters when bias correction is on.
    OmegaEvaluator(const Matrix& corr, std::span<const Index> name_rank, std::size_t n_obs,
                   EstimatorOptions opts = {});
    /// Borrows a matrix that is already in name-rank order (row-major P x P).
    OmegaEvaluator(const double* frame, std::size_t p, std::span<const Index> name_rank, std::size_t n_obs,
                   EstimatorOptions opts = {});

    /// Nothing when the gathered submatrix is not positive definite.
    std::optional<double> operator()(std::span<const Index> members) const;

private:
    void init_shift(std::size_t n_obs, EstimatorOptions opts);

    std::vector<double> owned_;
    const double* frame_ = nullptr;
    std::size_t p_ = 0;
    std::vector<Index> rank_;
    std::vector<double> shift_;  // by order k
};

/// Copies a column-indexed matrix into name-rank order (row-major).
std::vector<double> to_rank_frame(const Matrix& corr, std::span<const Index> name_rank);

/// Closed-form triplet Omega: 1/2 ln(det S / ((1-a^2)(1-b^2)(1-c^2))).
double triplet_omega_from_correlations(double rho_xy, double rho_xz, double rho_yz);

/// rho(X,Y|Z) from the three pairwise correlations.
double conditional_correlation(double rho_xy, double rho_xz, double rho_yz);

}  // namespace hoinfo
