#pragma once

// Small dense kernels for the many k x k correlation submatrices (k rarely
// above 6) evaluated in the scan and bootstrap loops.

#include <cstddef>
#include <optional>
#include <span>

namespace hoinfo::linalg {

/// In-place lower Cholesky factor of a row-major k x k symmetric matrix
/// (upper triangle is ignored and left untouched). Returns log(det) or
/// nothing when a pivot is not strictly positive.
std::optional<double> cholesky_logdet(double* a, std::size_t k) noexcept;

/// Omega of a k x k correlation matrix (row-major, overwritten):
///   -logdet(S) - 1/2 * sum_j log((S^-1)_jj)
/// which equals 1/2[(k-2) logdet(S) - sum_j logdet(S_{-j})].
std::optional<double> omega_kernel(double* a, std::size_t k) noexcept;

/// Order-preserving dot product with four fixed partial sums; symmetric in
/// its arguments bit for bit.
double dot(const double* x, const double* y, std::size_t n) noexcept;

}  // namespace hoinfo::linalg
