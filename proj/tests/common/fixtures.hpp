#pragma once

#include "hoinfo/datamodel.hpp"
#include "hoinfo/synthgen.hpp"

#include <Eigen/Core>

#include <cmath>
#include <random>
#include <vector>

namespace hoinfo::testing {

/// Random correlation matrix from a k x (k+2) Gaussian factor matrix,
/// normalized to unit diagonal. Always positive definite.
inline Matrix random_correlation(std::size_t k, std::mt19937_64& gen, double spread = 1.0) {
    std::normal_distribution<double> normal(0.0, spread);
    Matrix w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 2));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = normal(gen);
    }
    Matrix s = w * w.transpose() + 0.1 * Matrix::Identity(w.rows(), w.rows());
    const Eigen::VectorXd d = s.diagonal().cwiseSqrt().cwiseInverse();
    s = d.asDiagonal() * s * d.asDiagonal();
    s.diagonal().setOnes();
    return 0.5 * (s + s.transpose());
}

inline Dataset independent_data(std::size_t n, std::size_t p, std::uint64_t seed) {
    return sample(CorrelationModel(Matrix::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))), n,
                  seed);
}

}  // namespace hoinfo::testing
