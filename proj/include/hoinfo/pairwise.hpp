#pragma once

#include "hoinfo/datamodel.hpp"
#include "hoinfo/gaussian_info.hpp"

#include <string>
#include <vector>

namespace hoinfo {

/// Partial correlations between every pair of variables given all others.
struct PairwiseNetwork {
    Matrix partial;  // symmetric, zero diagonal
    std::vector<std::string> names;
};

/// rho_ij = -C_ij / sqrt(C_ii C_jj) with C the inverse correlation matrix.
PairwiseNetwork partial_correlation_network(const CorrelationModel& sigma, std::vector<std::string> names);
PairwiseNetwork partial_correlation_network(const CopulaData& d);

/// One row per unordered pair i < j: i,j,name_i,name_j,partial_correlation.
std::string export_edge_list_csv(const PairwiseNetwork& net);

/// Undirected graph with one weighted edge per pair whose |rho| exceeds `min_abs`.
std::string export_pairwise_dot(const PairwiseNetwork& net, double min_abs = 0.0);

}  // namespace hoinfo
