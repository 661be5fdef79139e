#pragma once

#include "hoinfo/datamodel.hpp"
#include "hoinfo/hypergraph.hpp"
#include "hoinfo/inference.hpp"
#include "hoinfo/scan.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hoinfo {

struct AnalysisConfig {
    ScanConfig scan;
    BootstrapConfig bootstrap;
    PValueMethod pvalue = PValueMethod::Normal;
    bool prune_same_sign_only = false;
    EstimatorOptions estimator;
    std::size_t threads = 0;
};

struct AnalysisResult {
    std::vector<std::string> names;
    /// Every scanned multiplet in canonical order, with CI and p-values.
    std::vector<OInfoEstimate> estimates;
    /// Parallel to `estimates`: retained, not_significant,
    /// interval_contains_zero or pruned.
    std::vector<std::string> status;
    SignificanceReport report;
    HypergraphPair hypergraphs;
    std::size_t redraws = 0;
};

using ProgressFn = std::function<void(std::string_view)>;

/// Copula transform, scan, bootstrap, Holm adjustment over all scanned
/// multiplets, pruning, hypergraphs.
AnalysisResult analyze(const Dataset& d, const AnalysisConfig& cfg, const ProgressFn& progress = {});

}  // namespace hoinfo
