#include "hoinfo/pipeline.hpp"

#include "hoinfo/gaussian_info.hpp"

#include <map>

namespace hoinfo {

AnalysisResult analyze(const Dataset& d, const AnalysisConfig& cfg, const ProgressFn& progress) {
    auto say = [&](const std::string& msg) {
        if (progress) progress(msg);
    };
    cfg.bootstrap.validate();
    MultipletEnumerator enumerator(d.n_vars(), cfg.scan);

    const CopulaData copula = copula_transform(d);
    say("scanning " + std::to_string(enumerator.size()) + " multiplets");
    const ScanResult scanned = scan(copula, cfg.scan, {cfg.threads, cfg.estimator});

    std::vector<Multiplet> multiplets;
    std::vector<double> omegas;
    multiplets.reserve(scanned.estimates.size());
    omegas.reserve(scanned.estimates.size());
    for (const auto& e : scanned.estimates) {
        multiplets.push_back(e.multiplet);
        omegas.push_back(e.omega);
    }

    say("drawing " + std::to_string(cfg.bootstrap.n_resamples) + " bootstrap resamples");
    const ResampleBank bank(d, cfg.bootstrap, cfg.threads);
    say("bootstrapping " + std::to_string(multiplets.size()) + " multiplets");
    const auto summaries =
        summarize_bootstrap(bank, multiplets, omegas, cfg.bootstrap, cfg.pvalue, {cfg.threads, cfg.estimator});

    std::vector<double> p_raw;
    p_raw.reserve(summaries.size());
    for (const auto& s : summaries) p_raw.push_back(s.p_raw);
    const auto p_adj = holm_adjust(p_raw);

    AnalysisResult out;
    out.names = d.names();
    out.redraws = bank.redraws();
    out.estimates.resize(multiplets.size());
    for (std::size_t i = 0; i < multiplets.size(); ++i) {
        out.estimates[i] = {multiplets[i], omegas[i], summaries[i].ci_low, summaries[i].ci_high, p_raw[i], p_adj[i]};
    }

    out.report = prune_hierarchical(out.estimates, {cfg.bootstrap.alpha, cfg.prune_same_sign_only});

    std::map<std::vector<Index>, std::size_t> slot;
    for (std::size_t i = 0; i < multiplets.size(); ++i) slot.emplace(multiplets[i].indices(), i);
    out.status.assign(multiplets.size(), "retained");
    for (const auto& r : out.report.rejected_by_test) {
        out.status[slot.at(r.estimate.multiplet.indices())] =
            r.reason == TestRejection::NotSignificant ? "not_significant" : "interval_contains_zero";
    }
    for (const auto& r : out.report.rejected_by_pruning) out.status[slot.at(r.estimate.multiplet.indices())] = "pruned";

    out.hypergraphs = build_hypergraphs(out.report, d.names(), cfg.bootstrap.alpha);
    say("retained " + std::to_string(out.report.retained.size()) + " multiplets");
    return out;
}

}  // namespace hoinfo
