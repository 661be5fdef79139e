#include "hoinfo/error.hpp"
#include "hoinfo/gaussian_info.hpp"
#include "hoinfo/io.hpp"
#include "hoinfo/pairwise.hpp"
#include "hoinfo/pipeline.hpp"
#include "hoinfo/synthgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>

namespace {

using namespace hoinfo;
using nlohmann::ordered_json;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCap = 4;

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotPositiveDefinite:
        case ErrorCode::DegenerateConditioning:
        case ErrorCode::DegenerateResample:
        case ErrorCode::MissingSubsetEstimate:
            return kExitNumerical;
        case ErrorCode::CombinatorialOverflow:
            return kExitCap;
        default:
            return kExitInput;
    }
}

struct AnalyzeArgs {
    std::string input;
    std::string out = ".";
    std::string replay;
    std::size_t max_order = 4;
    double alpha = 0.01;
    std::optional<double> ci_level;
    std::size_t bootstrap = 1000;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    bool bias_correction = false;
    bool prune_same_sign_only = false;
    std::uint64_t cap = kDefaultMultipletCap;
    std::string pvalue = "normal";
    bool pairwise = false;
    bool quiet = false;
};

struct GenerateArgs {
    std::string preset;
    std::string layout;
    std::optional<double> omega;
    std::optional<double> ecov;
    std::optional<double> link;
    bool link_max = false;
    double c = 0.0;
    std::optional<std::size_t> n;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out = ".";
};

struct TripletArgs {
    std::vector<double> rho;
    std::optional<double> ecov;
};

struct PairwiseArgs {
    std::string input;
    std::string out = ".";
};

void log(bool quiet, std::string_view msg) {
    if (!quiet) std::cerr << "[hoinfo] " << msg << '\n';
}

void apply_replay(AnalyzeArgs& a) {
    const auto doc = nlohmann::json::parse(read_file(a.replay));
    const auto& c = doc.at("config");
    a.max_order = c.at("max_order").get<std::size_t>();
    a.alpha = c.at("alpha").get<double>();
    a.ci_level = c.at("ci_level").get<double>();
    a.bootstrap = c.at("bootstrap").get<std::size_t>();
    a.seed = c.at("seed").get<std::uint64_t>();
    a.pvalue = c.at("pvalue").get<std::string>();
    a.bias_correction = c.at("bias_correction").get<bool>();
    a.prune_same_sign_only = c.at("prune_same_sign_only").get<bool>();
    a.cap = c.at("cap").get<std::uint64_t>();
    a.pairwise = c.value("pairwise", false);
}

int run_analyze(AnalyzeArgs a) {
    if (!a.replay.empty()) apply_replay(a);
    const auto started = std::chrono::steady_clock::now();
    const std::string raw = read_file(a.input);
    const Dataset d = parse_csv(raw);
    log(a.quiet, "read " + std::to_string(d.n_obs()) + " rows x " + std::to_string(d.n_vars()) + " variables");

    AnalysisConfig cfg;
    cfg.scan.max_order = a.max_order;
    cfg.scan.cap = a.cap;
    cfg.bootstrap.n_resamples = a.bootstrap;
    cfg.bootstrap.alpha = a.alpha;
    cfg.bootstrap.ci_level = a.ci_level;
    cfg.bootstrap.seed = a.seed;
    if (a.pvalue == "normal") {
        cfg.pvalue = PValueMethod::Normal;
    } else if (a.pvalue == "sign") {
        cfg.pvalue = PValueMethod::Sign;
    } else {
        throw Error(ErrorCode::InvalidArgument, "--pvalue must be 'normal' or 'sign'");
    }
    cfg.prune_same_sign_only = a.prune_same_sign_only;
    cfg.estimator.bias_correction = a.bias_correction;
    cfg.threads = a.threads;

    const auto result = analyze(d, cfg, [&](std::string_view m) { log(a.quiet, m); });

    ArtifactSet out(a.out);
    out.add("redundancy.json", hypergraph_to_json(result.hypergraphs.redundancy));
    out.add("synergy.json", hypergraph_to_json(result.hypergraphs.synergy));
    out.add("multiplets.csv", estimates_to_csv(result.estimates, result.names, result.status));
    out.add("redundancy_incidence.csv", export_incidence_csv(result.hypergraphs.redundancy));
    out.add("synergy_incidence.csv", export_incidence_csv(result.hypergraphs.synergy));
    out.add("redundancy.dot", export_dot(result.hypergraphs.redundancy));
    out.add("synergy.dot", export_dot(result.hypergraphs.synergy));
    std::vector<std::string> outputs = {"redundancy.json",          "synergy.json",          "multiplets.csv",
                                        "redundancy_incidence.csv", "synergy_incidence.csv", "redundancy.dot",
                                        "synergy.dot"};
    if (a.pairwise) {
        const auto net = partial_correlation_network(copula_transform(d));
        out.add("pairwise.csv", export_edge_list_csv(net));
        out.add("pairwise.dot", export_pairwise_dot(net));
        outputs.push_back("pairwise.csv");
        outputs.push_back("pairwise.dot");
    }

    ordered_json manifest;
    manifest["tool"] = "hoinfo";
    manifest["command"] = "analyze";
    manifest["input"] = {{"path", a.input},
                         {"fnv1a64", fnv1a_hex(raw)},
                         {"n_obs", d.n_obs()},
                         {"n_vars", d.n_vars()}};
    manifest["config"] = {{"max_order", a.max_order},
                          {"alpha", a.alpha},
                          {"ci_level", cfg.bootstrap.level()},
                          {"bootstrap", a.bootstrap},
                          {"seed", a.seed},
                          {"pvalue", a.pvalue},
                          {"multiple_testing", "holm"},
                          {"bias_correction", a.bias_correction},
                          {"prune_same_sign_only", a.prune_same_sign_only},
                          {"cap", a.cap},
                          {"pairwise", a.pairwise}};
    std::size_t pruned = result.report.rejected_by_pruning.size();
    manifest["results"] = {{"multiplets", result.estimates.size()},
                           {"retained_redundant", result.hypergraphs.redundancy.edges().size()},
                           {"retained_synergistic", result.hypergraphs.synergy.edges().size()},
                           {"pruned", pruned},
                           {"bootstrap_redraws", result.redraws}};
    manifest["outputs"] = outputs;
    out.add("run_manifest.json", manifest.dump(2) + "\n");
    out.commit();

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", secs);
    log(a.quiet, "wrote " + std::to_string(outputs.size() + 1) + " files to " + a.out + " in " + buf + " s");
    return 0;
}

int run_generate(const GenerateArgs& g) {
    ArtifactSet out(g.out);
    // "golino" is accepted as an alias of "factor"
    if (g.preset == "factor" || g.preset == "golino") {
        FactorModelSpec spec;
        spec.factor_correlation = g.c;
        if (g.n) spec.n_obs = *g.n;
        const auto d = generate_factor_model(spec, g.seed, g.threads);
        out.add("data.csv", dataset_to_csv(d));
        out.add("truth.json", factor_manifest_json(spec, g.seed));
        out.commit();
        return 0;
    }

    TripletSpec each;
    each.ecov = g.ecov;
    each.target_omega = g.omega;
    if (!each.ecov && !each.target_omega) each.target_omega = 0.0;

    LayoutSpec layout;
    if (!g.layout.empty()) {
        layout = layout_from_json(read_file(g.layout), each);
    } else if (auto preset = parse_preset(g.preset)) {
        layout = preset_layout(*preset, each);
    } else {
        throw Error(ErrorCode::InvalidArgument, "give --layout or --preset model1|model2|model3|factor");
    }
    if (g.link) {
        for (auto& l : layout.links) l.value = *g.link;
    }
    if (g.link_max) {
        const double v = link_max(layout);
        for (auto& l : layout.links) l.value = v;
        std::cerr << "[hoinfo] link value set to " << format_number(v) << '\n';
    }
    const auto model = assemble(layout);
    const std::size_t n = g.n.value_or(5000);
    const auto d = sample(model.model, n, g.seed, model.names, g.threads);
    out.add("data.csv", dataset_to_csv(d));
    out.add("truth.json", layout_manifest_json(layout, model, n, g.seed));
    out.commit();
    return 0;
}

int run_triplet_info(const TripletArgs& t) {
    double a = 0, b = 0, c = 0;
    if (t.ecov) {
        const auto m = triplet_correlation(Loadings{}, *t.ecov);
        a = m(0, 1);
        b = m(0, 2);
        c = m(1, 2);
    } else if (t.rho.size() == 3) {
        a = t.rho[0];
        b = t.rho[1];
        c = t.rho[2];
    } else {
        throw Error(ErrorCode::InvalidArgument, "give rho_xy rho_xz rho_yz or --ecov");
    }
    // values that round to zero print without a sign
    auto z = [](double v) { return std::abs(v) < 5e-7 ? 0.0 : v; };
    Matrix m(3, 3);
    m << 1, a, b, a, 1, c, b, c, 1;
    const auto dec = omega_analytic(CorrelationModel(m));
    std::printf("rho_xy %.6f\nrho_xz %.6f\nrho_yz %.6f\n", z(a), z(b), z(c));
    std::printf("omega %.6f\ntc %.6f\ndtc %.6f\n", z(dec.omega), z(dec.tc), z(dec.dtc));
    std::printf("rho_xy_given_z %.6f\n", z(conditional_correlation(a, b, c)));
    return 0;
}

int run_pairwise(const PairwiseArgs& p) {
    const auto d = read_csv(p.input);
    const auto net = partial_correlation_network(copula_transform(d));
    ArtifactSet out(p.out);
    out.add("pairwise.csv", export_edge_list_csv(net));
    out.add("pairwise.dot", export_pairwise_dot(net));
    out.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Higher-order interactions via O-information"};
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Scan multiplets, bootstrap, prune and emit hypergraphs");
    analyze_cmd->add_option("input", an.input, "CSV with a header row of variable names")->required();
    analyze_cmd->add_option("--out", an.out, "Output directory");
    analyze_cmd->add_option("--max-order", an.max_order, "Largest multiplet order")->check(CLI::Range(3, 64));
    analyze_cmd->add_option("--alpha", an.alpha, "Family-wise significance level");
    analyze_cmd->add_option("--ci-level", an.ci_level, "Bootstrap CI level (default 1 - alpha)");
    analyze_cmd->add_option("--bootstrap", an.bootstrap, "Number of bootstrap resamples");
    analyze_cmd->add_option("--seed", an.seed, "Bootstrap seed");
    analyze_cmd->add_option("--threads", an.threads, "Worker threads (0 = all cores)");
    analyze_cmd->add_flag("--bias-correction", an.bias_correction, "Apply the small-sample entropy correction");
    analyze_cmd->add_flag("--prune-same-sign-only", an.prune_same_sign_only,
                          "Compare CIs only with same-sign sub-multiplets");
    analyze_cmd->add_option("--cap", an.cap, "Maximum number of multiplets (0 = unlimited)");
    analyze_cmd->add_option("--pvalue", an.pvalue, "Bootstrap p-value: normal or sign");
    analyze_cmd->add_flag("--pairwise", an.pairwise, "Also write the partial-correlation network");
    analyze_cmd->add_option("--replay", an.replay, "Take the configuration from a run_manifest.json");
    analyze_cmd->add_flag("--quiet", an.quiet, "No progress messages");

    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "Sample a dataset with planted structure");
    gen_cmd->add_option("--preset", gen.preset, "model1, model2, model3 or factor (three-factor model)");
    gen_cmd->add_option("--layout", gen.layout, "Layout JSON file");
    gen_cmd->add_option("--omega", gen.omega, "Target Omega of every triplet");
    gen_cmd->add_option("--ecov", gen.ecov, "Residual covariance of every triplet");
    gen_cmd->add_option("--link", gen.link, "Value of every link");
    gen_cmd->add_flag("--link-max", gen.link_max, "Use the largest positive-definite uniform link value");
    gen_cmd->add_option("--c", gen.c, "Factor correlation for the factor preset");
    gen_cmd->add_option("--n", gen.n, "Number of observations");
    gen_cmd->add_option("--seed", gen.seed, "Sampling seed");
    gen_cmd->add_option("--threads", gen.threads, "Worker threads (0 = all cores)");
    gen_cmd->add_option("--out", gen.out, "Output directory");

    TripletArgs trip;
    auto* trip_cmd = app.add_subcommand("triplet-info", "Closed-form Omega, TC, DTC of a triplet");
    trip_cmd->add_option("rho", trip.rho, "rho_xy rho_xz rho_yz")->expected(0, 3);
    trip_cmd->add_option("--ecov", trip.ecov, "Build the triplet from default loadings and this ecov");

    PairwiseArgs pw;
    auto* pw_cmd = app.add_subcommand("pairwise", "Partial-correlation network");
    pw_cmd->add_option("input", pw.input, "CSV with a header row")->required();
    pw_cmd->add_option("--out", pw.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*analyze_cmd) return run_analyze(an);
        if (*gen_cmd) return run_generate(gen);
        if (*trip_cmd) return run_triplet_info(trip);
        if (*pw_cmd) return run_pairwise(pw);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: SchemaViolation: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
