#include "hoinfo/pipeline.hpp"
#include "hoinfo/synthgen.hpp"

#include "../common/fixtures.hpp"

#include <doctest.h>

using namespace hoinfo;

namespace {

AnalysisConfig small_config(std::size_t max_order = 4) {
    AnalysisConfig cfg;
    cfg.scan.max_order = max_order;
    cfg.bootstrap.n_resamples = 200;
    cfg.bootstrap.seed = 3;
    return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("planted triplets are recovered with their sign") {
    TripletSpec red, syn;
    red.ecov = 0.22;
    syn.ecov = -0.39;
    LayoutSpec layout;
    layout.triplets = {red, syn, red};
    const auto a = assemble(layout);
    const auto d = sample(a.model, 3000, 5, a.names);
    const auto r = analyze(d, small_config());
    REQUIRE(r.estimates.size() == 84 + 126);
    CHECK(r.hypergraphs.redundancy.edges().size() == 2);
    CHECK(r.hypergraphs.synergy.edges().size() == 1);
    CHECK(r.hypergraphs.synergy.edges()[0].members == std::vector<Index>{3, 4, 5});
    std::size_t retained = 0;
    for (const auto& s : r.status) retained += s == "retained";
    CHECK(retained == 3);
    for (std::size_t i = 0; i < r.estimates.size(); ++i) {
        const auto& e = r.estimates[i];
        CHECK(e.ci_low <= e.ci_high);
        CHECK(e.p_adj >= e.p_raw);
        CHECK(e.p_adj <= 1.0);
    }
}

TEST_CASE("the report partitions the scanned multiplets") {
    const auto d = sample(triplet_correlation(Loadings{}, 0.22), 500, 2);
    Matrix v(500, 6);
    v.leftCols(3) = d.values();
    v.rightCols(3) = testing::independent_data(500, 3, 9).values();
    const auto r = analyze(Dataset(v, default_names(6)), small_config(5));
    CHECK(r.report.retained.size() + r.report.rejected_by_test.size() + r.report.rejected_by_pruning.size() ==
          r.estimates.size());
    CHECK(r.hypergraphs.redundancy.edges().size() + r.hypergraphs.synergy.edges().size() == r.report.retained.size());
}

TEST_CASE("results are reproducible and thread independent") {
    TripletSpec syn;
    syn.ecov = -0.39;
    const auto a = assemble(preset_layout(Preset::Model1, syn));
    const auto d = sample(a.model, 400, 8, a.names);
    auto cfg = small_config(3);
    cfg.threads = 1;
    const auto one = analyze(d, cfg);
    cfg.threads = 4;
    const auto four = analyze(d, cfg);
    REQUIRE(one.estimates.size() == four.estimates.size());
    bool same = true;
    for (std::size_t i = 0; i < one.estimates.size(); ++i) {
        const auto &x = one.estimates[i], &y = four.estimates[i];
        same = same && x.omega == y.omega && x.ci_low == y.ci_low && x.ci_high == y.ci_high && x.p_adj == y.p_adj;
    }
    CHECK(same);
    CHECK(one.status == four.status);
    CHECK(hypergraph_to_json(one.hypergraphs.synergy) == hypergraph_to_json(four.hypergraphs.synergy));
}

TEST_CASE("progress is reported") {
    std::vector<std::string> lines;
    analyze(testing::independent_data(100, 4, 1), small_config(3), [&](std::string_view s) { lines.emplace_back(s); });
    CHECK(lines.size() >= 3);
}

}
