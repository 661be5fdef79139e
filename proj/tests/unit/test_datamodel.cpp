#include "hoinfo/datamodel.hpp"
#include "hoinfo/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace hoinfo;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

Hypergraph one_edge_graph() {
    return Hypergraph(Sign::Redundant, 0.01, {"a", "b", "c"}, {{{0, 1, 2}, 0.176, 0.15, 0.2, 0.001}});
}

}  // namespace

TEST_SUITE("datamodel") {

TEST_CASE("canonicalize sorts and validates") {
    CHECK(Multiplet::canonicalize({4, 0, 2}, 5).indices() == std::vector<Index>{0, 2, 4});
    CHECK(Multiplet::canonicalize({0, 1, 2}, 3).order() == 3);
    CHECK(code_of([] { Multiplet::canonicalize({3, 3, 1}, 5); }) == ErrorCode::DuplicateIndex);
    CHECK(code_of([] { Multiplet::canonicalize({0, 1, 7}, 5); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([] { Multiplet::canonicalize({0, 1}, 5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("canonicalize is idempotent and order free") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<Index> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        std::shuffle(v.begin(), v.end(), gen);
        v.resize(3 + rep % 5);
        const auto m = Multiplet::canonicalize(v, 10);
        CHECK(std::is_sorted(m.indices().begin(), m.indices().end()));
        std::shuffle(v.begin(), v.end(), gen);
        CHECK(Multiplet::canonicalize(v, 10) == m);
        CHECK(Multiplet::canonicalize(m.indices(), 10) == m);
    }
}

TEST_CASE("multiplet ordering is by order then lexicographic") {
    auto a = Multiplet::canonicalize({0, 1, 5}, 9);
    auto b = Multiplet::canonicalize({0, 2, 3}, 9);
    auto c = Multiplet::canonicalize({0, 1, 2, 3}, 9);
    CHECK(a < b);
    CHECK(b < c);
    CHECK(c.without(1) == std::vector<Index>{0, 2, 3});
}

TEST_CASE("sign convention") {
    CHECK(sign_of(0.1) == Sign::Redundant);
    CHECK(sign_of(-0.1) == Sign::Synergistic);
    CHECK(sign_of(0.0) == Sign::Synergistic);
}

TEST_CASE("dataset validation") {
    Matrix ok = Matrix::Random(5, 3);
    CHECK_NOTHROW(Dataset(ok, {"a", "b", "c"}));
    CHECK(code_of([&] { Dataset(ok, {"a", "a", "c"}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { Dataset(ok, {"a", "", "c"}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { Dataset(ok, {"a", "b"}); }) == ErrorCode::InvalidArgument);
    Matrix bad = ok;
    bad(2, 1) = std::nan("");
    CHECK(code_of([&] { Dataset(bad, {"a", "b", "c"}); }) == ErrorCode::MalformedInput);
    CHECK(code_of([&] { Dataset(Matrix::Random(2, 3), {"a", "b", "c"}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("correlation model validation") {
    Matrix m = Matrix::Identity(3, 3);
    CHECK_NOTHROW(CorrelationModel{m});
    m(0, 1) = 0.5;
    CHECK_THROWS_AS(CorrelationModel{m}, Error);  // asymmetric
    m(1, 0) = 0.5;
    CHECK_NOTHROW(CorrelationModel{m});
    Matrix dup = Matrix::Ones(3, 3);
    CHECK(code_of([&] { CorrelationModel{dup}; }) == ErrorCode::NotPositiveDefinite);
    Matrix diag = Matrix::Identity(3, 3);
    diag(2, 2) = 2.0;
    CHECK_THROWS_AS(CorrelationModel{diag}, Error);
}

TEST_CASE("empty hypergraph serializes with an empty edge list and round-trips") {
    Hypergraph h(Sign::Synergistic, 0.01, {"a", "b", "c"}, {});
    const auto text = hypergraph_to_json(h);
    CHECK(text.find("\"edges\": []") != std::string::npos);
    CHECK(hypergraph_from_json(text) == h);
}

TEST_CASE("one-edge hypergraph round-trips byte for byte") {
    const auto h = one_edge_graph();
    const auto text = hypergraph_to_json(h);
    const auto back = hypergraph_from_json(text);
    CHECK(back == h);
    CHECK(hypergraph_to_json(back) == text);
    CHECK(text.find("\"sign\": \"redundancy\"") != std::string::npos);
    CHECK(text.find("\"names\"") != std::string::npos);
}

TEST_CASE("hypergraph edges are stored in canonical order") {
    Hypergraph h(Sign::Redundant, 0.01, {"a", "b", "c", "d"},
                 {{{0, 1, 2, 3}, 0.3, 0.2, 0.4, 0.0}, {{1, 2, 3}, 0.1, 0.05, 0.2, 0.0}, {{0, 1, 3}, 0.2, 0.1, 0.3, 0.0}});
    CHECK(h.edges()[0].members == std::vector<Index>{0, 1, 3});
    CHECK(h.edges()[1].members == std::vector<Index>{1, 2, 3});
    CHECK(h.edges()[2].members.size() == 4);
}

TEST_CASE("hypergraph invariants are enforced") {
    CHECK(code_of([] { Hypergraph(Sign::Redundant, 0.01, {"a", "b", "c"}, {{{0, 1, 2}, -0.1, -0.2, -0.05, 0.0}}); }) ==
          ErrorCode::MixedSigns);
    CHECK(code_of([] {
              Hypergraph(Sign::Redundant, 0.01, {"a", "b", "c"},
                         {{{0, 1, 2}, 0.1, 0.0, 0.2, 0.0}, {{0, 1, 2}, 0.2, 0.1, 0.3, 0.0}});
          }) == ErrorCode::SchemaViolation);
    CHECK_THROWS_AS(Hypergraph(Sign::Redundant, 0.01, {"a", "b", "c"}, {{{0, 1, 5}, 0.1, 0.0, 0.2, 0.0}}), Error);
}

TEST_CASE("negative weight in a redundancy file is rejected") {
    auto text = hypergraph_to_json(one_edge_graph());
    const auto pos = text.find("0.176");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "-0.1");
    CHECK(code_of([&] { hypergraph_from_json(text); }) == ErrorCode::MixedSigns);
}

TEST_CASE("schema violations are reported") {
    CHECK(code_of([] { hypergraph_from_json("{"); }) == ErrorCode::SchemaViolation);
    CHECK(code_of([] { hypergraph_from_json(R"({"sign": "both", "alpha": 0.01, "nodes": [], "edges": []})"); }) ==
          ErrorCode::SchemaViolation);
    CHECK(code_of([] { hypergraph_from_json(R"({"sign": "synergy", "alpha": 0.01, "nodes": ["a"]})"); }) ==
          ErrorCode::SchemaViolation);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, -0.5804997324219928, 1e-300, 123456.789, 0.0}) {
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("plain") == "plain");
    CHECK(dot_quote("x\"y") == "\"x\\\"y\"");
}

TEST_CASE("estimate table layout") {
    OInfoEstimate e{Multiplet::canonicalize({0, 1, 2}, 3), 0.25, 0.1, 0.4, 0.001, 0.003};
    const std::vector<OInfoEstimate> v{e};
    const auto csv = estimates_to_csv(v, {"a", "b", "c"});
    CHECK(csv == "order,members,omega,ci_low,ci_high,p_raw,p_adj,sign\n3,a;b;c,0.25,0.1,0.4,0.001,0.003,redundant\n");
    const std::vector<std::string> status{"retained"};
    CHECK(estimates_to_csv(v, {"a", "b", "c"}, status).find(",redundant,retained\n") != std::string::npos);
}

}
