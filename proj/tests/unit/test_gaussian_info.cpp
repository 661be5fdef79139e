#include "hoinfo/error.hpp"
#include "hoinfo/gaussian_info.hpp"
#include "hoinfo/linalg.hpp"
#include "hoinfo/synthgen.hpp"

#include "../common/fixtures.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace hoinfo;
using doctest::Approx;

namespace {

Matrix tri(double a, double b, double c) {
    Matrix m(3, 3);
    m << 1, a, b, a, 1, c, b, c, 1;
    return m;
}

Dataset column_data(std::vector<std::vector<double>> cols) {
    Matrix m(static_cast<Eigen::Index>(cols[0].size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < cols[j].size(); ++i) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
        }
    }
    return Dataset(m, default_names(cols.size()));
}

}  // namespace

TEST_SUITE("gaussian_info") {

TEST_CASE("normal quantile matches reference values") {
    // scipy.stats.norm.ppf
    CHECK(normal_quantile(0.25) == Approx(-0.6744897501960817).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(1.0 / 7.0) == Approx(-1.0675705238781414).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("copula scores of a three-point column") {
    const auto c = copula_transform(column_data({{1.0, 2.0, 3.0}, {10, 20, 30}, {3, 1, 2}}));
    CHECK(c.scores()(0, 0) == Approx(-0.6744897501960817).epsilon(1e-12));
    CHECK(c.scores()(1, 0) == 0.0);
    CHECK(c.scores()(2, 0) == Approx(0.6744897501960817).epsilon(1e-12));
    CHECK(c.scores().col(0) == c.scores().col(1));
}

TEST_CASE("copula scores use midranks for ties") {
    // scipy rankdata + norm.ppf(r / (N + 1))
    const auto c = copula_transform(column_data(
        {{1.0, 2.0, 2.0, 4.0, 3.0, 0.5}, {5.0, 5.0, 3.0, 1.0, 2.0, 4.0}, {2.0, 1.0, 4.0, 3.0, 5.0, 0.0}}));
    const double expect[6][3] = {{-0.5659488219328631, 0.7916386077433746, -0.1800123697927051},
                                 {0.0, 0.7916386077433746, -0.5659488219328631},
                                 {0.0, -0.1800123697927051, 0.5659488219328631},
                                 {1.0675705238781412, -1.0675705238781414, 0.18001236979270496},
                                 {0.5659488219328631, -0.5659488219328631, 1.0675705238781412},
                                 {-1.0675705238781414, 0.18001236979270496, -1.0675705238781414}};
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 3; ++j) CHECK(c.scores()(i, j) == Approx(expect[i][j]).epsilon(1e-11));
    }
    const auto r = correlation(c);
    CHECK(r(0, 1) == Approx(-0.7374311058191462).epsilon(1e-12));
    CHECK(r(0, 2) == Approx(0.6903074528418405).epsilon(1e-12));
    CHECK(r(1, 2) == Approx(-0.5837777941608707).epsilon(1e-12));
}

TEST_CASE("constant column is rejected") {
    try {
        copula_transform(column_data({{5, 5, 5}, {1, 2, 3}, {3, 2, 1}}));
        FAIL("expected ConstantColumn");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConstantColumn);
    }
}

TEST_CASE("identical columns are not positive definite") {
    const auto c = copula_transform(column_data({{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {2, 1, 5, 3, 4}}));
    CHECK(correlation_matrix(c.scores())(0, 1) == Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(correlation(c), Error);
}

TEST_CASE("correlation matrix is exactly symmetric with unit diagonal") {
    const auto c = copula_transform(testing::independent_data(500, 6, 3));
    const auto r = correlation_matrix(c.scores());
    for (int i = 0; i < 6; ++i) {
        CHECK(r(i, i) == 1.0);
        for (int j = 0; j < 6; ++j) CHECK(r(i, j) == r(j, i));
    }
}

TEST_CASE("independent columns have near-zero correlation") {
    const std::size_t n = 100000;
    const auto r = correlation_matrix(copula_transform(testing::independent_data(n, 4, 11)).scores());
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) CHECK(std::abs(r(i, j)) < 3.0 / std::sqrt(double(n)));
    }
}

TEST_CASE("analytic Omega against an independent log-determinant evaluation") {
    // numpy: (k-2) H(S) - sum_j H(S_-j), H = 1/2 logdet
    Matrix s4(4, 4);
    s4 << 1, 0.5, 0.2, 0.1, 0.5, 1, 0.3, -0.2, 0.2, 0.3, 1, 0.4, 0.1, -0.2, 0.4, 1;
    const auto d4 = omega_analytic(CorrelationModel(s4));
    CHECK(d4.omega == Approx(-0.06189706643294213).epsilon(1e-12));
    CHECK(d4.tc == Approx(0.3808200885026228).epsilon(1e-12));
    CHECK(d4.dtc == Approx(0.44271715493556496).epsilon(1e-12));

    Matrix s5 = Matrix::Constant(5, 5, 0.3);
    s5.diagonal().setOnes();
    CHECK(omega_analytic(CorrelationModel(s5)).omega == Approx(0.11306374102351718).epsilon(1e-12));
}

TEST_CASE("closed-form triplet values") {
    const Loadings l;
    // exact factor-model matrices
    CHECK(std::abs(triplet_omega(l, -0.14849)) < 1e-7);
    CHECK(triplet_omega(l, -0.39) == Approx(-0.5805).epsilon(1e-3));
    CHECK(triplet_omega(l, 0.22) == Approx(0.1750).epsilon(1e-3));
    // the 3-decimal printed matrices
    CHECK(triplet_omega_from_correlations(0.832, 0.545, 0.068) == Approx(-0.5779).epsilon(1e-3));
    CHECK(triplet_omega_from_correlations(0.832, 0.545, 0.678) == Approx(0.1751).epsilon(1e-3));
    CHECK(std::abs(triplet_omega_from_correlations(0.832, 0.545, 0.310)) < 1e-3);
    CHECK(triplet_omega_from_correlations(0, 0, 0) == 0.0);
    CHECK_THROWS_AS(triplet_omega_from_correlations(0.9, 0.9, -0.9), Error);
}

TEST_CASE("identity has zero TC, DTC and Omega for every size") {
    for (Eigen::Index k = 2; k <= 7; ++k) {
        const auto d = omega_analytic(CorrelationModel(Matrix::Identity(k, k)));
        CHECK(d.tc == 0.0);
        CHECK(d.dtc == 0.0);
        CHECK(d.omega == 0.0);
    }
}

TEST_CASE("pairs have Omega zero and TC = DTC = mutual information") {
    Matrix m(2, 2);
    m << 1, 0.6, 0.6, 1;
    const auto d = omega_analytic(CorrelationModel(m));
    const double mi = -0.5 * std::log(1 - 0.36);
    CHECK(d.omega == 0.0);
    CHECK(d.tc == Approx(mi).epsilon(1e-14));
    CHECK(d.dtc == Approx(mi).epsilon(1e-14));
}

TEST_CASE("property: TC and DTC non-negative, Omega = TC - DTC, permutation invariant") {
    std::mt19937_64 gen(2024);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t k = 3 + rep % 5;
        const Matrix s = testing::random_correlation(k, gen);
        const auto d = omega_analytic(CorrelationModel(s));
        CHECK(d.tc >= -1e-10);
        CHECK(d.dtc >= -1e-10);
        CHECK(d.omega == Approx(d.tc - d.dtc).epsilon(1e-9));

        std::vector<Eigen::Index> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        Matrix p(s.rows(), s.cols());
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) p(Eigen::Index(i), Eigen::Index(j)) = s(perm[i], perm[j]);
        }
        CHECK(omega_analytic(CorrelationModel(p)).omega == Approx(d.omega).epsilon(1e-10));
    }
}

TEST_CASE("property: closed-form triplet equals the general path and is symmetric") {
    std::mt19937_64 gen(99);
    for (int rep = 0; rep < 1000; ++rep) {
        const Matrix s = testing::random_correlation(3, gen);
        const double a = s(0, 1), b = s(0, 2), c = s(1, 2);
        const double closed = triplet_omega_from_correlations(a, b, c);
        CHECK(std::abs(closed - omega_analytic(CorrelationModel(s)).omega) < 1e-12);
        CHECK(std::abs(closed - triplet_omega_from_correlations(c, a, b)) < 1e-12);
        CHECK(std::abs(closed - triplet_omega_from_correlations(b, c, a)) < 1e-12);
    }
}

TEST_CASE("conditional correlation") {
    CHECK(conditional_correlation(0.5, 0, 0) == 0.5);
    CHECK(conditional_correlation(0.832, 0.545, 0.310) == Approx(0.831795).epsilon(1e-5));
    CHECK(conditional_correlation(0.9, 0.9, 0.9) == Approx(0.09 / 0.19).epsilon(1e-12));
    CHECK_THROWS_AS(conditional_correlation(0.5, 1.0, 0.2), Error);
}

TEST_CASE("triplet Omega equals the mutual-information gap") {
    // Omega = 1/2 log((1 - rho(X,Y|Z)^2) / (1 - rho(X,Y)^2))
    std::mt19937_64 gen(7);
    for (int rep = 0; rep < 200; ++rep) {
        const Matrix s = testing::random_correlation(3, gen);
        const double pc = conditional_correlation(s(0, 1), s(0, 2), s(1, 2));
        const double gap = 0.5 * std::log((1 - pc * pc) / (1 - s(0, 1) * s(0, 1)));
        CHECK(triplet_omega_from_correlations(s(0, 1), s(0, 2), s(1, 2)) == Approx(gap).epsilon(1e-9));
    }
}

TEST_CASE("omega kernel and linalg helpers") {
    Matrix s(3, 3);
    s << 1, 0.3, 0.2, 0.3, 1, 0.1, 0.2, 0.1, 1;
    std::vector<double> buf(s.data(), s.data() + 9);
    const auto ld = linalg::cholesky_logdet(buf.data(), 3);
    REQUIRE(ld);
    CHECK(*ld == Approx(std::log(s.determinant())).epsilon(1e-13));
    std::vector<double> bad{1, 2, 2, 1};
    CHECK_FALSE(linalg::cholesky_logdet(bad.data(), 2));

    std::mt19937_64 gen(3);
    std::normal_distribution<double> normal;
    std::vector<double> x(37), y(37);
    for (auto& v : x) v = normal(gen);
    for (auto& v : y) v = normal(gen);
    CHECK(linalg::dot(x.data(), y.data(), 37) == linalg::dot(y.data(), x.data(), 37));
    CHECK(linalg::dot(x.data(), y.data(), 37) ==
          Approx(std::inner_product(x.begin(), x.end(), y.begin(), 0.0)).epsilon(1e-12));
}

TEST_CASE("plug-in estimates recover analytic values") {
    const Loadings l;
    const std::size_t n = 10000;
    auto m3 = Multiplet::canonicalize({0, 1, 2}, 3);
    const auto indep = copula_transform(testing::independent_data(n, 3, 1));
    CHECK(std::abs(omega_estimate(indep, m3)) < 0.01);
    const auto syn = copula_transform(sample(triplet_correlation(l, -0.39), n, 2));
    CHECK(omega_estimate(syn, m3) == Approx(triplet_omega(l, -0.39)).epsilon(0.05 / 0.58));
    const auto red = copula_transform(sample(triplet_correlation(l, 0.22), n, 3));
    CHECK(std::abs(omega_estimate(red, m3) - triplet_omega(l, 0.22)) < 0.05);
}

TEST_CASE("sample correlations of a triplet block") {
    const auto c = copula_transform(sample(triplet_correlation(Loadings{}, -0.14849), 100000, 5));
    const auto r = correlation(c);
    CHECK(std::abs(r(0, 1) - 0.832) < 0.01);
    CHECK(std::abs(r(0, 2) - 0.545) < 0.01);
    CHECK(std::abs(r(1, 2) - 0.310) < 0.01);
}

TEST_CASE("bias shift matches the digamma expansion") {
    // scipy.special.digamma: entropy bias of a k-variate Gaussian plug-in
    CHECK(omega_bias_shift(3, 100) == Approx(5.313778672988434e-05).epsilon(1e-8));
    CHECK(omega_bias_shift(4, 50) == Approx(0.0009250693802034249).epsilon(1e-8));
    CHECK(omega_bias_shift(5, 1000) == Approx(5.040247894605443e-06).epsilon(1e-7));
}

TEST_CASE("estimate is invariant to increasing column transforms and column order") {
    const auto d = sample(triplet_correlation(Loadings{}, 0.22), 2000, 8);
    Matrix v = d.values();
    v.col(0) = v.col(0).array().exp();
    v.col(1) = v.col(1).array().cube() + 3.0 * v.col(1).array();
    v.col(2) = 7.5 * v.col(2).array() - 2.0;
    const auto m = Multiplet::canonicalize({0, 1, 2}, 3);
    const double base = omega_estimate(copula_transform(d), m);
    CHECK(omega_estimate(copula_transform(Dataset(v, d.names())), m) == base);

    Matrix perm(v.rows(), 3);
    perm.col(0) = d.values().col(2);
    perm.col(1) = d.values().col(0);
    perm.col(2) = d.values().col(1);
    const Dataset shuffled(perm, {d.names()[2], d.names()[0], d.names()[1]});
    CHECK(omega_estimate(copula_transform(shuffled), m) == base);
}

TEST_CASE("evaluator agrees with the direct estimate") {
    std::mt19937_64 gen(4);
    const auto d = copula_transform(sample(CorrelationModel(testing::random_correlation(6, gen)), 3000, 4));
    const OmegaEvaluator eval(correlation_matrix(d.scores()), d.name_rank(), d.n_obs());
    for (Index a = 0; a < 4; ++a) {
        const std::vector<Index> members{a, Index(a + 1), Index(a + 2)};
        const auto m = Multiplet::canonicalize(members, 6);
        CHECK(*eval(members) == Approx(omega_estimate(d, m)).epsilon(1e-12));
    }
}

}
