#include <doctest.h>

#include <cmath>
#include <vector>

#include "ssklab/edgelimit.hpp"
#include "ssklab/ensembles.hpp"
#include "ssklab/quadrature.hpp"
#include "ssklab/stats.hpp"

using namespace ssklab;
using edgelimit::XiEstimator;
using ensembles::EnsembleKind;

TEST_CASE("Xi cutoff estimator: empty sum leaves minus the correction") {
    // cutoff = 1: value = -(2/pi)(3 pi/2)^{1/3} ~ -1.0668
    auto xe = edgelimit::xi_estimate_from({2.0, 1.0}, 2, 0, XiEstimator::CUTOFF, 1);
    const double expect = -2.0 / kPi * std::pow(1.5 * kPi, 1.0 / 3.0);
    CHECK(xe.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(-1.0668).epsilon(1e-3));
}

TEST_CASE("Xi full estimator on the harmonic toy spectrum") {
    const int n = 50;
    std::vector<double> ev(n);
    for (int j = 0; j < n; ++j) ev[j] = -static_cast<double>(j) / n;
    auto xe = edgelimit::xi_estimate_from(ev, n, 0, XiEstimator::FULL_SPECTRUM, {});
    double harm = 0.0;
    for (int j = 1; j < n; ++j) harm += 1.0 / j;
    CHECK(xe.value == doctest::Approx(std::cbrt(static_cast<double>(n)) * (harm - 1.0))
                          .epsilon(1e-12));
}

TEST_CASE("Xi estimator input validation") {
    CHECK_THROWS_AS(edgelimit::xi_estimate_from({2.0, 1.0}, 2, 0, XiEstimator::CUTOFF, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        edgelimit::xi_estimate_from({1.0, 1.0, 0.0}, 3, 0, XiEstimator::CUTOFF, 2),
        degenerate_spectrum);
    CHECK_THROWS_AS(
        edgelimit::xi_estimate_from({2.0, 1.0}, 4, 0, XiEstimator::FULL_SPECTRUM, {}),
        std::invalid_argument);
}

TEST_CASE("density-of-states correction matches quadrature") {
    // (1/pi) int_0^T x^{-1/2} dx = 2 sqrt(T)/pi; quadrature on [eps, T] plus
    // the exact head 2 sqrt(eps)/pi.
    for (double t : {1.0, 4.0, 25.0}) {
        const double eps = 1e-12;
        auto q = quad::adaptive_gk([](double x) { return 1.0 / std::sqrt(x); }, eps, t,
                                   1e-12, 1e-15, 44);
        const double total = (q.value + 2.0 * std::sqrt(eps)) / kPi;
        CHECK(std::fabs(total - edgelimit::xi_correction_integral(t)) <= 1e-10);
    }
}

TEST_CASE("cutoff and full estimators roughly agree on one large spectrum") {
    auto ev = linalg::tql_eigenvalues(ensembles::tridiag_goe(4000, 71, true));
    auto full = edgelimit::xi_estimate_from(ev, 4000, 71, XiEstimator::FULL_SPECTRUM, {});
    auto cut = edgelimit::xi_estimate_from(ev, 4000, 71, XiEstimator::CUTOFF, 200);
    CHECK(std::fabs(full.value - cut.value) <= 0.75);
}

TEST_CASE("counting stats: reference curve and validation") {
    // T = 4 reference mean 16/(3 pi)
    auto cs = edgelimit::counting_stats(EnsembleKind::GOE_TRIDIAG, 512, {4.0}, 150, 31, 2);
    CHECK(cs.reference_mean[0] == doctest::Approx(16.0 / (3.0 * kPi)).epsilon(1e-14));
    CHECK(cs.empirical_var[0] >= 0.0);
    CHECK(std::fabs(cs.empirical_mean[0] - cs.reference_mean[0]) <= 1.5);

    CHECK_THROWS_AS(
        edgelimit::counting_stats(EnsembleKind::GOE_TRIDIAG, 512, {4.0}, 50, 31, 1),
        std::invalid_argument);  // too few trials
    CHECK_THROWS_AS(
        edgelimit::counting_stats(EnsembleKind::GOE_TRIDIAG, 512, {0.5}, 150, 31, 1),
        std::invalid_argument);  // grid below 1
}

TEST_CASE("fr_trial counting identity at huge T is exact") {
    // With the threshold below every point, the union holds exactly 2n+1
    // particles: floor((2n+1)/2) = n = #GUE.
    const int n = 7;
    auto tr = edgelimit::fr_trial(n, 3, {200.0}, 1, 2, 3);
    CHECK(tr.cnt_union_half[0] == n);
    CHECK(tr.cnt_gue[0] == n);
}

TEST_CASE("fr decimation matches GUE at n=1 (quick)") {
    auto fr = edgelimit::fr_decimation_check(1, 4000, 17, 2);
    REQUIRE(fr.per_index_ks.size() == 1);
    CHECK(fr.per_index_ks[0] <= 0.05);  // exact law; 4000-trial noise floor ~ 0.03
}

TEST_CASE("ks statistic of a sample against itself is zero") {
    std::vector<double> a = {0.3, -1.0, 2.5, 0.3};
    CHECK(stats::ks_statistic(a, a) == 0.0);
}

TEST_CASE("mainconv rejects out-of-regime configurations") {
    CHECK_THROWS_AS(edgelimit::mainconv_test(0.9, 500, 2000, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(edgelimit::mainconv_test(1.5, 100, 2000, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(edgelimit::mainconv_test(1.5, 500, 600, 10, 1), std::invalid_argument);
}

TEST_CASE("fr per-index KS halves when trials quadruple") {
    auto a = edgelimit::fr_decimation_check(2, 1000, 333, 2);
    auto b = edgelimit::fr_decimation_check(2, 4000, 334, 2);
    // exact equality in law: KS is pure noise ~ trials^{-1/2}
    CHECK(b.per_index_ks[0] <= 0.75 * a.per_index_ks[0] + 0.01);
}

TEST_CASE("full and cutoff estimators track each other at n=8000") {
    int ok = 0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
        auto ev = linalg::tql_eigenvalues(
            ensembles::tridiag_goe(8000, 555000 + t, true));
        auto full = edgelimit::xi_estimate_from(ev, 8000, 0, XiEstimator::FULL_SPECTRUM, {});
        auto cut = edgelimit::xi_estimate_from(ev, 8000, 0, XiEstimator::CUTOFF, 100);
        ok += std::fabs(full.value - cut.value) <= 0.5;
    }
    CHECK(ok >= 9);
}
