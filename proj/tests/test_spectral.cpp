#include <doctest.h>

#include <cmath>
#include <vector>

#include "ssklab/ensembles.hpp"
#include "ssklab/quadrature.hpp"
#include "ssklab/rng.hpp"
#include "ssklab/spectral.hpp"
#include "ssklab/stats.hpp"

using namespace ssklab;
using ensembles::EnsembleKind;
using ensembles::SpectrumSample;

namespace {
SpectrumSample synthetic(std::vector<double> ev) {
    SpectrumSample s;
    s.kind = EnsembleKind::GOE_DENSE;
    s.n = static_cast<int>(ev.size());
    s.seed = 0;
    s.eigenvalues = std::move(ev);
    return s;
}
}  // namespace

TEST_CASE("semicircle cdf closed form") {
    CHECK(spectral::semicircle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(spectral::semicircle_cdf(2.0) == 1.0);
    CHECK(spectral::semicircle_cdf(-2.5) == 0.0);
    // 0.5 + sqrt(3)/(4 pi) + 1/6
    const double expect = 0.5 + std::sqrt(3.0) / (4.0 * kPi) + 1.0 / 6.0;
    CHECK(spectral::semicircle_cdf(1.0) == doctest::Approx(expect).epsilon(1e-14));
    // matches direct quadrature of the density
    auto q = quad::adaptive_gk([](double x) { return spectral::semicircle_density(x); },
                               -2.0, 0.7, 1e-12);
    CHECK(spectral::semicircle_cdf(0.7) == doctest::Approx(q.value).epsilon(1e-10));
}

TEST_CASE("classical locations: symmetry, edges, and quantile equation") {
    auto cl = spectral::classical_locations(100);
    CHECK(cl.gamma[49] == doctest::Approx(0.0).epsilon(1e-10));  // i = n/2
    CHECK(cl.gamma[99] == doctest::Approx(-2.0).epsilon(1e-9));  // i = n
    // gamma_1 solves int_gamma^2 rho = 0.01; edge asymptotic within 5%
    const double edge = std::pow(3.0 * kPi * 1.0 / (2.0 * 100.0), 2.0 / 3.0);
    CHECK(std::fabs((2.0 - cl.gamma[0]) - edge) / edge <= 0.05);

    for (int n : {10, 100, 1000, 10000}) {
        auto c = spectral::classical_locations(n);
        for (int i = 1; i <= n; i += std::max(1, n / 7)) {
            const double mass = 1.0 - spectral::semicircle_cdf(c.gamma[i - 1]);
            CHECK(std::fabs(mass - static_cast<double>(i) / n) <= 1e-9);
        }
    }
}

TEST_CASE("edge statistics on the two-point spectrum") {
    auto s = synthetic({1.0, -1.0});
    auto st = spectral::edge_statistics(s, 2.0);
    CHECK(st.m_tilde == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(st.m_tilde_prime == doctest::Approx(0.125).epsilon(1e-15));
    CHECK_THROWS_AS(spectral::edge_statistics(synthetic({1.0, 1.0}), 2.0),
                    degenerate_spectrum);
}

TEST_CASE("edge statistics scale linearly in the gap size") {
    auto base = synthetic({0.5, 0.1, -0.4, -1.1});
    auto st1 = spectral::edge_statistics(base, 1.7);
    const double t = 3.0;
    std::vector<double> scaled = {0.5};
    for (int j = 1; j < 4; ++j)
        scaled.push_back(0.5 + t * (base.eigenvalues[j] - 0.5));
    auto st2 = spectral::edge_statistics(synthetic(scaled), 1.7);
    CHECK(st2.m_tilde == doctest::Approx(st1.m_tilde / t).epsilon(1e-12));
    CHECK(st2.m_tilde_prime == doctest::Approx(st1.m_tilde_prime / (t * t)).epsilon(1e-12));
}

TEST_CASE("event flags: degenerate gap fails, exact classical locations pass") {
    auto cl = spectral::classical_locations(6);
    auto exact = synthetic(std::vector<double>(cl.gamma.begin(), cl.gamma.end()));
    auto fl = spectral::event_flags(exact, cl, 0.1, 0.05);
    CHECK(fl.rigidity_ok);

    auto degen = synthetic({1.0, 1.0, 0.0, -0.5, -0.9, -1.2});
    CHECK_FALSE(spectral::event_flags(degen, cl, 0.1, 0.05).gap_ok);
    CHECK_THROWS_AS(spectral::event_flags(exact, cl, 0.5, 0.05), std::invalid_argument);
}

TEST_CASE("gap_tail basics and near-linear small-s behavior") {
    std::vector<SpectrumSample> samples;
    for (int t = 0; t < 2000; ++t)
        samples.push_back(
            ensembles::sample_spectrum(EnsembleKind::GOE_TRIDIAG, 500, 4000000 + t));
    auto gt = spectral::gap_tail(samples, {0.1, 0.4, 1.0, 50.0});
    CHECK(gt.cdf[3] == 1.0);                 // beyond the sample max
    for (std::size_t i = 1; i < gt.cdf.size(); ++i) CHECK(gt.cdf[i] >= gt.cdf[i - 1]);
    // CDF(0.1)/0.1 <= 3 CDF(0.4)/0.4 (linear tail bound up to noise)
    CHECK(gt.cdf[0] / 0.1 <= 3.0 * gt.cdf[1] / 0.4 + 1e-12);

    samples[5].n = 250;
    CHECK_THROWS_AS(spectral::gap_tail(samples, {0.1}), std::invalid_argument);
}

TEST_CASE("stieltjes transform basics") {
    auto s1 = synthetic({0.0});
    CHECK(spectral::stieltjes(s1, {0.0, 1.0}) == cplx(0.0, 1.0));  // 1/(0 - i) = i
    CHECK_THROWS_AS(spectral::stieltjes(s1, {0.0, -1.0}), std::invalid_argument);

    // Laurent regime: m_N ~ -1/z + O(|z|^-2 max|l|)
    auto s = synthetic({0.9, 0.1, -0.4});
    const cplx z(0.0, 1000.0);
    CHECK(std::abs(spectral::stieltjes(s, z) + 1.0 / z) <= 0.9 / std::norm(z));

    // conjugate symmetry via the unrestricted evaluation
    const cplx w(0.3, 0.02);
    CHECK(spectral::detail::stieltjes_any(s.eigenvalues, std::conj(w)) ==
          std::conj(spectral::detail::stieltjes_any(s.eigenvalues, w)));
}

TEST_CASE("local law at z = 0.5 + 0.01i for n = 1000") {
    const cplx z(0.5, 0.01);
    const cplx msc = spectral::m_sc(z);
    int ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        auto s = ensembles::sample_spectrum(EnsembleKind::GOE_TRIDIAG, 1000, 52000 + t);
        ok += std::abs(spectral::stieltjes(s, z) - msc) <=
              std::pow(10.0, 0.1) / (1000.0 * 0.01);
    }
    CHECK(ok >= 95);
}

TEST_CASE("m_sc satisfies the self-consistent equation") {
    for (cplx z : {cplx(0.3, 0.5), cplx(-1.2, 0.01), cplx(2.5, 0.1)}) {
        const cplx m = spectral::m_sc(z);
        CHECK(std::abs(m * m + z * m + 1.0) <= 1e-12);
        CHECK(m.imag() > 0.0);
    }
}

TEST_CASE("hs_trace reproduces the direct spectral sum") {
    auto bump = spectral::bump_function(0.0, 0.8, 1.0);
    CHECK(spectral::hs_trace(synthetic({0.0}), bump) == doctest::Approx(1.0).epsilon(1e-6));

    // f == 0 on the spectrum support
    auto far = spectral::bump_function(10.0, 0.5, 1.0);
    CHECK(std::fabs(spectral::hs_trace(synthetic({0.0, 1.0}), far)) <= 1e-8);

    for (int t = 0; t < 6; ++t) {
        auto s = ensembles::sample_spectrum(EnsembleKind::GOE_DENSE, 50, 640 + t);
        rng::SplitMix64 g(1700 + t);
        auto b = spectral::bump_function(2.0 * g.uniform01() - 1.0, 0.3 + 0.7 * g.uniform01(),
                                         0.5 + g.uniform01());
        double direct = 0;
        for (double l : s.eigenvalues) direct += b.f(l);
        CHECK(std::fabs(spectral::hs_trace(s, b) - direct) <= 1e-6);
    }
}

TEST_CASE("hs_trace works with a finite-difference second derivative") {
    auto s = ensembles::sample_spectrum(EnsembleKind::GOE_DENSE, 30, 41);
    auto b = spectral::bump_function(0.2, 0.9, 1.3);
    spectral::TestFunction no_fpp = b;
    no_fpp.fpp.reset();
    double direct = 0;
    for (double l : s.eigenvalues) direct += b.f(l);
    CHECK(std::fabs(spectral::hs_trace(s, no_fpp) - direct) <= 1e-6);
}
