#include "ssklab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssklab/quadrature.hpp"

namespace ssklab::spectral {

double semicircle_density(double e) {
    const double t = 4.0 - e * e;
    return t > 0.0 ? std::sqrt(t) / (2.0 * kPi) : 0.0;
}

double semicircle_cdf(double e) {
    if (e <= -2.0) return 0.0;
    if (e >= 2.0) return 1.0;
    // antiderivative (x sqrt(4-x^2)/2 + 2 asin(x/2)) / (2 pi), anchored at -2
    return (e * std::sqrt(4.0 - e * e) / 2.0 + 2.0 * std::asin(0.5 * e) + kPi) / (2.0 * kPi);
}

cplx m_sc(cplx z) {
    if (z.imag() == 0.0) throw std::invalid_argument("m_sc: z must be off the real axis");
    // sqrt(z-2) sqrt(z+2) has the cut exactly on [-2,2] and behaves like z at
    // infinity, giving the Stieltjes branch m_sc ~ -1/z.
    const cplx s = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
    return 0.5 * (-z + s);
}

ClassicalLocations classical_locations(int n) {
    if (n < 1) throw std::invalid_argument("classical_locations: n must be >= 1");
    ClassicalLocations cl;
    cl.n = n;
    cl.gamma.resize(n);
    for (int i = 1; i <= n; ++i) {
        const double target = static_cast<double>(n - i) / n;  // CDF(gamma_i)
        double lo = -2.0, hi = 2.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            if (semicircle_cdf(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        double g = 0.5 * (lo + hi);
        const double rho = semicircle_density(g);
        if (rho > 1e-14) g -= (semicircle_cdf(g) - target) / rho;
        cl.gamma[i - 1] = std::clamp(g, -2.0, 2.0);
    }
    return cl;
}

EdgeStatistics edge_statistics(const SpectrumSample& s, double beta) {
    const int n = s.n;
    if (n < 2) throw std::invalid_argument("edge_statistics: n must be >= 2");
    if (beta <= 1.0) throw std::invalid_argument("edge_statistics: beta must be > 1");
    const double l1 = s.eigenvalues[0];
    if (s.eigenvalues[1] >= l1)
        throw degenerate_spectrum("edge_statistics: lambda_1 must exceed lambda_2");
    const double gamma = l1 + 1.0 / ((beta - 1.0) * n);
    EdgeStatistics st;
    for (int j = 1; j < n; ++j) {
        const double d1 = s.eigenvalues[j] - l1;
        const double dg = s.eigenvalues[j] - gamma;
        st.m_tilde += 1.0 / d1;
        st.m_tilde_prime += 1.0 / (d1 * d1);
        st.m_tilde_at_gamma += 1.0 / dg;
        st.m_tilde_prime_at_gamma += 1.0 / (dg * dg);
    }
    const double inv_n = 1.0 / n;
    st.m_tilde *= inv_n;
    st.m_tilde_prime *= inv_n;
    st.m_tilde_at_gamma *= inv_n;
    st.m_tilde_prime_at_gamma *= inv_n;
    return st;
}

EventFlags event_flags(const SpectrumSample& s, const ClassicalLocations& gamma, double delta,
                       double eps1) {
    if (!(delta > 0.0 && delta < 1.0 / 3.0))
        throw std::invalid_argument("event_flags: delta must lie in (0, 1/3)");
    if (!(eps1 > 0.0)) throw std::invalid_argument("event_flags: eps1 must be positive");
    const int n = s.n;
    EventFlags fl;
    fl.delta = delta;
    fl.eps1 = eps1;
    const double n23 = std::pow(n, 2.0 / 3.0);
    fl.gap_ok = n >= 2 && n23 * (s.eigenvalues[0] - s.eigenvalues[1]) > std::pow(n, -delta);
    const double amp = std::pow(n, eps1 / 10.0) / n23;
    fl.rigidity_ok = true;
    for (int i = 1; i <= n; ++i) {
        const double denom = std::cbrt(static_cast<double>(std::min(i, n + 1 - i)));
        if (std::fabs(s.eigenvalues[i - 1] - gamma.gamma[i - 1]) > amp / denom) {
            fl.rigidity_ok = false;
            break;
        }
    }
    fl.event_f = fl.gap_ok && fl.rigidity_ok;
    return fl;
}

EventFlags event_flags(const SpectrumSample& s, double delta, double eps1) {
    return event_flags(s, classical_locations(s.n), delta, eps1);
}

GapTail gap_tail(const std::vector<SpectrumSample>& samples, const std::vector<double>& s_grid) {
    if (samples.size() < 100)
        throw std::invalid_argument("gap_tail: need at least 100 samples");
    for (const auto& s : samples)
        if (s.kind != samples[0].kind || s.n != samples[0].n)
            throw std::invalid_argument("gap_tail: mixed ensembles");
    const int trials = static_cast<int>(samples.size());
    const double n23 = std::pow(samples[0].n, 2.0 / 3.0);
    std::vector<double> gaps(trials);
    for (int t = 0; t < trials; ++t)
        gaps[t] = n23 * (samples[t].eigenvalues[0] - samples[t].eigenvalues[1]);
    GapTail gt;
    gt.s_grid = s_grid;
    gt.trials = trials;
    for (double sv : s_grid) {
        int cnt = 0;
        for (double g : gaps) cnt += (g < sv);
        const double p = static_cast<double>(cnt) / trials;
        gt.cdf.push_back(p);
        gt.std_error.push_back(std::sqrt(std::max(p * (1.0 - p), 0.0) / trials));
    }
    return gt;
}

cplx detail::stieltjes_any(const std::vector<double>& eigenvalues, cplx z) {
    cplx sum(0.0);
    for (double l : eigenvalues) sum += 1.0 / (l - z);
    return sum / static_cast<double>(eigenvalues.size());
}

cplx stieltjes(const SpectrumSample& s, cplx z) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("stieltjes: Im z must be positive");
    return detail::stieltjes_any(s.eigenvalues, z);
}

// --- Helffer-Sjostrand ---------------------------------------------------------

namespace {

// Quintic plateau cutoff: 1 for |y|<=1, 0 for |y|>=2, C^2 ramp between.
double hs_chi(double y) {
    const double a = std::fabs(y);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double s = a - 1.0;
    return 1.0 - (10.0 - 15.0 * s + 6.0 * s * s) * s * s * s;
}

double hs_chi_prime(double y) {
    const double a = std::fabs(y);
    if (a <= 1.0 || a >= 2.0) return 0.0;
    const double s = a - 1.0;
    const double d = -30.0 * s * s * (1.0 - s) * (1.0 - s);
    return y >= 0.0 ? d : -d;
}

}  // namespace

TestFunction bump_function(double center, double width, double amp) {
    auto core = [](double t, int deriv) -> double {
        const double om = 1.0 - t * t;
        if (om < 1.4e-3) return 0.0;  // value below 1e-300 anyway
        const double b = std::exp(1.0 - 1.0 / om);
        if (deriv == 0) return b;
        const double u = -2.0 * t / (om * om);
        if (deriv == 1) return b * u;
        return b * (u * u - (2.0 + 6.0 * t * t) / (om * om * om));
    };
    TestFunction tf;
    tf.f = [=](double x) { return amp * core((x - center) / width, 0); };
    tf.fp = [=](double x) { return amp / width * core((x - center) / width, 1); };
    tf.fpp = [=](double x) { return amp / (width * width) * core((x - center) / width, 2); };
    tf.support_lo = center - width;
    tf.support_hi = center + width;
    return tf;
}

double hs_trace(const SpectrumSample& s, const TestFunction& tf, double tol) {
    const double lo = tf.support_lo, hi = tf.support_hi;
    if (!(hi > lo)) throw std::invalid_argument("hs_trace: empty support");
    std::function<double(double)> fpp;
    if (tf.fpp) {
        fpp = *tf.fpp;
    } else {
        const double h = 1e-6 * (hi - lo);
        auto fp = tf.fp;
        fpp = [fp, h](double x) { return (fp(x + h) - fp(x - h)) / (2.0 * h); };
    }

    const auto& ev = s.eigenvalues;
    auto resolvent_sum = [&ev](cplx z) {
        cplx sum(0.0);
        for (double l : ev) sum += 1.0 / (l - z);
        return sum;
    };

    // dbar f~ = (1/2) [ i y f''(x) chi(y) + (i f(x) - y f'(x)) chi'(y) ],
    // integrated against sum_i (lambda_i - z)^{-1} over the upper half plane;
    // the lower half is the conjugate, so the total is twice the real part.
    const double rel_inner = std::max(1e-12, 0.01 * tol);
    const double rel_outer = std::max(1e-12, 0.1 * tol);
    auto outer = [&](double x) {
        const double fx = tf.f(x), fpx = tf.fp(x), fppx = fpp(x);
        auto inner = [&](double y) {
            const cplx dbar =
                0.5 * (cplx(0.0, y * fppx) * hs_chi(y) +
                       (cplx(0.0, fx) - y * fpx) * hs_chi_prime(y));
            return dbar * resolvent_sum(cplx(x, y));
        };
        auto r = quad::adaptive_gk(inner, 0.0, 2.0, rel_inner, tol * 1e-4, 36);
        return r.value;
    };
    auto r = quad::adaptive_gk(outer, lo, hi, rel_outer, tol * 0.1, 36);
    return 2.0 * r.value.real() / kPi;
}

}  // namespace ssklab::spectral
