#include "ssklab/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssklab/spectral.hpp"

namespace ssklab::saddle {

SaddleFrame make_saddle_frame(const SpectrumSample& s, double beta, double gamma_factor) {
    if (beta <= 1.0) throw std::invalid_argument("make_saddle_frame: beta must be > 1");
    if (!(gamma_factor > 0.0))
        throw std::invalid_argument("make_saddle_frame: gamma_factor must be positive");
    SaddleFrame fr;
    fr.beta = beta;
    fr.c_beta = 1.0 / (beta - 1.0);
    fr.n = s.n;
    fr.eigenvalues = s.eigenvalues;
    fr.gamma = s.eigenvalues[0] + gamma_factor * fr.c_beta / s.n;
    double mt = 0.0, mtp = 0.0;
    for (int j = 1; j < s.n; ++j) {
        const double d = s.eigenvalues[j] - fr.gamma;
        mt += 1.0 / d;
        mtp += 1.0 / (d * d);
    }
    fr.m_tilde_gamma = mt / s.n;
    fr.m_tilde_prime_gamma = mtp / s.n;
    fr.a = 0.5 * (beta + fr.m_tilde_gamma);
    fr.b = fr.c_beta;
    return fr;
}

double eta_of_E(double e, double beta, int n) {
    if (beta <= 1.0) throw std::invalid_argument("eta_of_E: beta must be > 1");
    if (e > 0.0) throw std::invalid_argument("eta_of_E: E must be <= 0");
    if (e == 0.0) return 0.0;
    const double cb = 1.0 / (beta - 1.0);
    const double x = e + cb / n;
    // h(eta) = (1/N) arg(x + i eta) - eta (beta - 1); h(0+) > 0 for E < 0 and
    // h is eventually negative, so bisection on [0, pi/(N(beta-1))] brackets
    // the unique positive root.
    auto h = [&](double eta) { return std::atan2(eta, x) / n - eta * (beta - 1.0); };
    double hi = kPi / (n * (beta - 1.0));
    double lo = 0.0;
    if (h(hi) > 0.0) throw numeric_failure("eta_of_E: root not bracketed");
    for (int it = 0; it < 200 && hi - lo > 1e-18 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

cplx phase_G(cplx z, const SpectrumSample& s, double beta) {
    if (z.imag() == 0.0 && z.real() <= s.eigenvalues[0])
        throw branch_cut_error("phase_G: z lies on the branch cut");
    cplx logsum(0.0);
    for (double l : s.eigenvalues) logsum += std::log(z - l);
    return beta * z - logsum / static_cast<double>(s.n);
}

cplx phase_G_rel(cplx z, const SaddleFrame& fr) {
    if (z.imag() == 0.0 && z.real() <= fr.eigenvalues[0])
        throw branch_cut_error("phase_G_rel: z lies on the branch cut");
    const cplx dz = z - fr.gamma;
    cplx logsum(0.0);
    for (double l : fr.eigenvalues) logsum += clog1p(dz / (fr.gamma - l));
    return fr.beta * dz - logsum / static_cast<double>(fr.n);
}

cplx phase_G_prime(cplx z, const SpectrumSample& s, double beta) {
    if (z.imag() == 0.0 && z.real() <= s.eigenvalues[0])
        throw branch_cut_error("phase_G_prime: z lies on the branch cut");
    return beta + spectral::detail::stieltjes_any(s.eigenvalues, z);
}

cplx phase_g(cplx z, const SaddleFrame& fr) {
    const cplx w = z * static_cast<double>(fr.n) / fr.c_beta;
    if (w.imag() == 0.0 && w.real() <= -1.0)
        throw branch_cut_error("phase_g: 1 + Nz/c_beta on the negative real axis");
    return (fr.beta + fr.m_tilde_gamma) * z - clog1p(w) / static_cast<double>(fr.n);
}

std::vector<cplx> gamma_hat_points(const SaddleFrame& fr, double kappa, int count) {
    const double e_end = -std::pow(fr.n, -1.0 + kappa);
    std::vector<cplx> pts;
    pts.reserve(2 * count);
    const double eta_end = eta_of_E(e_end, fr.beta, fr.n);
    // Gamma_3: vertical connector at E = -N^{-1+kappa}, 0 < eta <= eta(E_end)
    for (int i = 1; i <= count / 2; ++i)
        pts.emplace_back(e_end, eta_end * i / (count / 2));
    // Gamma_1: the eta(E) arc from E_end up to 0
    for (int i = 1; i <= count; ++i) {
        const double e = e_end * (1.0 - static_cast<double>(i) / count);
        pts.emplace_back(e, eta_of_E(e, fr.beta, fr.n));
    }
    return pts;
}

// --- keyhole ---------------------------------------------------------------------

cplx keyhole_closed_form(KeyholeKind kind, double a, double b) {
    if (!(a > 0.0) || b < 0.0)
        throw std::invalid_argument("keyhole_closed_form: need a > 0, b >= 0");
    const double sq_pi = std::sqrt(kPi);
    const double eab = std::exp(-a * b);
    const double ra = std::sqrt(a);
    const cplx i_unit(0.0, 1.0);
    switch (kind) {
        case KeyholeKind::INV_SQRT:
            return 2.0 * i_unit * eab * sq_pi / ra;
        case KeyholeKind::SQRT:
            return -i_unit * eab * sq_pi / (a * ra);
        case KeyholeKind::POW_3_2:
            return 1.5 * i_unit * eab * sq_pi / (a * a * ra);
        case KeyholeKind::INV_SQRT_Z2:
            return i_unit * eab * sq_pi / ra * (1.5 / (a * a) + 2.0 * b / a + 2.0 * b * b);
        case KeyholeKind::INV_POW_3_2:
            return 4.0 * i_unit * eab * sq_pi * ra;
        case KeyholeKind::INV_POW_3_2_Z2:
            return i_unit * eab * sq_pi / ra * (-1.0 / a - 4.0 * b + 4.0 * b * b * a);
        case KeyholeKind::INV_POW_5_2:
            return i_unit * eab * sq_pi * (8.0 / 3.0) * a * ra;
        case KeyholeKind::INV_POW_5_2_Z2:
            return i_unit * eab * sq_pi / ra * (8.0 * a * a * b * b / 3.0 - 8.0 * a * b + 2.0);
    }
    throw std::invalid_argument("keyhole_closed_form: unknown kind");
}

std::function<cplx(cplx)> keyhole_integrand(KeyholeKind kind, double a, double b) {
    double power = 0.0;
    bool z2 = false;
    switch (kind) {
        case KeyholeKind::INV_SQRT: power = -0.5; break;
        case KeyholeKind::SQRT: power = 0.5; break;
        case KeyholeKind::POW_3_2: power = 1.5; break;
        case KeyholeKind::INV_SQRT_Z2: power = -0.5; z2 = true; break;
        case KeyholeKind::INV_POW_3_2: power = -1.5; break;
        case KeyholeKind::INV_POW_3_2_Z2: power = -1.5; z2 = true; break;
        case KeyholeKind::INV_POW_5_2: power = -2.5; break;
        case KeyholeKind::INV_POW_5_2_Z2: power = -2.5; z2 = true; break;
    }
    return [=](cplx z) {
        cplx v = std::exp(a * z) * std::pow(z + b, power);
        if (z2) v *= z * z;
        return v;
    };
}

namespace {
void check_spec(const ContourSpec& spec) {
    if (!(spec.panel_target_error > 0.0 && spec.panel_target_error <= 1e-6))
        throw std::invalid_argument("ContourSpec: panel_target_error must lie in (0, 1e-6]");
    if (!(spec.truncation_height > 0.0) || spec.max_panels < 1)
        throw std::invalid_argument("ContourSpec: bad truncation or panel budget");
}
}  // namespace

cplx keyhole_quadrature(const std::function<cplx(cplx)>& integrand, double decay_rate, double b,
                        double r, const ContourSpec& spec) {
    check_spec(spec);
    if (!(r > 0.0)) throw std::invalid_argument("keyhole_quadrature: r must be positive");
    if (b > 0.0 && !(r < b / 10.0))
        throw std::invalid_argument("keyhole_quadrature: need r < b/10 for b > 0");
    if (!(decay_rate > 0.0))
        throw std::invalid_argument("keyhole_quadrature: decay rate must be positive");

    const double rel = spec.panel_target_error;

    // Circle |z + b| = r, counterclockwise from -pi to pi.
    auto circ = [&](double theta) {
        const cplx z = -b + std::polar(r, theta);
        const cplx dz = cplx(0.0, 1.0) * std::polar(r, theta);
        return integrand(z) * dz;
    };
    auto circle = quad::adaptive_gk(circ, -kPi, kPi, rel, 1e-16, 40);

    // Rays along the cut; s is the distance from -b, s >= r.  Chunked until
    // the e^{-decay_rate s} envelope kills the contribution.
    auto ray_pair = [&](double s) {
        const cplx below = integrand(cplx(-b - s, -0.0));
        const cplx above = integrand(cplx(-b - s, +0.0));
        // lower lip traversed toward the circle (dz = +ds toward -b), upper
        // lip traversed outward (dz = -ds): net (below - above) * (+ds)
        return below - above;
    };
    cplx rays(0.0);
    double err = circle.err;
    double s0 = r;
    const double chunk = std::max(2.0, 10.0 / decay_rate);
    double peak = 0.0;
    for (int c = 0; c < 200; ++c) {
        auto part = quad::adaptive_gk(ray_pair, s0, s0 + chunk, rel, 1e-16, 40);
        rays += part.value;
        err += part.err;
        peak = std::max(peak, std::abs(rays));
        s0 += chunk;
        if (std::abs(part.value) < 1e-17 * std::max(peak, std::abs(circle.value)) &&
            std::exp(-decay_rate * (s0 - r)) < 1e-18)
            break;
    }
    const cplx total = circle.value + rays;
    const double scale = std::abs(circle.value) + peak + std::abs(total);
    if (spec.throw_on_failure && err > std::max(1e4 * rel * scale, 1e-12))
        throw numeric_failure("keyhole_quadrature: error target not met", err);
    return total;
}

// --- vertical line -------------------------------------------------------------

LineIntegralResult line_integral_multi(const std::function<cplx(cplx)>& weight_log,
                                       const std::function<void(cplx, cplx*)>& factors,
                                       std::size_t m, double gamma, double decay_rate,
                                       const ContourSpec& spec) {
    check_spec(spec);
    std::vector<cplx> fbuf(m);
    auto eval = [&](cplx z, cplx* out) {
        const cplx w = std::exp(weight_log(z));
        factors(z, fbuf.data());
        for (std::size_t i = 0; i < m; ++i) out[i] = w * fbuf[i];
    };

    std::vector<quad::PathSegment> path;
    path.push_back({cplx(gamma, 0.0), cplx(0.0, 1.0), spec.truncation_height});
    // 135-degree tail: Re z decreases, so e^{decay_rate * Re(z - gamma)}
    // provides exponential decay even when the line integrand only decays
    // algebraically (small N).
    const cplx tail_dir = std::polar(1.0, 3.0 * kPi / 4.0);
    const double tail_len = std::min(46.0 / (decay_rate * (-tail_dir.real())) + 4.0, 1e6);
    path.push_back({cplx(gamma, spec.truncation_height), tail_dir, tail_len});

    auto res = quad::integrate_path_vector(eval, m, path, spec.panel_target_error, 42,
                                           static_cast<std::size_t>(spec.max_panels));
    LineIntegralResult out;
    out.upper = std::move(res.values);
    out.err = std::move(res.err);
    out.evals = res.evals;
    out.converged = res.converged;
    out.full.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.full[i] = cplx(0.0, 2.0 * out.upper[i].imag());
    if (spec.throw_on_failure && !out.converged)
        throw numeric_failure("line_integral_multi: panel budget exhausted before tolerance");
    return out;
}

cplx vertical_line_integral(const std::function<cplx(cplx)>& weight_log,
                            const std::function<cplx(cplx)>& factor, const SaddleFrame& fr,
                            const ContourSpec& spec, double* err_out) {
    auto factors = [&factor](cplx z, cplx* out) { out[0] = factor(z); };
    auto res = line_integral_multi(weight_log, factors, 1, fr.gamma,
                                   0.5 * fr.n * fr.beta, spec);
    if (err_out) *err_out = res.err[0];
    return res.full[0];
}

}  // namespace ssklab::saddle
