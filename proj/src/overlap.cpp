#include "ssklab/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssklab/rng.hpp"
#include "ssklab/spectral.hpp"

namespace ssklab::overlap {

const char* method_name(Method m) {
    switch (m) {
        case Method::CONTOUR_EXACT: return "contour";
        case Method::EXPANSION: return "expansion";
        case Method::MONTE_CARLO: return "mc";
        case Method::BLDW_HEURISTIC: return "bldw";
    }
    return "?";
}

namespace {

struct LineData {
    double im_d = 0.0;                // Im of the denominator upper-path integral
    double err_d = 0.0;
    std::vector<double> im_i, err_i;  // Im and error of each I_i
    std::vector<double> im_j, err_j;  // Im and error of each J_i (m4 only)
};

// Shared-node quadrature of the denominator and the per-eigenvalue factors.
LineData contour_integrals(const saddle::SaddleFrame& fr, const ContourSpec& spec,
                           bool with_squares) {
    const int n = fr.n;
    const double bn = fr.beta * n;
    const std::size_t m = with_squares ? 2 * n + 1 : n + 1;
    auto weight_log = [&fr](cplx z) {
        return 0.5 * static_cast<double>(fr.n) * saddle::phase_G_rel(z, fr);
    };
    auto factors = [&](cplx z, cplx* out) {
        out[0] = 1.0;
        for (int i = 0; i < n; ++i) {
            const cplx f = 1.0 / (bn * (z - fr.eigenvalues[i]));
            out[1 + i] = f;
            if (with_squares) out[1 + n + i] = f * f;
        }
    };
    auto res = saddle::line_integral_multi(weight_log, factors, m, fr.gamma, 0.5 * bn, spec);
    LineData ld;
    ld.im_d = res.upper[0].imag();
    ld.err_d = res.err[0];
    ld.im_i.resize(n);
    ld.err_i.resize(n);
    for (int i = 0; i < n; ++i) {
        ld.im_i[i] = res.upper[1 + i].imag();
        ld.err_i[i] = res.err[1 + i];
    }
    if (with_squares) {
        ld.im_j.resize(n);
        ld.err_j.resize(n);
        for (int i = 0; i < n; ++i) {
            ld.im_j[i] = res.upper[1 + n + i].imag();
            ld.err_j[i] = res.err[1 + n + i];
        }
    }
    return ld;
}

double m2_from(const LineData& ld, double* err_out) {
    double num = 0.0, num_err = 0.0;
    for (std::size_t i = 0; i < ld.im_i.size(); ++i) {
        num += ld.im_i[i] * ld.im_i[i];
        num_err += 2.0 * std::fabs(ld.im_i[i]) * ld.err_i[i];
    }
    const double d2 = ld.im_d * ld.im_d;
    const double m2 = num / d2;
    if (err_out) *err_out = num_err / d2 + 2.0 * m2 * ld.err_d / std::fabs(ld.im_d);
    return m2;
}

void check_contour_pre(const SpectrumSample& s, double beta) {
    if (beta <= 1.0)
        throw std::invalid_argument(
            "overlap contour: beta must exceed 1 (low-temperature regime)");
    if (s.n < 1) throw std::invalid_argument("overlap contour: empty spectrum");
}

}  // namespace

OverlapMoments overlap_m2_contour(const SpectrumSample& s, double beta, const ContourSpec& spec) {
    check_contour_pre(s, beta);
    const auto fr = saddle::make_saddle_frame(s, beta, spec.gamma_factor);
    const LineData ld = contour_integrals(fr, spec, false);
    OverlapMoments mom;
    mom.method = Method::CONTOUR_EXACT;
    mom.beta = beta;
    mom.n = s.n;
    mom.seed = s.seed;
    mom.m2 = m2_from(ld, &mom.err);
    return mom;
}

OverlapMoments overlap_m4_contour(const SpectrumSample& s, double beta, const ContourSpec& spec) {
    check_contour_pre(s, beta);
    const auto fr = saddle::make_saddle_frame(s, beta, spec.gamma_factor);
    const LineData ld = contour_integrals(fr, spec, true);
    const int n = s.n;
    const double bn = beta * n;

    OverlapMoments mom;
    mom.method = Method::CONTOUR_EXACT;
    mom.beta = beta;
    mom.n = n;
    mom.seed = s.seed;
    mom.m2 = m2_from(ld, nullptr);

    // 6 sum_i J_i^2 + 3 sum_{i,j} K_ij^2 with K_ii = J_i and, for i != j,
    // K_ij = (I_i - I_j)/(beta N (lambda_i - lambda_j)) by partial fractions.
    double num = 0.0;
    for (int i = 0; i < n; ++i) num += 9.0 * ld.im_j[i] * ld.im_j[i];
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dl = fr.eigenvalues[i] - fr.eigenvalues[j];
            double k;
            if (std::fabs(dl) < 1e-10)
                k = ld.im_j[i];
            else
                k = (ld.im_i[i] - ld.im_i[j]) / (bn * dl);
            num += 6.0 * k * k;
        }
    }
    const double d2 = ld.im_d * ld.im_d;
    mom.m4 = num / d2;
    const double q = overlap_q(beta);
    mom.central4 = *mom.m4 - 2.0 * q * q * mom.m2 + q * q * q * q;
    double err_acc = 2.0 * (*mom.m4) * ld.err_d / std::fabs(ld.im_d);
    for (int i = 0; i < n; ++i) err_acc += 18.0 * std::fabs(ld.im_j[i]) * ld.err_j[i] / d2;
    mom.err = err_acc;
    return mom;
}

std::pair<OverlapMoments, ExpansionReport> expansion_from_stats(double beta, int n,
                                                                double m_tilde,
                                                                double m_tilde_prime,
                                                                double delta, double eps1) {
    if (beta <= 1.0) throw std::invalid_argument("expansion_from_stats: beta must be > 1");
    const double q = overlap_q(beta);
    const double mt1 = m_tilde + 1.0;

    ExpansionReport rep;
    rep.q2 = q * q;
    rep.term_linear = 2.0 * (beta - 1.0) / (beta * beta) * mt1;
    rep.term_mprime = -m_tilde_prime / (n * beta * beta);
    rep.term_square = mt1 * mt1 / (beta * beta);
    rep.predicted_error_scale = std::pow(n, 3.0 * delta + 10.0 * eps1 - 1.0);

    OverlapMoments mom;
    mom.method = Method::EXPANSION;
    mom.beta = beta;
    mom.n = n;
    mom.m2 = rep.q2 + rep.term_linear + rep.term_mprime + rep.term_square;
    const double b2 = beta * beta;
    mom.central4 = 8.0 * (beta - 1.0) * (beta - 1.0) / b2 * (m_tilde_prime / n) +
                   4.0 * (beta - 1.0) * (beta - 1.0) / (b2 * b2) * mt1 * mt1;
    mom.abs1 = q + mt1 / beta;
    mom.m4 = *mom.central4 + 2.0 * rep.q2 * mom.m2 - rep.q2 * rep.q2;
    mom.err = rep.predicted_error_scale;
    return {mom, rep};
}

std::pair<OverlapMoments, ExpansionReport> overlap_expansion(const SpectrumSample& s, double beta,
                                                             double delta, double eps1,
                                                             bool force) {
    if (beta <= 1.0) throw std::invalid_argument("overlap_expansion: beta must be > 1");
    const auto flags = spectral::event_flags(s, delta, eps1);
    if (!flags.event_f && !force)
        throw std::invalid_argument(
            "overlap_expansion: spectrum fails event F(delta, eps1); pass force to override");
    const auto st = spectral::edge_statistics(s, beta);
    auto [mom, rep] = expansion_from_stats(beta, s.n, st.m_tilde, st.m_tilde_prime, delta, eps1);
    mom.seed = s.seed;
    if (force && !flags.event_f) mom.err = std::numeric_limits<double>::infinity();
    return {mom, rep};
}

OverlapMoments gibbs_mc_oracle(const SpectrumSample& s, double beta, int n_samples,
                               uint64_t seed) {
    const int n = s.n;
    if (n > 24)
        throw std::invalid_argument("gibbs_mc_oracle: n > 24 (acceptance-rate guard)");
    if (n_samples < 1000) throw std::invalid_argument("gibbs_mc_oracle: need >= 1000 samples");
    if (!(beta > 0.0)) throw std::invalid_argument("gibbs_mc_oracle: beta must be positive");

    // exp((beta n / 2) sum_i (lambda_i - lambda_1) x_i^2) acceptance weights
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.5 * beta * n * (s.eigenvalues[i] - s.eigenvalues[0]);

    rng::SplitMix64 gen(seed);
    std::vector<double> g(n), x(n);
    uint64_t attempts = 0, accepted = 0;

    auto draw_accepted = [&](std::vector<double>& out) {
        for (;;) {
            ++attempts;
            double s2 = 0.0, e = 0.0;
            for (int i = 0; i < n; ++i) {
                const double gi = gen.normal();
                g[i] = gi;
                s2 += gi * gi;
                e += w[i] * gi * gi;
            }
            // accept with probability exp(e / s2), always in (0, 1]
            if (std::log(gen.uniform01()) < e / s2) {
                const double inv = 1.0 / std::sqrt(s2);
                for (int i = 0; i < n; ++i) out[i] = g[i] * inv;
                ++accepted;
                return;
            }
            if (attempts > 5000000ull &&
                static_cast<double>(accepted) / static_cast<double>(attempts) < 1e-6)
                throw infeasible_regime(
                    "gibbs_mc_oracle: acceptance rate below 1e-6; reduce n or beta");
        }
    };

    double sum2 = 0.0, sum4 = 0.0, sum8 = 0.0, suma = 0.0, sum2sq = 0.0, sumasq = 0.0;
    std::vector<double> y(n);
    for (int k = 0; k < n_samples; ++k) {
        draw_accepted(x);
        draw_accepted(y);
        double r = 0.0;
        for (int i = 0; i < n; ++i) r += x[i] * y[i];
        const double r2 = r * r, r4 = r2 * r2, ra = std::fabs(r);
        sum2 += r2;
        sum4 += r4;
        sum8 += r4 * r4;
        suma += ra;
        sum2sq += r2 * r2;
        sumasq += ra * ra;
    }
    const double kk = n_samples;
    OverlapMoments mom;
    mom.method = Method::MONTE_CARLO;
    mom.beta = beta;
    mom.n = n;
    mom.seed = seed;
    mom.m2 = sum2 / kk;
    mom.m4 = sum4 / kk;
    mom.abs1 = suma / kk;
    const double q = beta > 1.0 ? overlap_q(beta) : 0.0;
    mom.central4 = *mom.m4 - 2.0 * q * q * mom.m2 + q * q * q * q;
    auto se = [&](double sum_sq, double mean) {
        const double var = std::max(sum_sq / kk - mean * mean, 0.0);
        return std::sqrt(var / kk);
    };
    mom.se_m2 = se(sum2sq, mom.m2);
    mom.se_m4 = se(sum8, *mom.m4);
    mom.se_abs1 = se(sumasq, *mom.abs1);
    mom.err = *mom.se_m2;
    return mom;
}

std::vector<double> bldw_heuristic(const SpectrumSample& s, double beta, int n_samples,
                                   uint64_t seed) {
    const int n = s.n;
    if (n < 2) throw std::invalid_argument("bldw_heuristic: need n >= 2");
    if (s.eigenvalues[1] >= s.eigenvalues[0])
        throw degenerate_spectrum("bldw_heuristic: lambda_1 must exceed lambda_2");
    const double c = 2.0 * (beta - 1.0) / (beta * beta);
    std::vector<double> inv_gap(n - 1);
    for (int j = 1; j < n; ++j) inv_gap[j - 1] = 1.0 / (s.eigenvalues[j] - s.eigenvalues[0]);
    rng::SplitMix64 gen(seed);
    std::vector<double> out(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n - 1; ++j) {
            const double nj = gen.normal();
            acc += nj * nj * inv_gap[j];
        }
        out[k] = c * (acc / n + 1.0);
    }
    return out;
}

}  // namespace ssklab::overlap
