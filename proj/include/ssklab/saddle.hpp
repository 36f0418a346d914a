#pragma once

#include <functional>
#include <vector>

#include "ssklab/common.hpp"
#include "ssklab/ensembles.hpp"
#include "ssklab/quadrature.hpp"

namespace ssklab::saddle {

using ensembles::SpectrumSample;

// Quadrature control for contour integrals.
struct ContourSpec {
    double truncation_height = 10.0;  // vertical extent before the tail closure
    double panel_target_error = 1e-10;
    int max_panels = 20000;
    bool throw_on_failure = true;
    double gamma_factor = 1.0;  // contour abscissa: gamma = l1 + factor * c_beta/N
};

// All saddle-point quantities derived from a spectrum and beta > 1:
//   c_beta = 1/(beta-1),  gamma = lambda_1 + c_beta/N,
//   a = (beta + m~_N(gamma))/2,  b = c_beta.
// Keeps its own copy of the eigenvalues.
struct SaddleFrame {
    double beta = 0.0;
    double c_beta = 0.0;
    double gamma = 0.0;
    double m_tilde_gamma = 0.0;        // m~_N(gamma)
    double m_tilde_prime_gamma = 0.0;  // m~'_N(gamma)
    double a = 0.0;
    double b = 0.0;
    int n = 0;
    std::vector<double> eigenvalues;
};

// gamma_factor scales the saddle offset: gamma = lambda_1 + gamma_factor *
// c_beta/N.  Any value > 0 is a legal contour abscissa (the representation
// holds for every gamma > lambda_1); 1 is the saddle itself.
SaddleFrame make_saddle_frame(const SpectrumSample& s, double beta, double gamma_factor = 1.0);

// Unique eta >= 0 solving eta (beta-1) = (1/N) arg(E + i eta + c_beta/N)
// for E <= 0; the steepest-descent contour height of the one-eigenvalue
// phase.  eta(0) = 0.
double eta_of_E(double e, double beta, int n);

// G(z) = beta z - (1/N) sum_i log(z - lambda_i), principal branch.
// Throws branch_cut_error on the cut (z real, z <= lambda_1).
cplx phase_G(cplx z, const SpectrumSample& s, double beta);

// G(z) - G(gamma) summed as log(1 + (z-gamma)/(gamma-lambda_i)) so nothing
// cancels when z is within O(1/N) of the saddle.
cplx phase_G_rel(cplx z, const SaddleFrame& fr);

// G'(z) = beta + (1/N) sum_i 1/(lambda_i - z).
cplx phase_G_prime(cplx z, const SpectrumSample& s, double beta);

// g(z) = (beta + m~_N(gamma)) z - (1/N) log(1 + N z / c_beta).
cplx phase_g(cplx z, const SaddleFrame& fr);

// Sample points of the deformed contour Gamma^ = Gamma_1 u Gamma_3 (upper
// half, as offsets from gamma): the eta(E) arc for -N^{-1+kappa} <= E <= 0
// plus the short vertical connector down to the real axis.
std::vector<cplx> gamma_hat_points(const SaddleFrame& fr, double kappa, int count);

// --- keyhole integrals ------------------------------------------------------

// The eight closed-form keyhole integrands over Gamma_{r,b} (two rays along
// (-inf,-b] plus a counterclockwise circle of radius r around -b):
//   INV_SQRT        e^{az} (z+b)^{-1/2}
//   SQRT            e^{az} (z+b)^{+1/2}
//   POW_3_2         e^{az} (z+b)^{+3/2}
//   INV_SQRT_Z2     e^{az} (z+b)^{-1/2} z^2
//   INV_POW_3_2     e^{az} (z+b)^{-3/2}
//   INV_POW_3_2_Z2  e^{az} (z+b)^{-3/2} z^2
//   INV_POW_5_2     e^{az} (z+b)^{-5/2}
//   INV_POW_5_2_Z2  e^{az} (z+b)^{-5/2} z^2
enum class KeyholeKind {
    INV_SQRT,
    SQRT,
    POW_3_2,
    INV_SQRT_Z2,
    INV_POW_3_2,
    INV_POW_3_2_Z2,
    INV_POW_5_2,
    INV_POW_5_2_Z2
};

// Tabulated value of the keyhole integral; a > 0, b >= 0.
cplx keyhole_closed_form(KeyholeKind kind, double a, double b);

// The integrand e^{az} (z+b)^{power} z^{zpow} with principal branches,
// matching keyhole_closed_form(kind, a, b).
std::function<cplx(cplx)> keyhole_integrand(KeyholeKind kind, double a, double b);

// Numerical keyhole integral of an arbitrary integrand analytic off
// (-inf, -b].  The rays are evaluated on the cut itself via signed-zero
// imaginary parts (z = x + i*(+0.0) above, x + i*(-0.0) below); decay_rate
// is the exponential decay e^{-decay_rate * |z|} used to place the
// truncation point.  Traversal: in along the lower lip from -infinity,
// counterclockwise around -b, out along the upper lip.
cplx keyhole_quadrature(const std::function<cplx(cplx)>& integrand, double decay_rate, double b,
                        double r, const ContourSpec& spec = {});

// --- vertical-line integrals ---------------------------------------------------

struct LineIntegralResult {
    std::vector<cplx> upper;     // integrals over the upper half-path from gamma
    std::vector<cplx> full;      // full-line values, 2i Im(upper) by conjugate symmetry
    std::vector<double> err;
    std::size_t evals = 0;
    bool converged = true;
};

// Integrates e^{weight_log(z)} * factor_k(z) for k = 0..m-1 along
// Re z = gamma, sharing every weight evaluation across the factors.
// weight_log is N (G(z) - G(gamma)) / 2 (or any conjugate-symmetric phase);
// the path runs up the vertical line to truncation_height and then closes
// along a 135-degree ray where e^{N beta z / 2} decays exponentially, so
// small-N integrands (slowly decaying on the line itself) stay convergent.
// decay_rate should be N*beta/2.
LineIntegralResult line_integral_multi(const std::function<cplx(cplx)>& weight_log,
                                       const std::function<void(cplx, cplx*)>& factors,
                                       std::size_t m, double gamma, double decay_rate,
                                       const ContourSpec& spec);

// Single-factor convenience wrapper; returns the full-line value.
cplx vertical_line_integral(const std::function<cplx(cplx)>& weight_log,
                            const std::function<cplx(cplx)>& factor, const SaddleFrame& fr,
                            const ContourSpec& spec, double* err_out = nullptr);

}  // namespace ssklab::saddle
