#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ssklab/ensembles.hpp"
#include "ssklab/saddle.hpp"

namespace ssklab::overlap {

using ensembles::SpectrumSample;
using saddle::ContourSpec;

enum class Method { CONTOUR_EXACT, EXPANSION, MONTE_CARLO, BLDW_HEURISTIC };

const char* method_name(Method m);

// Overlap moments under the Gibbs measure, tagged by how they were computed.
// err is the method's primary error estimate (quadrature error, predicted
// expansion scale, or the Monte Carlo standard error of m2).
struct OverlapMoments {
    double m2 = 0.0;                 // <R12^2>
    std::optional<double> m4;        // <R12^4>
    std::optional<double> central4;  // <(R12^2 - q^2)^2>
    std::optional<double> abs1;      // <|R12|>
    Method method = Method::CONTOUR_EXACT;
    double err = 0.0;
    // Monte Carlo per-moment standard errors.
    std::optional<double> se_m2, se_m4, se_abs1;
    double beta = 0.0;
    int n = 0;
    uint64_t seed = 0;
};

// The expansion terms, reported separately:
//   m2 = q^2 + term_linear + term_mprime + term_square
struct ExpansionReport {
    double q2 = 0.0;
    double term_linear = 0.0;   // 2 (beta-1)/beta^2 (m~+1)
    double term_mprime = 0.0;   // -m~'/(N beta^2)
    double term_square = 0.0;   // (m~+1)^2 / beta^2
    double predicted_error_scale = 0.0;  // N^{3 delta + 10 eps1 - 1}
};

// q = (beta-1)/beta (positive sign convention).
inline double overlap_q(double beta) { return (beta - 1.0) / beta; }

// <R12^2> from the finite-N double-contour representation.  The double
// integral separates, so the numerator is sum_i I_i^2 with
// I_i = int e^{N(G-G(gamma))/2} / (beta N (z - lambda_i)) dz and the
// denominator is (int e^{N(G-G(gamma))/2} dz)^2: N+1 shared-node quadratures.
OverlapMoments overlap_m2_contour(const SpectrumSample& s, double beta,
                                  const ContourSpec& spec = {});

// <R12^4> (and m2, central4) from the fourth-moment representation.  Cross
// terms K_ij are recovered from the I_i by partial fractions; near-degenerate
// pairs |lambda_i - lambda_j| < 1e-10 fall back to the derivative form J_i.
OverlapMoments overlap_m4_contour(const SpectrumSample& s, double beta,
                                  const ContourSpec& spec = {});

// The expansion arithmetic on given edge statistics: m_tilde and
// m_tilde_prime are the sums at lambda_1 (not at gamma).
std::pair<OverlapMoments, ExpansionReport> expansion_from_stats(double beta, int n,
                                                                double m_tilde,
                                                                double m_tilde_prime,
                                                                double delta = 0.1,
                                                                double eps1 = 0.05);

// Low-temperature expansion evaluated on one realization.  Requires the
// spectrum to pass event F(delta, eps1) unless force is set (then err = inf).
std::pair<OverlapMoments, ExpansionReport> overlap_expansion(const SpectrumSample& s, double beta,
                                                             double delta = 0.1,
                                                             double eps1 = 0.05,
                                                             bool force = false);

// Brute-force Gibbs oracle: rejection-samples unit vectors against the
// diagonalized Gibbs density (acceptance exp((beta n/2) sum (l_i - l_1) x_i^2))
// and averages overlap powers over independent accepted pairs.
// n_samples counts overlap pairs.
OverlapMoments gibbs_mc_oracle(const SpectrumSample& s, double beta, int n_samples,
                               uint64_t seed);

// Samples of the heuristic surrogate for R12^2 - q^2:
//   (2(beta-1)/beta^2) ((1/N) sum_{j>=2} n_j^2/(lambda_j - lambda_1) + 1),
// n_j iid standard normal.  Averaging over n_j reproduces term_linear.
std::vector<double> bldw_heuristic(const SpectrumSample& s, double beta, int n_samples,
                                   uint64_t seed);

}  // namespace ssklab::overlap
