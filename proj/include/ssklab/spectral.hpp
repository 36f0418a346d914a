#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ssklab/common.hpp"
#include "ssklab/ensembles.hpp"

namespace ssklab::spectral {

using ensembles::SpectrumSample;

// --- semicircle law -------------------------------------------------------

// rho_sc(E) = (1/2pi) sqrt((4-E^2)_+)
double semicircle_density(double e);

// CDF of the semicircle law, int_{-2}^{E} rho_sc; clamps outside [-2,2].
double semicircle_cdf(double e);

// Stieltjes transform m_sc(z) = int rho_sc(x)/(x-z) dx  (Im z != 0).
cplx m_sc(cplx z);

// --- classical locations ---------------------------------------------------

// Edge-oriented semicircle quantiles: gamma_i solves
//   int_{gamma_i}^{2} rho_sc = i/n,  i = 1..n,
// so gamma_1 pairs with the top eigenvalue.  Sorted non-increasing.
struct ClassicalLocations {
    int n = 0;
    std::vector<double> gamma;
};

ClassicalLocations classical_locations(int n);

// --- edge statistics and the expansion event --------------------------------

// Edge-excluded Stieltjes sums at lambda_1 and at gamma = lambda_1 + c_beta/N:
//   m_tilde       = (1/N) sum_{j>=2} 1/(lambda_j - lambda_1)
//   m_tilde_prime = (1/N) sum_{j>=2} 1/(lambda_j - lambda_1)^2
struct EdgeStatistics {
    double m_tilde = 0.0;
    double m_tilde_prime = 0.0;
    double m_tilde_at_gamma = 0.0;
    double m_tilde_prime_at_gamma = 0.0;
};

EdgeStatistics edge_statistics(const SpectrumSample& s, double beta);

struct EventFlags {
    double delta = 0.0;
    double eps1 = 0.0;
    bool gap_ok = false;       // N^{2/3}(l1 - l2) > N^{-delta}
    bool rigidity_ok = false;  // |l_i - gamma_i| within the rigidity envelope for all i
    bool event_f = false;      // gap_ok && rigidity_ok
};

EventFlags event_flags(const SpectrumSample& s, double delta, double eps1);
EventFlags event_flags(const SpectrumSample& s, const ClassicalLocations& gamma, double delta,
                       double eps1);

// --- top-gap tail ------------------------------------------------------------

struct GapTail {
    std::vector<double> s_grid;
    std::vector<double> cdf;        // empirical P(N^{2/3}(l1-l2) < s)
    std::vector<double> std_error;  // binomial SE per grid point
    int trials = 0;
};

GapTail gap_tail(const std::vector<SpectrumSample>& samples, const std::vector<double>& s_grid);

// --- Stieltjes transform of a realization ------------------------------------

// (1/N) sum_j 1/(lambda_j - z); requires Im z > 0.
cplx stieltjes(const SpectrumSample& s, cplx z);

namespace detail {
// Unrestricted evaluation (test hook for conjugate-symmetry checks).
cplx stieltjes_any(const std::vector<double>& eigenvalues, cplx z);
}  // namespace detail

// --- Helffer-Sjostrand trace --------------------------------------------------

// Compactly supported C^2 test function with derivative data.  If fpp is not
// supplied it is approximated by a central difference of fp.
struct TestFunction {
    std::function<double(double)> f;
    std::function<double(double)> fp;
    std::optional<std::function<double(double)>> fpp;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

// Smooth bump amp * exp(1 - 1/(1-t^2)), t = (x-center)/width, with analytic
// derivatives; the standard test input for hs_trace.
TestFunction bump_function(double center, double width, double amp = 1.0);

// Evaluates tr f(M) through the almost-analytic extension
//   f~(x+iy) = (f(x) + iy f'(x)) chi(y)
// as (1/pi) int dbar f~(z) sum_i (lambda_i - z)^{-1} dA(z); must agree with
// the direct sum over eigenvalues.  chi is a fixed quintic plateau, =1 for
// |y|<=1 and 0 for |y|>=2.
double hs_trace(const SpectrumSample& s, const TestFunction& tf, double tol = 1e-8);

}  // namespace ssklab::spectral
