#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ssklab/ensembles.hpp"

namespace ssklab::edgelimit {

using ensembles::EnsembleKind;
using ensembles::SpectrumSample;

// --- Xi estimators ------------------------------------------------------------

enum class XiEstimator { FULL_SPECTRUM, CUTOFF };

// One realization of the Xi estimator.
//   FULL_SPECTRUM: N^{1/3} ((1/N) sum_{j>=2} 1/(l1 - lj) - 1)
//   CUTOFF:        sum_{j=2}^{c} 1/(chi_j - chi_1) - (2/pi)(3 pi c / 2)^{1/3},
//                  chi_j = N^{2/3}(2 - lambda_j)
struct XiEstimate {
    double value = 0.0;
    XiEstimator estimator = XiEstimator::FULL_SPECTRUM;
    int n_matrix = 0;
    std::optional<int> cutoff;
    uint64_t seed = 0;
};

XiEstimate xi_estimate(const SpectrumSample& s, XiEstimator estimator,
                       std::optional<int> cutoff = {});

// Low-level form taking the leading eigenvalues directly (the list may be a
// top-k truncation when only the CUTOFF estimator is wanted).
XiEstimate xi_estimate_from(const std::vector<double>& eigenvalues_desc, int n_matrix,
                            uint64_t seed, XiEstimator estimator, std::optional<int> cutoff);

// One tridiagonal-GOE trial of the estimator.  FULL_SPECTRUM solves the whole
// tridiagonal; CUTOFF extracts only the top max(cutoffs) eigenvalues by Sturm
// bisection and evaluates every requested cutoff on the same draw.
std::vector<XiEstimate> xi_trial(int n_matrix, XiEstimator estimator,
                                 const std::vector<int>& cutoffs, uint64_t seed);

// Closed form of the density-of-states correction, (1/pi) int_0^T dx/sqrt(x).
inline double xi_correction_integral(double t_upper) {
    return 2.0 * std::sqrt(t_upper) / 3.14159265358979323846;
}

// --- edge counting statistics ----------------------------------------------------

// Mean and variance of #{i : lambda_i >= 2 - T n^{-2/3}} across trials, with
// the (2/3pi) T^{3/2} density-of-states reference attached.
struct CountingStats {
    std::vector<double> t_grid;
    std::vector<double> empirical_mean;
    std::vector<double> empirical_var;
    std::vector<double> reference_mean;
    int trials = 0;
    int n = 0;
    EnsembleKind ensemble = EnsembleKind::GOE_TRIDIAG;
};

// GOE kinds and GUE use the tridiagonal samplers (counting needs only a Sturm
// sign count per grid point); GOE_ZERO_DIAG falls back to the dense solver.
CountingStats counting_stats(EnsembleKind kind, int n, const std::vector<double>& t_grid,
                             int trials, uint64_t seed, int workers = 1);

// Counts #{lambda_i >= 2 - T n^{-2/3}} for one realization at every T.
std::vector<int> edge_counts(EnsembleKind kind, int n, const std::vector<double>& t_grid,
                             uint64_t seed);

// --- Forrester-Rains superposition-decimation ---------------------------------------

// Per-index KS distances between the even decimation of GOE_n u GOE_{n+1}
// and GUE_n (k = 1..min(5,n)), plus the counting-law match: the distribution
// of floor(#{union <= T}/2) against #{GUE <= T} in edge coordinates.
// All three spectra share the sqrt(n) scale of the GOE_n matrix, the matched
// convention under which the coupling is exact in law.
struct FrCheckResult {
    int n = 0;
    int trials = 0;
    std::vector<double> per_index_ks;
    std::vector<double> counting_t;
    std::vector<double> counting_ks;
};

FrCheckResult fr_decimation_check(int n, int trials, uint64_t seed, int workers = 1);

// One trial of the coupling check: the top even-decimated points, the top
// GUE points, and the counting pair (floor(#union/2), #GUE) per grid T.
struct FrTrial {
    std::vector<double> decimated;
    std::vector<double> gue;
    std::vector<int> cnt_union_half;
    std::vector<int> cnt_gue;
};

FrTrial fr_trial(int n, int k, const std::vector<double>& t_grid, uint64_t seed_goe_n,
                 uint64_t seed_goe_n1, uint64_t seed_gue);

// --- distributional test of the main convergence -------------------------------------

// Compares A = N^{1/3}(<R12^2> - q^2) (contour method, zero-diagonal GOE at
// n_overlap) against B = 2 (beta-1)/beta^2 * Xi^ (FULL_SPECTRUM at n_airy)
// under both signs; reports which sign wins.
struct MainconvResult {
    double ks_same_sign = 0.0;   // KS(A, +B)
    double ks_flip_sign = 0.0;   // KS(A, -B)
    int winner_sign = 0;         // +1 or -1
    double beta = 0.0;
    int n_overlap = 0;
    int n_airy = 0;
    int trials = 0;
    int failed_trials = 0;
    std::vector<double> a_samples;
    std::vector<double> b_samples;
};

MainconvResult mainconv_test(double beta, int n_overlap, int n_airy, int trials, uint64_t seed,
                             int workers = 1);

// Per-trial building blocks of the A and B samples above.
double mainconv_a_value(double beta, int n_overlap, uint64_t seed);
double mainconv_b_value(double beta, int n_airy, uint64_t seed);

}  // namespace ssklab::edgelimit
