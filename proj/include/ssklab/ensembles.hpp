#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssklab/linalg.hpp"

namespace ssklab::ensembles {

enum class EnsembleKind {
    GOE_DENSE,      // real symmetric, diag var 2/n, off-diag var 1/n
    GOE_ZERO_DIAG,  // same with the diagonal set to zero (the SSK coupling matrix)
    GUE_DENSE,      // complex Hermitian, |H_ij|^2 = 1/n, edge at +-2
    GOE_TRIDIAG     // tridiagonal model, eigenvalue law identical to GOE_DENSE
};

const char* kind_name(EnsembleKind k);
EnsembleKind kind_from_name(const std::string& name);

// One sorted eigenvalue realization.  (kind, n, seed) determines the
// eigenvalues bit-exactly.
struct SpectrumSample {
    EnsembleKind kind = EnsembleKind::GOE_DENSE;
    int n = 0;
    uint64_t seed = 0;
    std::vector<double> eigenvalues;  // sorted non-increasing, length n
};

// Coupled draw H = M + V: spectrum_h from the full GOE matrix, spectrum_m
// from the same matrix with its diagonal V removed.
struct CoupledPair {
    SpectrumSample spectrum_h;
    SpectrumSample spectrum_m;
    uint64_t seed = 0;
    double max_abs_diag = 0.0;  // max_i |V_ii|, for Weyl-bound sanity checks
};

SpectrumSample sample_spectrum(EnsembleKind kind, int n, uint64_t seed);
CoupledPair sample_coupled_pair(int n, uint64_t seed);

// Coupled pair keeping only the top k eigenvalues of each matrix
// (Lanczos path; much faster than the full eigensolve at large n).
CoupledPair sample_coupled_pair_topk(int n, uint64_t seed, int k);

// Tridiagonal matrices whose eigenvalue laws match the dense ensembles
// (chi-distributed off-diagonals, Gaussian diagonal).  `normalized` divides
// by sqrt(n) so the spectrum edge sits at +-2; the raw matrices are what the
// Forrester-Rains coupling consumes.
linalg::Tridiag tridiag_goe(int n, uint64_t seed, bool normalized = true);
linalg::Tridiag tridiag_gue(int n, uint64_t seed, bool normalized = true);

// Dense GOE draw (or zero-diagonal variant); exposed for resolvent tests.
linalg::DenseSym dense_goe(int n, uint64_t seed, bool zero_diag);

}  // namespace ssklab::ensembles
