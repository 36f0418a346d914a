#pragma once

#include <cstdint>
#include <vector>

#include "ssklab/common.hpp"
#include "ssklab/ensembles.hpp"

namespace ssklab::zerodiag {

using ensembles::CoupledPair;

// Per-index distances between the top eigenvalues of the coupled pair
// H = M + V (GOE) and M (zero-diagonal GOE).
struct DiffReport {
    int n = 0;
    int k_max = 0;
    std::vector<double> per_index_diffs;  // |lambda_i(H) - lambda_i(M)|, i = 1..k_max
    uint64_t seed = 0;
    double max_abs_diag = 0.0;
};

// k_max is capped at floor(n^{1/20}) + 4 (the window where the coupling
// estimate applies).
DiffReport ev_diff_report(const CoupledPair& pair, int k_max);

// m_M(z) - m_H(z) over a grid confined to the window
// N^{delta}/N <= Im z <= N^{-delta}.
std::vector<cplx> stieltjes_diff(const CoupledPair& pair, const std::vector<cplx>& z_grid,
                                 double delta = 0.1);

}  // namespace ssklab::zerodiag
