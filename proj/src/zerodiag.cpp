#include "ssklab/zerodiag.hpp"

#include <cmath>
#include <stdexcept>

#include "ssklab/spectral.hpp"

namespace ssklab::zerodiag {

DiffReport ev_diff_report(const CoupledPair& pair, int k_max) {
    const int n = pair.spectrum_h.n;
    const int cap = std::max(1, static_cast<int>(std::floor(std::pow(n, 0.05)))) + 4;
    if (k_max < 1 || k_max > cap)
        throw std::invalid_argument("ev_diff_report: k_max outside [1, floor(n^{1/20})+4]");
    const auto& eh = pair.spectrum_h.eigenvalues;
    const auto& em = pair.spectrum_m.eigenvalues;
    if (static_cast<int>(eh.size()) < k_max || static_cast<int>(em.size()) < k_max)
        throw std::invalid_argument("ev_diff_report: pair does not carry k_max eigenvalues");
    DiffReport rep;
    rep.n = n;
    rep.k_max = k_max;
    rep.seed = pair.seed;
    rep.max_abs_diag = pair.max_abs_diag;
    rep.per_index_diffs.resize(k_max);
    for (int i = 0; i < k_max; ++i) rep.per_index_diffs[i] = std::fabs(eh[i] - em[i]);
    return rep;
}

std::vector<cplx> stieltjes_diff(const CoupledPair& pair, const std::vector<cplx>& z_grid,
                                 double delta) {
    const int n = pair.spectrum_m.n;
    if (static_cast<int>(pair.spectrum_m.eigenvalues.size()) != n ||
        static_cast<int>(pair.spectrum_h.eigenvalues.size()) != n)
        throw std::invalid_argument("stieltjes_diff: pair must carry full spectra");
    const double lo = std::pow(n, delta) / n;
    const double hi = std::pow(n, -delta);
    std::vector<cplx> out;
    out.reserve(z_grid.size());
    for (cplx z : z_grid) {
        if (!(z.imag() >= lo && z.imag() <= hi))
            throw std::invalid_argument("stieltjes_diff: Im z outside [N^d/N, N^-d]");
        out.push_back(spectral::detail::stieltjes_any(pair.spectrum_m.eigenvalues, z) -
                      spectral::detail::stieltjes_any(pair.spectrum_h.eigenvalues, z));
    }
    return out;
}

}  // namespace ssklab::zerodiag
