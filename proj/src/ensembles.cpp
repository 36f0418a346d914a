#include "ssklab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssklab/common.hpp"
#include "ssklab/rng.hpp"

namespace ssklab::ensembles {

const char* kind_name(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::GOE_DENSE: return "goe";
        case EnsembleKind::GOE_ZERO_DIAG: return "goe-zero-diag";
        case EnsembleKind::GUE_DENSE: return "gue";
        case EnsembleKind::GOE_TRIDIAG: return "goe-tridiag";
    }
    return "?";
}

EnsembleKind kind_from_name(const std::string& name) {
    if (name == "goe") return EnsembleKind::GOE_DENSE;
    if (name == "goe-zero-diag") return EnsembleKind::GOE_ZERO_DIAG;
    if (name == "gue") return EnsembleKind::GUE_DENSE;
    if (name == "goe-tridiag") return EnsembleKind::GOE_TRIDIAG;
    throw std::invalid_argument("unknown ensemble kind: " + name);
}

linalg::DenseSym dense_goe(int n, uint64_t seed, bool zero_diag) {
    linalg::DenseSym m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    rng::SplitMix64 gen(seed);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    // Fixed draw order (diagonal, then rows of the strict lower triangle) so
    // the zero-diagonal variant consumes the same off-diagonal stream.
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = std::sqrt(2.0) * s * gen.normal();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            const double x = s * gen.normal();
            m.at(i, j) = x;
            m.at(j, i) = x;
        }
        m.at(i, i) = zero_diag ? 0.0 : diag[i];
    }
    return m;
}

// Dumitriu-Edelman beta-Hermite tridiagonal models.  Unnormalized, the GOE
// variant (diag N(0,2), off-diag chi_{n-i}) has eigenvalue density
// prop. to prod|dl| exp(-sum l^2/4), identical in law to the dense GOE with
// entry variances (2, 1); dividing by sqrt(n) puts the edge at 2.
linalg::Tridiag tridiag_goe(int n, uint64_t seed, bool normalized) {
    rng::SplitMix64 gen(seed);
    linalg::Tridiag t;
    t.diag.resize(n);
    t.off.resize(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) t.diag[i] = std::sqrt(2.0) * gen.normal();
    for (int i = 0; i + 1 < n; ++i) t.off[i] = gen.chi(static_cast<double>(n - 1 - i));
    if (normalized) {
        const double s = 1.0 / std::sqrt(static_cast<double>(n));
        for (auto& x : t.diag) x *= s;
        for (auto& x : t.off) x *= s;
    }
    return t;
}

linalg::Tridiag tridiag_gue(int n, uint64_t seed, bool normalized) {
    rng::SplitMix64 gen(seed);
    linalg::Tridiag t;
    t.diag.resize(n);
    t.off.resize(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) t.diag[i] = gen.normal();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i + 1 < n; ++i) t.off[i] = inv_sqrt2 * gen.chi(2.0 * (n - 1 - i));
    if (normalized) {
        const double s = 1.0 / std::sqrt(static_cast<double>(n));
        for (auto& x : t.diag) x *= s;
        for (auto& x : t.off) x *= s;
    }
    return t;
}

namespace {

std::vector<double> gue_dense_eigenvalues(int n, uint64_t seed) {
    rng::SplitMix64 gen(seed);
    std::vector<cplx> h(static_cast<std::size_t>(n) * n);
    const double sd = 1.0 / std::sqrt(static_cast<double>(n));      // diagonal, real
    const double so = 1.0 / std::sqrt(2.0 * n);                     // off-diag re/im parts
    for (int i = 0; i < n; ++i) h[static_cast<std::size_t>(i) * n + i] = sd * gen.normal();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const cplx z(so * gen.normal(), so * gen.normal());
            h[static_cast<std::size_t>(i) * n + j] = z;
            h[static_cast<std::size_t>(j) * n + i] = std::conj(z);
        }
    return linalg::eigen_herm(n, h);
}

void sort_desc(std::vector<double>& v) { std::sort(v.begin(), v.end(), std::greater<double>()); }

}  // namespace

SpectrumSample sample_spectrum(EnsembleKind kind, int n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_spectrum: n must be >= 1");
    if (kind == EnsembleKind::GOE_TRIDIAG && n < 2)
        throw std::invalid_argument("sample_spectrum: tridiagonal sampler needs n >= 2");
    SpectrumSample s;
    s.kind = kind;
    s.n = n;
    s.seed = seed;
    try {
        switch (kind) {
            case EnsembleKind::GOE_DENSE:
            case EnsembleKind::GOE_ZERO_DIAG: {
                linalg::DenseSym m = dense_goe(n, seed, kind == EnsembleKind::GOE_ZERO_DIAG);
                linalg::Tridiag t = linalg::householder_tridiag(m);
                s.eigenvalues = linalg::tql_eigenvalues(std::move(t));
                break;
            }
            case EnsembleKind::GUE_DENSE:
                s.eigenvalues = gue_dense_eigenvalues(n, seed);
                sort_desc(s.eigenvalues);
                break;
            case EnsembleKind::GOE_TRIDIAG:
                s.eigenvalues = linalg::tql_eigenvalues(tridiag_goe(n, seed, true));
                break;
        }
    } catch (const numeric_failure& ex) {
        throw numeric_failure("sample_spectrum(seed=" + std::to_string(seed) +
                              "): " + ex.what(), ex.achieved_error);
    }
    return s;
}

CoupledPair sample_coupled_pair(int n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_coupled_pair: n must be >= 1");
    CoupledPair pair;
    pair.seed = seed;
    linalg::DenseSym h = dense_goe(n, seed, false);
    linalg::DenseSym m = h;
    for (int i = 0; i < n; ++i) {
        pair.max_abs_diag = std::max(pair.max_abs_diag, std::fabs(m.at(i, i)));
        m.at(i, i) = 0.0;
    }
    pair.spectrum_h = {EnsembleKind::GOE_DENSE, n, seed, {}};
    pair.spectrum_m = {EnsembleKind::GOE_ZERO_DIAG, n, seed, {}};
    {
        linalg::Tridiag t = linalg::householder_tridiag(h);
        pair.spectrum_h.eigenvalues = linalg::tql_eigenvalues(std::move(t));
    }
    {
        linalg::Tridiag t = linalg::householder_tridiag(m);
        pair.spectrum_m.eigenvalues = linalg::tql_eigenvalues(std::move(t));
    }
    return pair;
}

CoupledPair sample_coupled_pair_topk(int n, uint64_t seed, int k) {
    if (n < 1) throw std::invalid_argument("sample_coupled_pair_topk: n must be >= 1");
    if (k >= n || n < 8) return sample_coupled_pair(n, seed);
    CoupledPair pair;
    pair.seed = seed;
    linalg::DenseSym h = dense_goe(n, seed, false);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = h.at(i, i);
        pair.max_abs_diag = std::max(pair.max_abs_diag, std::fabs(diag[i]));
    }
    auto matvec_h = [&](const double* x, double* y) {
        const double* a = h.a.data();
        for (int i = 0; i < n; ++i) {
            const double* row = a + static_cast<std::size_t>(i) * n;
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    };
    auto matvec_m = [&](const double* x, double* y) {
        matvec_h(x, y);
        for (int i = 0; i < n; ++i) y[i] -= diag[i] * x[i];
    };
    const uint64_t lseed = rng::derive_seed(seed, 0, 7);
    pair.spectrum_h = {EnsembleKind::GOE_DENSE, n, seed,
                       linalg::lanczos_topk(matvec_h, n, k, lseed)};
    pair.spectrum_m = {EnsembleKind::GOE_ZERO_DIAG, n, seed,
                       linalg::lanczos_topk(matvec_m, n, k, lseed)};
    return pair;
}

}  // namespace ssklab::ensembles
