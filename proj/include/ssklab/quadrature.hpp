#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "ssklab/common.hpp"

namespace ssklab::quad {

// Gauss-Kronrod 7-15 pair on [-1,1] (QUADPACK constants).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct GkResult {
    T value{};
    double err = 0.0;
    std::size_t evals = 0;
};

namespace detail {

template <class F, class T>
void gk15_panel(F& f, double a, double b, T& k15, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T resk = kWgk[7] * f(c);
    T resg = kWg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const T fsum = f(c - dx) + f(c + dx);
        resk += kWgk[i] * fsum;
        if (i % 2 == 1) resg += kWg[i / 2] * fsum;
    }
    k15 = resk * h;
    err = std::abs((resk - resg) * h);
}

template <class F, class T>
void adaptive_rec(F& f, double a, double b, double tol_abs, int depth, int max_depth,
                  GkResult<T>& acc) {
    T k15;
    double err;
    gk15_panel<F, T>(f, a, b, k15, err);
    acc.evals += 15;
    if (err <= tol_abs || depth >= max_depth) {
        acc.value += k15;
        acc.err += err;
        return;
    }
    const double mid = 0.5 * (a + b);
    adaptive_rec<F, T>(f, a, mid, 0.5 * tol_abs, depth + 1, max_depth, acc);
    adaptive_rec<F, T>(f, mid, b, 0.5 * tol_abs, depth + 1, max_depth, acc);
}

}  // namespace detail

// Adaptive Gauss-Kronrod over [a,b].  Tolerance is rel_tol * (coarse estimate
// of int |f|) with abs_tol as a floor; deterministic depth-first refinement.
template <class F>
auto adaptive_gk(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 1e-14,
                 int max_depth = 40) {
    using T = decltype(f(a));
    GkResult<T> acc;
    if (a == b) return acc;
    // Coarse scale pass: 8 uniform panels of |f| magnitude.
    double scale = 0.0;
    {
        const double h = (b - a) / 8.0;
        for (int p = 0; p < 8; ++p) {
            T k15;
            double err;
            detail::gk15_panel<F, T>(f, a + p * h, a + (p + 1) * h, k15, err);
            scale += std::abs(k15);
        }
        acc.evals += 8 * 15;
    }
    const double tol = std::max(abs_tol, rel_tol * scale);
    const double h = (b - a) / 8.0;
    for (int p = 0; p < 8; ++p)
        detail::adaptive_rec<F, T>(f, a + p * h, a + (p + 1) * h, tol / 8.0, 0, max_depth, acc);
    return acc;
}

// A straight path segment z(t) = z0 + dir * t, t in [0, len], |dir| = 1.
struct PathSegment {
    cplx z0;
    cplx dir;
    double len;
};

struct VectorPathResult {
    std::vector<cplx> values;
    std::vector<double> err;
    std::size_t evals = 0;
    bool converged = true;
};

// Integrates m complex component functions along a chain of straight
// segments, with one shared evaluation per node: eval(z, out) fills
// out[0..m-1].  All components see the same adaptive panel set; refinement
// is driven by the worst per-component Kronrod-Gauss discrepancy relative
// to each component's running scale.  Deterministic (serial, depth-first).
VectorPathResult integrate_path_vector(const std::function<void(cplx, cplx*)>& eval,
                                       std::size_t m, const std::vector<PathSegment>& path,
                                       double rel_tol = 1e-10, int max_depth = 42,
                                       std::size_t max_panels = 20000);

}  // namespace ssklab::quad
