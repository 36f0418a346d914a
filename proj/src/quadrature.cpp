#include "ssklab/quadrature.hpp"

#include <algorithm>

namespace ssklab::quad {

namespace {

struct VecEngine {
    const std::function<void(cplx, cplx*)>& eval;
    std::size_t m;
    cplx seg_dir;
    cplx seg_z0;
    double rel_tol;
    int max_depth;
    std::size_t max_panels;
    std::size_t panels_used = 0;

    std::vector<cplx> node_buf;
    std::vector<cplx> k15_buf, g7_buf;
    std::vector<double> scale;  // running per-component magnitude scale
    VectorPathResult* out;

    // One GK15 panel over t in [t0,t1] on the current segment; accumulates
    // k15 into k15_buf and the K-G error into g7_buf (as |diff|) per component.
    double panel(double t0, double t1) {
        const double c = 0.5 * (t0 + t1), h = 0.5 * (t1 - t0);
        std::fill(k15_buf.begin(), k15_buf.end(), cplx(0.0));
        std::fill(g7_buf.begin(), g7_buf.end(), cplx(0.0));
        auto add_node = [&](double t, double wk, double wg) {
            eval(seg_z0 + seg_dir * t, node_buf.data());
            for (std::size_t i = 0; i < m; ++i) {
                k15_buf[i] += wk * node_buf[i];
                if (wg != 0.0) g7_buf[i] += wg * node_buf[i];
            }
        };
        add_node(c, kWgk[7], kWg[3]);
        for (int i = 0; i < 7; ++i) {
            const double dx = h * kXgk[i];
            const double wg = (i % 2 == 1) ? kWg[i / 2] : 0.0;
            add_node(c - dx, kWgk[i], wg);
            add_node(c + dx, kWgk[i], wg);
        }
        out->evals += 15;
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            k15_buf[i] *= h;
            g7_buf[i] *= h;
            const double e = std::abs(k15_buf[i] - g7_buf[i]);
            g7_buf[i] = e;  // reuse as per-component error
            worst = std::max(worst, e / scale[i]);
        }
        return worst;
    }

    void accept() {
        for (std::size_t i = 0; i < m; ++i) {
            out->values[i] += k15_buf[i] * seg_dir;
            out->err[i] += g7_buf[i].real();
            scale[i] = std::max(scale[i], std::abs(out->values[i]));
        }
        ++panels_used;
    }

    void refine(double t0, double t1, double tol, int depth) {
        const double worst = panel(t0, t1);
        if (worst <= tol || depth >= max_depth || panels_used >= max_panels) {
            if (worst > tol) out->converged = false;
            accept();
            return;
        }
        const double mid = 0.5 * (t0 + t1);
        // k15/g7 buffers are clobbered by children; parent values discarded.
        refine(t0, mid, tol, depth + 1);
        refine(mid, t1, tol, depth + 1);
    }
};

}  // namespace

VectorPathResult integrate_path_vector(const std::function<void(cplx, cplx*)>& eval,
                                       std::size_t m, const std::vector<PathSegment>& path,
                                       double rel_tol, int max_depth, std::size_t max_panels) {
    VectorPathResult res;
    res.values.assign(m, cplx(0.0));
    res.err.assign(m, 0.0);

    VecEngine eng{eval, m, {}, {}, rel_tol, max_depth, max_panels, 0,
                  std::vector<cplx>(m), std::vector<cplx>(m), std::vector<cplx>(m),
                  std::vector<double>(m, 0.0), &res};

    // Scale pass: coarse panel magnitudes over every segment.
    for (const auto& seg : path) {
        eng.seg_z0 = seg.z0;
        eng.seg_dir = seg.dir;
        const int np = 4;
        for (int p = 0; p < np; ++p) {
            eng.panel(seg.len * p / np, seg.len * (p + 1) / np);
            for (std::size_t i = 0; i < m; ++i)
                eng.scale[i] += std::abs(eng.k15_buf[i]);
        }
    }
    for (std::size_t i = 0; i < m; ++i) eng.scale[i] = std::max(eng.scale[i], 1e-300);

    for (const auto& seg : path) {
        eng.seg_z0 = seg.z0;
        eng.seg_dir = seg.dir;
        const int np = 4;
        for (int p = 0; p < np; ++p)
            eng.refine(seg.len * p / np, seg.len * (p + 1) / np, rel_tol / (4.0 * np), 0);
    }
    return res;
}

}  // namespace ssklab::quad
