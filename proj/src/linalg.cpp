#include "ssklab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "ssklab/common.hpp"
#include "ssklab/rng.hpp"

namespace ssklab::linalg {

namespace {
inline double hypot2(double a, double b) { return std::hypot(a, b); }
}  // namespace

Tridiag householder_tridiag(DenseSym& m) {
    const int n = m.n;
    Tridiag t;
    t.diag.assign(n, 0.0);
    t.off.assign(n > 1 ? n - 1 : 0, 0.0);
    if (n == 1) {
        t.diag[0] = m.at(0, 0);
        return t;
    }
    double* a = m.a.data();
    std::vector<double> v(n), p(n), w(n);

    // Reduce trailing rows one at a time; only the lower triangle is touched.
    for (int i = n - 1; i >= 2; --i) {
        const int l = i;  // active leading block is l x l
        double* rowi = a + static_cast<std::size_t>(i) * n;
        double scale = 0.0;
        for (int k = 0; k < l; ++k) scale += std::fabs(rowi[k]);
        if (scale == 0.0) {
            t.off[i - 1] = rowi[l - 1];
            continue;
        }
        double h = 0.0;
        for (int k = 0; k < l; ++k) {
            v[k] = rowi[k] / scale;
            h += v[k] * v[k];
        }
        double f = v[l - 1];
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        t.off[i - 1] = scale * g;
        h -= f * g;  // h = |v|^2 / 2 after the update below
        v[l - 1] = f - g;

        // p = A_l v / h, symmetric matvec over the lower triangle.
        std::fill(p.begin(), p.begin() + l, 0.0);
        for (int j = 0; j < l; ++j) {
            const double* rowj = a + static_cast<std::size_t>(j) * n;
            const double vj = v[j];
            double s = rowj[j] * vj;
            for (int k = 0; k < j; ++k) {
                s += rowj[k] * v[k];
                p[k] += rowj[k] * vj;
            }
            p[j] += s;
        }
        double vp = 0.0;
        for (int k = 0; k < l; ++k) {
            p[k] /= h;
            vp += v[k] * p[k];
        }
        const double kk = vp / (2.0 * h);
        for (int k = 0; k < l; ++k) w[k] = p[k] - kk * v[k];

        // A_l -= v w^T + w v^T  (lower triangle)
        for (int j = 0; j < l; ++j) {
            double* rowj = a + static_cast<std::size_t>(j) * n;
            const double vj = v[j], wj = w[j];
            for (int k = 0; k <= j; ++k) rowj[k] -= vj * w[k] + wj * v[k];
        }
    }
    t.off[0] = a[n];  // a[1][0]
    for (int i = 0; i < n; ++i) t.diag[i] = a[static_cast<std::size_t>(i) * n + i];
    return t;
}

std::vector<double> tql_eigenvalues(Tridiag t) {
    const int n = t.n();
    std::vector<double>& d = t.diag;
    std::vector<double> e(n, 0.0);
    for (int i = 1; i < n; ++i) e[i - 1] = t.off[i - 1];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 + std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw numeric_failure("tql_eigenvalues: QL iteration cap exceeded");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, pp = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= pp;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end(), std::greater<double>());
    return d;
}

int sturm_count_below(const Tridiag& t, double x) {
    const int n = t.n();
    int count = 0;
    double q = t.diag[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
        const double ei = t.off[i - 1];
        if (q == 0.0) q = -1e-300;
        q = (t.diag[i] - x) - ei * ei / q;
        if (q < 0.0) ++count;
    }
    return count;
}

void gershgorin_bounds(const Tridiag& t, double& lo, double& hi) {
    const int n = t.n();
    lo = t.diag[0];
    hi = t.diag[0];
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(t.off[i - 1]);
        if (i < n - 1) r += std::fabs(t.off[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
}

std::vector<double> sturm_topk(const Tridiag& t, int k) {
    const int n = t.n();
    k = std::min(k, n);
    double lo0, hi0;
    gershgorin_bounds(t, lo0, hi0);
    std::vector<double> out(k);
    double hi = hi0;
    for (int j = 0; j < k; ++j) {
        // Descending eigenvalue #j:  lambda_j < x  <=>  count_below(x) >= n - j.
        double lo = lo0, h = hi;
        for (int it = 0; it < 120 && h - lo > 4.0 * std::numeric_limits<double>::epsilon() *
                                                      (std::fabs(lo) + std::fabs(h)) + 1e-300;
             ++it) {
            const double mid = 0.5 * (lo + h);
            if (sturm_count_below(t, mid) >= n - j)
                h = mid;
            else
                lo = mid;
        }
        out[j] = 0.5 * (lo + h);
        hi = h;  // lambda_{j+1} <= lambda_j
    }
    return out;
}

std::vector<double> lanczos_topk(const std::function<void(const double*, double*)>& matvec,
                                 int dim, int k, uint64_t seed) {
    if (k >= dim) throw std::invalid_argument("lanczos_topk: k must be < dim");
    const int max_iter = std::min(dim, std::max(4 * k + 120, 160));
    std::vector<std::vector<double>> basis;
    basis.reserve(max_iter + 1);

    rng::SplitMix64 gen(seed);
    std::vector<double> v(dim);
    double nrm = 0.0;
    for (int i = 0; i < dim; ++i) {
        v[i] = gen.normal();
        nrm += v[i] * v[i];
    }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;
    basis.push_back(v);

    std::vector<double> alpha, beta;
    std::vector<double> wv(dim);
    std::vector<double> prev_ritz;
    int stable_checks = 0;

    for (int m = 0; m < max_iter; ++m) {
        matvec(basis[m].data(), wv.data());
        double a = 0.0;
        for (int i = 0; i < dim; ++i) a += wv[i] * basis[m][i];
        alpha.push_back(a);
        // Full reorthogonalization, twice (DGKS).
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                double dot = 0.0;
                for (int i = 0; i < dim; ++i) dot += wv[i] * q[i];
                for (int i = 0; i < dim; ++i) wv[i] -= dot * q[i];
            }
        }
        double b = 0.0;
        for (int i = 0; i < dim; ++i) b += wv[i] * wv[i];
        b = std::sqrt(b);

        const int mm = m + 1;
        if (mm >= std::max(2 * k, 8) && (mm % 6 == 0 || b < 1e-14 || mm == max_iter)) {
            Tridiag tm;
            tm.diag.assign(alpha.begin(), alpha.end());
            tm.off.assign(beta.begin(), beta.end());
            std::vector<double> ritz = sturm_topk(tm, std::min(k, mm));
            if (static_cast<int>(prev_ritz.size()) >= k && static_cast<int>(ritz.size()) >= k) {
                double delta = 0.0;
                for (int j = 0; j < k; ++j) delta = std::max(delta, std::fabs(ritz[j] - prev_ritz[j]));
                const double scale = std::max(std::fabs(ritz[0]), 1e-30);
                stable_checks = (delta < 1e-14 * scale) ? stable_checks + 1 : 0;
                if (stable_checks >= 2 || b < 1e-14) return ritz;
            }
            prev_ritz = ritz;
        }
        if (b < 1e-14) break;  // invariant subspace found
        beta.push_back(b);
        for (auto& x : wv) x /= b;
        basis.push_back(wv);
    }
    Tridiag tm;
    tm.diag.assign(alpha.begin(), alpha.end());
    tm.off.assign(beta.begin(), beta.end());
    if (static_cast<int>(tm.diag.size()) < k)
        throw numeric_failure("lanczos_topk: Krylov space exhausted before k eigenvalues");
    return sturm_topk(tm, k);
}

std::vector<double> eigen_sym(const DenseSym& m) {
    const int n = m.n;
    if (n < 1) throw std::invalid_argument("eigen_sym: empty matrix");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::fabs(m.at(i, j) - m.at(j, i)) > 1e-12)
                throw std::invalid_argument("eigen_sym: matrix not symmetric within 1e-12");
    DenseSym work = m;
    Tridiag t = householder_tridiag(work);
    return tql_eigenvalues(std::move(t));
}

std::vector<double> eigen_herm(int n, const std::vector<std::complex<double>>& h) {
    if (n < 1 || static_cast<int>(h.size()) != n * n)
        throw std::invalid_argument("eigen_herm: bad dimensions");
    DenseSym big;
    big.n = 2 * n;
    big.a.assign(static_cast<std::size_t>(2 * n) * (2 * n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto z = h[static_cast<std::size_t>(i) * n + j];
            big.at(i, j) = z.real();
            big.at(i + n, j + n) = z.real();
            big.at(i + n, j) = z.imag();
            big.at(i, j + n) = -z.imag();
        }
    }
    // Symmetrize away Hermitian-input roundoff before the solver's check.
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < i; ++j) {
            const double s = 0.5 * (big.at(i, j) + big.at(j, i));
            big.at(i, j) = s;
            big.at(j, i) = s;
        }
    std::vector<double> doubled = eigen_sym(big);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    return out;
}

}  // namespace ssklab::linalg
