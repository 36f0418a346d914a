#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace ssklab::linalg {

// Dense real symmetric matrix, row-major full storage.
struct DenseSym {
    int n = 0;
    std::vector<double> a;  // n*n, a[i*n+j]

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

// Symmetric tridiagonal matrix: diag has length n, off length n-1
// (off[i] couples rows i and i+1).
struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;
    int n() const { return static_cast<int>(diag.size()); }
};

// Householder reduction of a dense symmetric matrix to tridiagonal form
// (eigenvalues-only; the matrix content is destroyed).
Tridiag householder_tridiag(DenseSym& m);

// All eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL,
// sorted non-increasing.  Throws numeric_failure if an eigenvalue fails to
// converge within the iteration cap.
std::vector<double> tql_eigenvalues(Tridiag t);

// Number of eigenvalues of t strictly less than x (Sturm / LDL^T sign count).
int sturm_count_below(const Tridiag& t, double x);

// Largest k eigenvalues, sorted non-increasing, by Sturm bisection.
// O(k * n * 60); preferred over QL when k << n.
std::vector<double> sturm_topk(const Tridiag& t, int k);

// Gershgorin interval containing the whole spectrum.
void gershgorin_bounds(const Tridiag& t, double& lo, double& hi);

// Largest k eigenvalues of a symmetric operator given only its matvec,
// via Lanczos with full reorthogonalization.  Deterministic for a fixed
// seed (used for the start vector).  `dim` is the operator dimension.
std::vector<double> lanczos_topk(const std::function<void(const double*, double*)>& matvec,
                                 int dim, int k, uint64_t seed);

// Spec-facing eigensolver: validates symmetry (componentwise 1e-12), then
// Householder + QL.  Returns eigenvalues sorted non-increasing.
std::vector<double> eigen_sym(const DenseSym& m);

// Eigenvalues of a complex Hermitian matrix (row-major, h[i*n+j]), sorted
// non-increasing.  Uses the real 2n x 2n embedding [[X,-Y],[Y,X]], whose
// spectrum is that of X+iY with every eigenvalue doubled.
std::vector<double> eigen_herm(int n, const std::vector<std::complex<double>>& h);

}  // namespace ssklab::linalg
