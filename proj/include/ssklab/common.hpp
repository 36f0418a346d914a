#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ssklab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Thrown when an iterative numerical routine fails to reach its target
// (eigensolver iteration cap, quadrature panel budget, root bracketing).
// Carries the achieved error estimate where one is meaningful.
class numeric_failure : public std::runtime_error {
public:
    explicit numeric_failure(const std::string& what, double achieved = -1.0)
        : std::runtime_error(what), achieved_error(achieved) {}
    double achieved_error;
};

// lambda_1 == lambda_2 (or a required strict gap is absent).
class degenerate_spectrum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation point landed on a branch cut of a principal-branch phase function.
class branch_cut_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Rejection sampler acceptance rate collapsed; the (n, beta) combination is
// outside the regime the oracle can handle.
class infeasible_regime : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// log(1+w) for complex w without cancellation when |w| is small.
inline cplx clog1p(cplx w) {
    const double x = w.real(), y = w.imag();
    const double r2 = 2.0 * x + x * x + y * y;  // |1+w|^2 - 1
    return {0.5 * std::log1p(r2), std::arg(cplx(1.0 + x, y))};
}

}  // namespace ssklab
