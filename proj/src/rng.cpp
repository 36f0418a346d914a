#include "ssklab/rng.hpp"

#include <cmath>

namespace ssklab::rng {

double SplitMix64::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

double SplitMix64::gamma(double alpha) {
    if (alpha < 1.0) {
        // Boost trick: Gamma(a) = Gamma(a+1) * U^{1/a}
        const double u = uniform01();
        return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double SplitMix64::chi(double k) {
    if (k == 1.0) return std::fabs(normal());
    return std::sqrt(2.0 * gamma(0.5 * k));
}

}  // namespace ssklab::rng
