#pragma once

#include <cstdint>
#include <vector>

namespace ssklab::rng {

// 64-bit finalizer from SplitMix64 (Vigna / Steele-Lea-Flood).  Bijective,
// good avalanche; used both as the stream generator and the seed deriver.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic stream seed for (master seed, trial index, stream role).
// Distinct (trial, role) pairs land in distinct streams; byte-identical
// replay only needs the three inputs.
inline uint64_t derive_seed(uint64_t master, uint64_t trial, uint64_t role) {
    uint64_t h = mix64(master + 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ (trial + 0xD1B54A32D192ED03ull));
    h = mix64(h ^ (role + 0x8CB92BA72F3D8DD7ull));
    return h;
}

// Counter-based SplitMix64 stream.  Cheap to construct, so every trial gets
// its own generator; no state is shared between threads.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on (0,1); never returns 0 so log(u) is safe.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Marsaglia polar method (cached spare value).
    double normal();

    // Gamma(alpha, 1) by Marsaglia-Tsang squeeze; alpha > 0.
    double gamma(double alpha);

    // Chi-distributed with k degrees of freedom, chi_k = sqrt(2 Gamma(k/2)).
    double chi(double k);

    // Fill with iid standard normals.
    void normals(double* out, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) out[i] = normal();
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ssklab::rng
