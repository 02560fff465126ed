#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <random>

namespace mspe::rng {

// SplitMix64 finalizer, used to turn (seed, stream ids) into uncorrelated keys.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

// Independent stream for a labelled position, e.g. (seed, layer, site).
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t key = splitmix64(seed);
    key = mix(key, a);
    key = mix(key, b);
    key = mix(key, c);
    return std::mt19937_64(key);
}

// Uniform in [0, 1). mt19937_64 output is bit-stable across platforms, and doing
// the scaling ourselves keeps variates independent of the standard library.
inline double uniform(std::mt19937_64 &g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64 &g, double lo, double hi) {
    return lo + (hi - lo) * uniform(g);
}

// Box-Muller pair; one draw of two uniforms yields one standard complex Gaussian.
inline std::complex<double> complex_gaussian(std::mt19937_64 &g) {
    double u1 = uniform(g);
    while (u1 <= 0.0)
        u1 = uniform(g);
    const double u2 = uniform(g);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

} // namespace mspe::rng
