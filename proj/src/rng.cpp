#include "conclab/rng.hpp"

#include <cmath>

namespace conclab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RandomStream RandomStream::derive(std::string_view label) const {
    return RandomStream(splitmix64(seed_ ^ fnv1a64(label)));
}

RandomStream RandomStream::derive(std::uint64_t index) const {
    // Distinct tag keeps index-derived children apart from label-derived ones.
    return RandomStream(splitmix64(seed_ ^ splitmix64(index ^ 0xA5A5A5A5A5A5A5A5ull)));
}

double RandomStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double a, double b) {
    return a + (b - a) * uniform01();
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
    // Rejection sampling over the smallest covering power of two.
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t r;
    do {
        r = engine_() & mask;
    } while (r >= n);
    return r;
}

double RandomStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * factor;
    has_cached_normal_ = true;
    return u * factor;
}

std::complex<double> RandomStream::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

}  // namespace conclab
