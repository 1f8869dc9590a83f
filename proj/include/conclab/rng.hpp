#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace conclab {

/// Deterministic random stream with named substream derivation.
///
/// The engine is std::mt19937_64 (its output sequence is pinned by the
/// standard, so results are reproducible across platforms); the uniform and
/// normal transforms are implemented here instead of through
/// std::*_distribution, whose output is implementation-defined.
///
/// A master stream fans out into independent children via derive(), either by
/// label ("net", "median", ...) or by task index for parallel chunks, so every
/// phase of an experiment is reproducible in isolation.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Child stream for a named phase. Pure: does not advance this stream.
    RandomStream derive(std::string_view label) const;
    /// Child stream for parallel task `index`. Pure: does not advance this stream.
    RandomStream derive(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform on [a, b).
    double uniform(double a, double b);
    /// Integer uniform on [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Independent N(0,1) real and imaginary parts.
    std::complex<double> complex_normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// splitmix64 finalizer, used for seed mixing.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace conclab
