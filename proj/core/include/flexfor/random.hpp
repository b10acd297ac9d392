#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace flexfor {

/// Engine used for every random stream. Its output sequence is fixed by the
/// standard, so seeded runs are reproducible across toolchains.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stable 64-bit hash of a stream name (FNV-1a followed by mix64).
std::uint64_t stream_id(std::string_view name) noexcept;

/// Derive an independent sub-seed from a master seed and a path of stream
/// identifiers, e.g. {feeder, method, run, sample}.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// The distributions below are implemented here instead of using
// <random>'s, whose algorithms are implementation-defined.

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng) noexcept;

double uniform(Rng& rng, double lo, double hi) noexcept;

/// Uniform integer in the closed range [lo, hi].
std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) noexcept;

/// Standard normal variate (Marsaglia polar method).
double standard_normal(Rng& rng) noexcept;

/// Gamma(shape, 1) variate via Marsaglia & Tsang; shapes below one use the
/// U^(1/shape) boost.
double gamma_variate(Rng& rng, double shape);

/// Draw x ~ Dir(alpha) into `out` (same length as alpha). Components are
/// non-negative and sum to one up to rounding.
void dirichlet(Rng& rng, std::span<const double> alpha, std::span<double> out);

}  // namespace flexfor
