#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace covo {

/// Seeded source of every random draw an optimizer run makes.
///
/// The same seed yields the same sequence within one build. One instance
/// belongs to one run; it may be moved across threads but never shared.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform draw in [0, 1) built from the top 53 bits of one engine output.
    double uniform01();

    /// Uniform draw in [lo, hi). Throws std::invalid_argument unless lo < hi.
    double uniform(double lo, double hi);

    /// +1.0 or -1.0 with equal probability.
    double sign();

    /// Uniform index in [0, n). Requires n > 0.
    std::size_t index(std::size_t n);

    /// True with probability p (p clamped to [0, 1]).
    bool bernoulli(double p);

    /// Standard normal draw.
    double normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Smallest value a chaotic iterate may take.
inline constexpr double kChaosFloor = 1e-6;

/// Self-evolving rate driven by the recurrence
///   v' = |v + b - |p - 2*pi|| * sin(2*pi*v)
/// with the raw result folded back into (0, 1) by absolute value and
/// fractional part. Anything below kChaosFloor (including the rounding
/// residue of sin(k*pi)) becomes kChaosFloor.
class ChaoticMap {
public:
    ChaoticMap(double value, double b = 0.5, double p = 2.0 * std::numbers::pi);

    double value() const { return value_; }
    double b() const { return b_; }
    double p() const { return p_; }

    /// Advances the map once and returns the new value.
    /// Throws std::domain_error if the state is not finite.
    double step();

private:
    double value_;
    double b_;
    double p_;
};

/// Folds an arbitrary finite real into (0, 1).
double wrap_unit(double raw);

/// Opposite point L + U - x, component-wise.
/// Throws std::invalid_argument if any component lies outside [lower, upper].
std::vector<double> opposition(std::span<const double> x, double lower, double upper);

}  // namespace covo
