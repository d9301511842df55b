#include "covo/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace covo {

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("Rng::uniform: require finite lo < hi");
    }
    double u = lo + (hi - lo) * uniform01();
    // Rounding can land exactly on hi for wide ranges.
    if (u >= hi) u = std::nextafter(hi, lo);
    if (u < lo) u = lo;
    return u;
}

double Rng::sign() {
    return (engine_() >> 63) != 0 ? 1.0 : -1.0;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
}

bool Rng::bernoulli(double p) {
    if (p <= 0.0) {
        // Keep the stream advancing identically regardless of p.
        (void)uniform01();
        return false;
    }
    return uniform01() < p;
}

double Rng::normal() {
    return normal_(engine_);
}

double wrap_unit(double raw) {
    double v = std::fabs(raw);
    v -= std::floor(v);
    if (v < kChaosFloor) v = kChaosFloor;
    return v;
}

ChaoticMap::ChaoticMap(double value, double b, double p) : value_(value), b_(b), p_(p) {
    if (!std::isfinite(value) || !std::isfinite(b) || !std::isfinite(p)) {
        throw std::domain_error("ChaoticMap: non-finite state");
    }
}

double ChaoticMap::step() {
    if (!std::isfinite(value_)) throw std::domain_error("ChaoticMap::step: non-finite state");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double raw = std::fabs(value_ + b_ - std::fabs(p_ - two_pi)) * std::sin(two_pi * value_);
    if (!std::isfinite(raw)) throw std::domain_error("ChaoticMap::step: non-finite iterate");
    value_ = wrap_unit(raw);
    return value_;
}

std::vector<double> opposition(std::span<const double> x, double lower, double upper) {
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] >= lower && x[j] <= upper)) {
            throw std::invalid_argument("opposition: component outside bounds");
        }
        out[j] = lower + upper - x[j];
    }
    return out;
}

}  // namespace covo
