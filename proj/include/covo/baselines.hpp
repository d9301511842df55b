#pragma once

#include <cstdint>
#include <string_view>

#include "covo/benchmarks.hpp"
#include "covo/run_result.hpp"

namespace covo {

enum class BaselineId { RandomSearch, Pso };

struct BaselineParams {
    BaselineId id = BaselineId::Pso;
    std::size_t population = 20;
    std::uint64_t budget = 100'000;
    // Constriction-equivalent coefficients (Clerc & Kennedy).
    double inertia = 0.7298;
    double cognitive = 1.49618;
    double social = 1.49618;

    void validate() const;
};

/// Uniform sampling of the box. One trace entry per batch of `batch` samples.
RunResult random_search(const ObjectiveSpec& spec, std::uint64_t budget, std::uint64_t seed,
                        std::size_t batch = 10);

/// Global-best particle swarm. Positions are clamped to the box and
/// velocities to +/-(upper - lower); one trace entry per swarm update.
RunResult pso(const ObjectiveSpec& spec, const BaselineParams& params, std::uint64_t seed);

}  // namespace covo
