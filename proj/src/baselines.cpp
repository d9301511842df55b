#include "covo/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace covo {
namespace {

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point start) {
    return std::chrono::duration<double, std::milli>(clock::now() - start).count();
}

// Objective value mapped to error; non-finite values rank last.
double error_at(const ObjectiveSpec& spec, std::span<const double> x, Rng& rng, RunResult& result) {
    const double f = evaluate(spec, x, rng);
    ++result.evals;
    if (!std::isfinite(f)) {
        ++result.nonfinite_discards;
        return std::numeric_limits<double>::infinity();
    }
    return error_of(spec, f);
}

}  // namespace

void BaselineParams::validate() const {
    if (population < 1) throw std::invalid_argument("BaselineParams: population must be >= 1");
    if (budget < population) throw std::invalid_argument("BaselineParams: budget must be >= population");
    if (!std::isfinite(inertia) || !std::isfinite(cognitive) || !std::isfinite(social)) {
        throw std::invalid_argument("BaselineParams: coefficients must be finite");
    }
}

RunResult random_search(const ObjectiveSpec& spec, std::uint64_t budget, std::uint64_t seed, std::size_t batch) {
    if (budget < 1) throw std::invalid_argument("random_search: budget must be >= 1");
    if (batch < 1) throw std::invalid_argument("random_search: batch must be >= 1");
    const auto start = clock::now();
    Rng rng(seed);
    RunResult result;
    result.seed = seed;
    result.best_error = std::numeric_limits<double>::infinity();

    std::vector<double> x(spec.dimension);
    std::uint64_t iteration = 0;
    while (result.evals < budget) {
        const std::uint64_t end = std::min<std::uint64_t>(budget, result.evals + batch);
        while (result.evals < end) {
            for (auto& v : x) v = rng.uniform(spec.lower, spec.upper);
            const double e = error_at(spec, x, rng, result);
            if (e < result.best_error || result.best_position.empty()) {
                result.best_error = e;
                result.best_position = x;
            }
        }
        result.trace.push_back({iteration++, result.evals, result.best_error, ms_since(start)});
    }
    result.termination = Termination::BudgetExhausted;
    result.wall_ms = ms_since(start);
    return result;
}

RunResult pso(const ObjectiveSpec& spec, const BaselineParams& params, std::uint64_t seed) {
    params.validate();
    const auto start = clock::now();
    Rng rng(seed);
    RunResult result;
    result.seed = seed;
    result.best_error = std::numeric_limits<double>::infinity();

    const std::size_t n = params.population;
    const std::size_t d = spec.dimension;
    const double span = spec.upper - spec.lower;

    std::vector<std::vector<double>> position(n, std::vector<double>(d));
    std::vector<std::vector<double>> velocity(n, std::vector<double>(d));
    std::vector<std::vector<double>> personal_best(n);
    std::vector<double> personal_error(n);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            position[i][j] = rng.uniform(spec.lower, spec.upper);
            velocity[i][j] = rng.uniform(-span, span) * 0.1;
        }
        personal_best[i] = position[i];
        personal_error[i] = error_at(spec, position[i], rng, result);
        if (personal_error[i] < result.best_error || result.best_position.empty()) {
            result.best_error = personal_error[i];
            result.best_position = position[i];
        }
    }
    std::uint64_t iteration = 0;
    result.trace.push_back({iteration, result.evals, result.best_error, ms_since(start)});

    while (result.evals < params.budget) {
        ++iteration;
        for (std::size_t i = 0; i < n && result.evals < params.budget; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                double v = params.inertia * velocity[i][j] +
                           params.cognitive * r1 * (personal_best[i][j] - position[i][j]) +
                           params.social * r2 * (result.best_position[j] - position[i][j]);
                v = std::clamp(v, -span, span);
                double x = position[i][j] + v;
                if (x < spec.lower || x > spec.upper) {
                    x = std::clamp(x, spec.lower, spec.upper);
                    v = 0.0;
                }
                velocity[i][j] = v;
                position[i][j] = x;
            }
            const double e = error_at(spec, position[i], rng, result);
            if (e < personal_error[i]) {
                personal_error[i] = e;
                personal_best[i] = position[i];
            }
            if (e < result.best_error) {
                result.best_error = e;
                result.best_position = position[i];
            }
        }
        result.trace.push_back({iteration, result.evals, result.best_error, ms_since(start)});
    }
    result.termination = Termination::BudgetExhausted;
    result.wall_ms = ms_since(start);
    return result;
}

}  // namespace covo
