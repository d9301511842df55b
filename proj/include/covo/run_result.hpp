#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace covo {

enum class Termination { BudgetExhausted, Stagnation, PopulationExtinct };

std::string_view termination_name(Termination t);

struct TraceEntry {
    std::uint64_t iteration = 0;
    std::uint64_t evals = 0;
    double best_error = 0.0;
    double elapsed_ms = 0.0;
};

/// Outcome of one optimizer run. Every field except the timing fields
/// (`elapsed_ms`, `wall_ms`) is a pure function of objective, parameters and seed.
struct RunResult {
    std::vector<double> best_position;
    double best_error = 0.0;
    std::vector<TraceEntry> trace;
    Termination termination = Termination::BudgetExhausted;
    std::uint64_t seed = 0;
    std::uint64_t evals = 0;
    double wall_ms = 0.0;
    // Evaluations discarded because the objective returned a non-finite value.
    std::uint64_t nonfinite_discards = 0;
};

/// True when the two results agree on everything except timing.
bool same_outcome(const RunResult& a, const RunResult& b);

}  // namespace covo
