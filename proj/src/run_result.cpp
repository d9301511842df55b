#include "covo/run_result.hpp"

namespace covo {

std::string_view termination_name(Termination t) {
    switch (t) {
        case Termination::BudgetExhausted: return "budget_exhausted";
        case Termination::Stagnation: return "stagnation";
        case Termination::PopulationExtinct: return "population_extinct";
    }
    return "unknown";
}

bool same_outcome(const RunResult& a, const RunResult& b) {
    if (a.best_position != b.best_position || a.best_error != b.best_error ||
        a.termination != b.termination || a.seed != b.seed || a.evals != b.evals ||
        a.nonfinite_discards != b.nonfinite_discards || a.trace.size() != b.trace.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        const auto& x = a.trace[i];
        const auto& y = b.trace[i];
        if (x.iteration != y.iteration || x.evals != y.evals || x.best_error != y.best_error) return false;
    }
    return true;
}

}  // namespace covo
