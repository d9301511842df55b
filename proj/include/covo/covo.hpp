#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "covo/benchmarks.hpp"
#include "covo/params.hpp"
#include "covo/rng.hpp"
#include "covo/run_result.hpp"

namespace covo {

enum class Status { Infected, Recovered, Dead };

struct Individual {
    std::vector<double> position;
    std::optional<double> fitness;  // error against the objective's known optimum
    Status status = Status::Infected;
};

/// Per-iteration bookkeeping of population movements. Every change to
/// |infected| + |recovered| + |deaths| is accounted for by one of these.
struct TransitionLog {
    std::size_t zero_patients = 0;
    std::size_t spread_accepted = 0;
    std::size_t regenerated = 0;
    std::size_t died = 0;
    std::size_t recovered = 0;
    std::size_t reinfected = 0;
    std::size_t deduped = 0;
    std::size_t culled = 0;
};

struct PopulationState {
    std::vector<Individual> infected;
    std::vector<Individual> recovered;
    std::vector<Individual> deaths;
    Individual best;
    std::uint64_t iteration = 0;
    std::uint64_t evals = 0;
    std::uint64_t stagnation_counter = 0;
    std::uint64_t nonfinite_discards = 0;
    ChaoticMap p_die{1.0};
    ChaoticMap death_rate{0.888557};
    TransitionLog log;

    std::size_t total() const { return infected.size() + recovered.size() + deaths.size(); }
};

/// Copy of `params` with the search box replaced by the objective's bounds.
CovoParams bound_to(const CovoParams& params, const ObjectiveSpec& spec);

/// Evaluates `position` as a new individual, charging one evaluation and
/// updating the elite. Returns nullopt once the evaluation budget is spent.
/// A non-finite objective value discards the point and retries at a fresh
/// uniform point.
std::optional<Individual> infect(PopulationState& state, const CovoParams& params,
                                 const ObjectiveSpec& spec, Rng& rng, std::vector<double> position);

/// N points drawn uniformly in the objective's box.
std::vector<std::vector<double>> sample_uniform_population(std::size_t count, const ObjectiveSpec& spec,
                                                           Rng& rng);

/// Uniform population screened by opposition: each point competes with its
/// opposite and the fitter survives. Both chaotic rates advance once.
PopulationState init_population(const CovoParams& params, const ObjectiveSpec& spec, Rng& rng);

/// Euclidean distance. Throws std::invalid_argument on a length mismatch.
double pair_distance(std::span<const double> a, std::span<const double> b);

/// Social-distancing transform of a pairwise distance:
/// delta - dist when dist < delta, dist otherwise.
double social_distance(double dist, double delta);

/// Position of the generation's zero patient.
std::vector<double> zero_patient_position(const CovoParams& params, std::size_t dimension, Rng& rng);

/// Candidates infected by the live infected population this iteration.
std::vector<Individual> spread(PopulationState& state, const CovoParams& params, const ObjectiveSpec& spec,
                               Rng& rng);

/// Deterministic core of the infection update: each component moves by
/// sign_j * x_j * min(1, fit * p_die), then is clamped to [lower, upper].
std::vector<double> apply_infection_step(std::span<const double> x_old, double fit, double p_die,
                                         std::span<const double> signs, double lower, double upper);

/// Infection update with an independent random sign per dimension.
std::vector<double> update_individual(std::span<const double> x_old, double fit, double p_die,
                                      const CovoParams& params, Rng& rng);

/// Deaths (fitness <= P_die) with regeneration, recovery with probability
/// D_rate, and reinfection of recovered individuals not kept by isolation.
void classify_and_transition(PopulationState& state, const CovoParams& params, const ObjectiveSpec& spec,
                             Rng& rng);

/// Drops every individual within L-infinity distance eps of an earlier one.
std::vector<Individual> dedupe(std::vector<Individual> candidates, double eps);

std::optional<Termination> should_terminate(const PopulationState& state, const CovoParams& params);

using IterationObserver = std::function<void(const PopulationState&)>;

/// Full optimizer run. The observer, when set, sees the state after
/// initialization and after every iteration.
RunResult run(const ObjectiveSpec& spec, const CovoParams& params, std::uint64_t seed,
              const IterationObserver& observer = {});

}  // namespace covo
