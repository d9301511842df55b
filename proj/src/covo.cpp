#include "covo/covo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace covo {
namespace {

constexpr int kNonfiniteRetries = 3;
constexpr double kImprovementTol = 1e-12;

double draw_rate(const RateRange& r, Rng& rng) {
    return r.lo < r.hi ? rng.uniform(r.lo, r.hi) : r.lo;
}

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

std::vector<double> uniform_point(std::size_t dimension, double lower, double upper, Rng& rng) {
    std::vector<double> x(dimension);
    for (auto& v : x) v = rng.uniform(lower, upper);
    return x;
}

bool fitter(const Individual& a, const Individual& b) { return *a.fitness < *b.fitness; }

// Stable sort by fitness, then keep the first `cap`.
std::size_t keep_fittest(std::vector<Individual>& group, std::size_t cap) {
    std::stable_sort(group.begin(), group.end(), fitter);
    if (group.size() <= cap) return 0;
    const std::size_t removed = group.size() - cap;
    group.resize(cap);
    return removed;
}

}  // namespace

CovoParams bound_to(const CovoParams& params, const ObjectiveSpec& spec) {
    CovoParams p = params;
    p.lower = spec.lower;
    p.upper = spec.upper;
    return p;
}

std::optional<Individual> infect(PopulationState& state, const CovoParams& params,
                                 const ObjectiveSpec& spec, Rng& rng, std::vector<double> position) {
    for (int attempt = 0; attempt <= kNonfiniteRetries; ++attempt) {
        if (state.evals >= params.max_evals) return std::nullopt;
        const double f = evaluate(spec, position, rng);
        ++state.evals;
        if (!std::isfinite(f)) {
            ++state.nonfinite_discards;
            position = uniform_point(spec.dimension, spec.lower, spec.upper, rng);
            continue;
        }
        Individual ind{std::move(position), error_of(spec, f), Status::Infected};
        if (!state.best.fitness || *ind.fitness < *state.best.fitness) state.best = ind;
        return ind;
    }
    return std::nullopt;
}

std::vector<std::vector<double>> sample_uniform_population(std::size_t count, const ObjectiveSpec& spec,
                                                           Rng& rng) {
    std::vector<std::vector<double>> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        points.push_back(uniform_point(spec.dimension, spec.lower, spec.upper, rng));
    }
    return points;
}

PopulationState init_population(const CovoParams& raw_params, const ObjectiveSpec& spec, Rng& rng) {
    const CovoParams params = bound_to(raw_params, spec);
    params.validate();

    PopulationState state;
    state.p_die = ChaoticMap(params.p_die, params.map_b, params.map_p);
    state.death_rate = ChaoticMap(params.death_rate, params.map_b, params.map_p);

    for (auto& x : sample_uniform_population(params.population, spec, rng)) {
        std::vector<double> opposite = opposition(x, spec.lower, spec.upper);
        for (auto& v : opposite) v = clamp(v, spec.lower, spec.upper);

        auto original = infect(state, params, spec, rng, std::move(x));
        auto mirrored = infect(state, params, spec, rng, std::move(opposite));
        if (original && mirrored) {
            state.infected.push_back(*mirrored->fitness < *original->fitness ? std::move(*mirrored)
                                                                             : std::move(*original));
        } else if (original) {
            state.infected.push_back(std::move(*original));
        } else if (mirrored) {
            state.infected.push_back(std::move(*mirrored));
        }
    }

    state.p_die.step();
    state.death_rate.step();
    return state;
}

double pair_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("pair_distance: length mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return std::sqrt(s);
}

double social_distance(double dist, double delta) {
    return dist < delta ? delta - dist : dist;
}

std::vector<double> zero_patient_position(const CovoParams& params, std::size_t dimension, Rng& rng) {
    const double span = params.upper - params.lower;
    std::vector<double> x(dimension);
    if (rng.bernoulli(params.p_travel)) {
        const double rate = draw_rate(params.super_spreading_rate, rng);
        std::fill(x.begin(), x.end(), params.lower + span * rate);
    } else if (params.social_distance < params.threshold) {
        for (auto& v : x) v = params.lower + span * rng.uniform01();
    } else {
        const double rate = draw_rate(params.spreading_rate, rng);
        std::fill(x.begin(), x.end(), params.lower + span * rate);
    }
    return x;
}

std::vector<Individual> spread(PopulationState& state, const CovoParams& params, const ObjectiveSpec& spec,
                               Rng& rng) {
    const double span = spec.upper - spec.lower;
    std::vector<Individual> accepted;
    // Index loop: infect() may replace state.best, never state.infected.
    for (std::size_t i = 0; i < state.infected.size(); ++i) {
        const bool super = rng.bernoulli(params.p_spreader);
        const std::size_t contacts = super ? params.super_contacts : 1;
        const RateRange& range = super ? params.super_spreading_rate : params.spreading_rate;
        for (std::size_t c = 0; c < contacts; ++c) {
            const auto& source = state.infected[i].position;
            const double rate = draw_rate(range, rng);
            std::vector<double> candidate(source.size());
            for (std::size_t j = 0; j < source.size(); ++j) {
                candidate[j] = clamp(source[j] + span * rate * rng.sign(), spec.lower, spec.upper);
            }
            const bool too_close = pair_distance(source, candidate) < params.delta;
            const bool complies = rng.bernoulli(params.p_isolation);
            if (!too_close && complies) continue;
            auto ind = infect(state, params, spec, rng, std::move(candidate));
            if (!ind) return accepted;
            accepted.push_back(std::move(*ind));
        }
    }
    return accepted;
}

std::vector<double> apply_infection_step(std::span<const double> x_old, double fit, double p_die,
                                         std::span<const double> signs, double lower, double upper) {
    if (signs.size() != x_old.size()) throw std::invalid_argument("apply_infection_step: sign count mismatch");
    const double factor = std::min(1.0, std::max(0.0, fit) * p_die);
    std::vector<double> x_new(x_old.size());
    for (std::size_t j = 0; j < x_old.size(); ++j) {
        x_new[j] = clamp(x_old[j] + signs[j] * x_old[j] * factor, lower, upper);
    }
    return x_new;
}

std::vector<double> update_individual(std::span<const double> x_old, double fit, double p_die,
                                      const CovoParams& params, Rng& rng) {
    std::vector<double> signs(x_old.size());
    for (auto& s : signs) s = rng.sign();
    return apply_infection_step(x_old, fit, p_die, signs, params.lower, params.upper);
}

void classify_and_transition(PopulationState& state, const CovoParams& params, const ObjectiveSpec& spec,
                             Rng& rng) {
    const double p_die = state.p_die.value();
    const double recovery = state.death_rate.value();

    std::vector<Individual> back_from_recovery;
    std::vector<Individual> staying;
    for (auto& r : state.recovered) {
        if (rng.bernoulli(params.p_reinfected) && !rng.bernoulli(params.p_isolation)) {
            r.status = Status::Infected;
            back_from_recovery.push_back(std::move(r));
            ++state.log.reinfected;
        } else {
            staying.push_back(std::move(r));
        }
    }
    state.recovered = std::move(staying);

    std::vector<Individual> still_infected;
    std::size_t to_regenerate = 0;
    for (auto& ind : state.infected) {
        if (*ind.fitness <= p_die) {
            ind.status = Status::Dead;
            state.deaths.push_back(std::move(ind));
            ++state.log.died;
            ++to_regenerate;
        } else if (rng.bernoulli(recovery)) {
            ind.status = Status::Recovered;
            state.recovered.push_back(std::move(ind));
            ++state.log.recovered;
        } else {
            still_infected.push_back(std::move(ind));
        }
    }
    state.infected = std::move(still_infected);
    for (auto& r : back_from_recovery) state.infected.push_back(std::move(r));

    for (std::size_t i = 0; i < to_regenerate; ++i) {
        auto fresh = infect(state, params, spec, rng, uniform_point(spec.dimension, spec.lower, spec.upper, rng));
        if (!fresh) break;
        state.infected.push_back(std::move(*fresh));
        ++state.log.regenerated;
    }
}

std::vector<Individual> dedupe(std::vector<Individual> candidates, double eps) {
    std::vector<Individual> kept;
    kept.reserve(candidates.size());
    for (auto& c : candidates) {
        const bool repeated = std::any_of(kept.begin(), kept.end(), [&](const Individual& k) {
            if (k.position.size() != c.position.size()) return false;
            for (std::size_t j = 0; j < c.position.size(); ++j) {
                if (std::fabs(k.position[j] - c.position[j]) > eps) return false;
            }
            return true;
        });
        if (!repeated) kept.push_back(std::move(c));
    }
    return kept;
}

std::optional<Termination> should_terminate(const PopulationState& state, const CovoParams& params) {
    if (state.iteration >= params.max_iter || state.evals >= params.max_evals) {
        return Termination::BudgetExhausted;
    }
    if (state.stagnation_counter >= params.stagnation_k) return Termination::Stagnation;
    const bool reinfection_possible =
        !state.recovered.empty() && params.p_reinfected > 0.0 && params.p_isolation < 1.0;
    if (state.infected.empty() && !reinfection_possible) return Termination::PopulationExtinct;
    return std::nullopt;
}

RunResult run(const ObjectiveSpec& spec, const CovoParams& raw_params, std::uint64_t seed,
              const IterationObserver& observer) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(clock::now() - start).count();
    };

    const CovoParams params = bound_to(raw_params, spec);
    Rng rng(seed);
    PopulationState state = init_population(params, spec, rng);

    RunResult result;
    result.seed = seed;
    const auto record = [&] {
        result.trace.push_back({state.iteration, state.evals, state.best.fitness.value_or(INFINITY), elapsed_ms()});
        if (observer) observer(state);
    };
    record();

    std::optional<Termination> stop;
    while (!(stop = should_terminate(state, params))) {
        ++state.iteration;
        state.log = {};
        const double previous_best = state.best.fitness.value_or(INFINITY);
        state.p_die.step();
        state.death_rate.step();

        if (auto pz = infect(state, params, spec, rng, zero_patient_position(params, spec.dimension, rng))) {
            state.infected.push_back(std::move(*pz));
            ++state.log.zero_patients;
        }

        std::vector<Individual> newcomers = spread(state, params, spec, rng);
        state.log.spread_accepted = newcomers.size();

        const double p_die = state.p_die.value();
        for (std::size_t i = 0; i < state.infected.size(); ++i) {
            const Individual& current = state.infected[i];
            if (!(*current.fitness > p_die)) continue;
            auto moved = update_individual(current.position, *current.fitness, p_die, params, rng);
            auto candidate = infect(state, params, spec, rng, std::move(moved));
            if (!candidate) break;
            if (*candidate->fitness <= *state.infected[i].fitness) state.infected[i] = std::move(*candidate);
        }

        classify_and_transition(state, params, spec, rng);

        for (auto& n : newcomers) state.infected.push_back(std::move(n));
        const std::size_t before = state.infected.size();
        state.infected = dedupe(std::move(state.infected), params.dedupe_eps);
        state.log.deduped = before - state.infected.size();
        state.log.culled = keep_fittest(state.infected, params.population) +
                           keep_fittest(state.recovered, params.population);

        if (state.best.fitness.value_or(INFINITY) < previous_best - kImprovementTol) {
            state.stagnation_counter = 0;
        } else {
            ++state.stagnation_counter;
        }
        record();
    }

    result.termination = *stop;
    result.best_position = state.best.position;
    result.best_error = state.best.fitness.value_or(INFINITY);
    result.evals = state.evals;
    result.nonfinite_discards = state.nonfinite_discards;
    result.wall_ms = elapsed_ms();
    return result;
}

}  // namespace covo
