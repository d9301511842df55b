#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "covo/covo.hpp"
#include "doctest.h"

using namespace covo;

namespace {

CovoParams forced_params() {
    CovoParams p = preset_table_two();
    p.p_isolation = 0.0;  // nobody complies: every contact transmits
    p.max_evals = 1'000'000;
    return p;
}

PopulationState single_infected(const ObjectiveSpec& spec, std::vector<double> position) {
    PopulationState state;
    Rng rng(0);
    const double f = evaluate(spec, position, rng);
    state.infected.push_back({std::move(position), error_of(spec, f), Status::Infected});
    state.best = state.infected.front();
    return state;
}

struct Instrumented {
    ObjectiveSpec spec;
    std::shared_ptr<std::size_t> out_of_bounds = std::make_shared<std::size_t>(0);
    std::shared_ptr<std::size_t> calls = std::make_shared<std::size_t>(0);
    std::shared_ptr<double> min_seen = std::make_shared<double>(INFINITY);
};

Instrumented instrument(ObjectiveSpec spec) {
    Instrumented inst{spec};
    auto inner = spec.evaluator;
    const double lo = spec.lower;
    const double hi = spec.upper;
    const double opt = spec.optimum_value;
    auto oob = inst.out_of_bounds;
    auto calls = inst.calls;
    auto min_seen = inst.min_seen;
    inst.spec.evaluator = [=](std::span<const double> x, Rng& rng) {
        ++*calls;
        for (double v : x) {
            if (v < lo || v > hi) ++*oob;
        }
        const double f = inner(x, rng);
        *min_seen = std::min(*min_seen, f - opt);
        return f;
    };
    return inst;
}

}  // namespace

TEST_CASE("presets carry the published parameter tables") {
    const auto one = preset_table_one();
    CHECK(one.p_die == 0.43597);
    CHECK(one.death_rate == 0.13955);
    CHECK(one.social_distance == 13.77323);
    CHECK(one.delta == 0.97248);
    CHECK(one.threshold == 0.5);
    CHECK(one.lower == -10.0);
    CHECK(one.upper == 10.0);
    CHECK(one.spreading_rate.lo == 0.0);
    CHECK(one.spreading_rate.hi == 0.5);
    CHECK(one.super_spreading_rate.lo == 0.5);
    CHECK(one.super_spreading_rate.hi == 1.0);

    const auto two = preset_table_two();
    CHECK(two.population == 10);
    CHECK(two.spreading_rate.lo == 0.3575);
    CHECK(two.super_spreading_rate.lo == 0.80138);
    CHECK(two.p_travel == 0.0);
    CHECK(two.p_die == 1.0);
    CHECK(two.death_rate == 0.888557);
    CHECK(two.social_distance == 0.87306);
    CHECK(two.lower == -100.0);
    CHECK(two.upper == 100.0);
    CHECK(two.delta == 0.41466);
    CHECK(two.super_contacts == 15);

    CHECK_NOTHROW(one.validate());
    CHECK_NOTHROW(two.validate());
    CHECK(preset_by_name("tableI").delta == one.delta);
    CHECK_THROWS_AS(preset_by_name("tableIII"), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    auto p = preset_table_two();
    p.population = 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = preset_table_two();
    p.delta = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = preset_table_two();
    p.p_isolation = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = preset_table_two();
    p.lower = 5.0;
    p.upper = 5.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("overrides apply by name and reject unknown keys") {
    auto p = preset_table_two();
    apply_overrides(p, {{"population", 20}, {"spreading_rate", {0.1, 0.4}}, {"p_isolation", 0.25}});
    CHECK(p.population == 20);
    CHECK(p.spreading_rate.lo == 0.1);
    CHECK(p.spreading_rate.hi == 0.4);
    CHECK(p.p_isolation == 0.25);
    CHECK_THROWS_AS(apply_overrides(p, {{"nonsense", 1}}), std::invalid_argument);
    auto q = preset_table_one();
    apply_overrides(q, to_json(p));
    CHECK(to_json(q) == to_json(p));
}

TEST_CASE("init_population: size, evaluation count, elite, determinism") {
    const auto spec = make_function(FunctionId::F1, 10);
    auto params = preset_table_two();
    Rng a(17);
    const auto state = init_population(params, spec, a);
    CHECK(state.infected.size() == 10);
    CHECK(state.evals == 20);
    for (const auto& ind : state.infected) {
        CHECK(*state.best.fitness <= *ind.fitness);
        CHECK(spec.in_bounds(ind.position));
    }

    Rng b(17);
    const auto again = init_population(params, spec, b);
    REQUIRE(again.infected.size() == state.infected.size());
    for (std::size_t i = 0; i < state.infected.size(); ++i) {
        CHECK(again.infected[i].position == state.infected[i].position);
    }
    // Both chaotic rates advanced exactly once from the preset values.
    ChaoticMap pd(params.p_die);
    CHECK(state.p_die.value() == pd.step());
}

TEST_CASE("opposition screening never worsens the raw elite") {
    const auto spec = make_function(FunctionId::F1, 10);
    const auto params = preset_table_two();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng raw_rng(seed);
        const auto raw = sample_uniform_population(params.population, spec, raw_rng);
        double raw_best = INFINITY;
        for (const auto& x : raw) raw_best = std::min(raw_best, suite_value(FunctionId::F1, x));
        Rng rng(seed);
        const auto state = init_population(params, spec, rng);
        CHECK(*state.best.fitness <= raw_best);
    }
}

TEST_CASE("pair distance") {
    const std::vector<double> a{1.5, -2.0, 7.0};
    CHECK(pair_distance(a, a) == 0.0);
    CHECK(pair_distance(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}) == 5.0);
    const std::vector<double> b{-3.0, 0.5, 2.0};
    CHECK(pair_distance(a, b) == pair_distance(b, a));
    CHECK_THROWS_AS(pair_distance(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("social distancing operator") {
    CHECK(social_distance(0.2, 0.41466) == doctest::Approx(0.21466).epsilon(1e-14));
    CHECK(social_distance(0.9, 0.41466) == 0.9);
    CHECK(social_distance(0.41466, 0.41466) == 0.41466);
    for (double d = 0.0; d < 3.0; d += 0.01) CHECK(social_distance(d, 0.41466) >= 0.0);
}

TEST_CASE("zero patient branches") {
    Rng rng(3);
    auto p = preset_table_two();  // P_travel = 0, H_dist >= T: spreading-rate branch
    auto x = zero_patient_position(p, 6, rng);
    for (double v : x) CHECK(v == doctest::Approx(-28.5).epsilon(1e-12));

    p.p_travel = 1.0;
    x = zero_patient_position(p, 6, rng);
    for (double v : x) CHECK(v == doctest::Approx(60.276).epsilon(1e-12));

    p.p_travel = 0.0;
    p.social_distance = 0.1;  // below the threshold: uniform random branch
    Rng r1(21);
    Rng r2(21);
    x = zero_patient_position(p, 6, r1);
    (void)r2.uniform01();  // the travel draw
    for (double v : x) CHECK(v == -100.0 + 200.0 * r2.uniform01());

    p.lower = -1.0;
    p.upper = 1.0;
    for (int i = 0; i < 100; ++i) {
        for (double v : zero_patient_position(p, 3, rng)) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("spread: ordinary and super spreaders") {
    const auto spec = make_function(FunctionId::F1, 5);
    auto params = forced_params();

    params.p_spreader = 0.0;
    auto state = single_infected(spec, std::vector<double>(5, 3.0));
    Rng rng(1);
    CHECK(spread(state, params, spec, rng).size() == 1);
    CHECK(state.evals == 1);

    params.p_spreader = 1.0;
    state = single_infected(spec, std::vector<double>(5, 3.0));
    const auto candidates = spread(state, params, spec, rng);
    CHECK(candidates.size() == 15);
    for (const auto& c : candidates) {
        CHECK(spec.in_bounds(c.position));
        CHECK(*state.best.fitness <= *c.fitness);
    }
}

TEST_CASE("spread: distance and compliance gate transmission") {
    const auto spec = make_function(FunctionId::F1, 5);
    auto params = forced_params();
    params.p_spreader = 1.0;
    params.p_isolation = 1.0;  // everyone complies

    params.delta = 1e9;  // every contact is too close: transmits anyway
    auto state = single_infected(spec, std::vector<double>(5, 0.0));
    Rng rng(4);
    CHECK(spread(state, params, spec, rng).size() == 15);

    params.delta = 1e-9;  // far apart and compliant: nothing transmits
    state = single_infected(spec, std::vector<double>(5, 0.0));
    CHECK(spread(state, params, spec, rng).empty());
    CHECK(state.evals == 0);
}

TEST_CASE("spread respects the evaluation budget") {
    const auto spec = make_function(FunctionId::F1, 5);
    auto params = forced_params();
    params.p_spreader = 1.0;
    params.max_evals = 4;
    auto state = single_infected(spec, std::vector<double>(5, 1.0));
    Rng rng(9);
    CHECK(spread(state, params, spec, rng).size() == 4);
    CHECK(state.evals == 4);
}

TEST_CASE("infection step") {
    const std::vector<double> signs{1.0, -1.0};
    const auto x = apply_infection_step(std::vector<double>{10.0, -10.0}, 0.01, 1.0, signs, -100.0, 100.0);
    CHECK(x[0] == doctest::Approx(10.1).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(-9.9).epsilon(1e-14));

    const std::vector<double> old{3.0, -4.0};
    CHECK(apply_infection_step(old, 0.0, 0.7, signs, -100.0, 100.0) == old);

    const auto capped = apply_infection_step(std::vector<double>{100.0, 100.0}, 1e6, 1.0, signs, -100.0, 100.0);
    CHECK(capped[0] == 100.0);
    CHECK(capped[1] == 0.0);

    Rng rng(2);
    auto params = preset_table_two();
    for (int i = 0; i < 200; ++i) {
        for (double v : update_individual(std::vector<double>{99.0, -99.0, 50.0}, 1e4, 0.9, params, rng)) {
            CHECK(v >= -100.0);
            CHECK(v <= 100.0);
        }
    }
}

TEST_CASE("classify: no deaths when P_die is zero, stable recovered without reinfection") {
    const auto spec = make_function(FunctionId::F1, 4);
    auto params = forced_params();
    params.p_reinfected = 0.0;
    Rng rng(6);
    auto state = init_population(params, spec, rng);
    state.p_die = ChaoticMap(0.0);
    state.recovered.push_back({std::vector<double>(4, 1.0), 4.0, Status::Recovered});
    const auto recovered_before = state.recovered.front().position;
    for (int it = 0; it < 20; ++it) {
        state.log = {};
        classify_and_transition(state, params, spec, rng);
        CHECK(state.deaths.empty());
        CHECK(state.log.reinfected == 0);
        CHECK(state.recovered.front().position == recovered_before);
    }
}

TEST_CASE("classify: forced reinfection and deaths with regeneration") {
    const auto spec = make_function(FunctionId::F1, 4);
    auto params = forced_params();
    params.p_reinfected = 1.0;
    params.p_isolation = 0.0;
    Rng rng(12);
    auto state = init_population(params, spec, rng);
    state.death_rate = ChaoticMap(kChaosFloor);  // essentially nobody recovers
    for (int i = 0; i < 3; ++i) state.recovered.push_back({std::vector<double>(4, 2.0), 16.0, Status::Recovered});
    state.p_die = ChaoticMap(0.5);
    state.infected.front().fitness = 0.25;  // below P_die: dies
    const std::size_t infected_before = state.infected.size();
    classify_and_transition(state, params, spec, rng);
    CHECK(state.log.reinfected == 3);
    CHECK(state.log.died == 1);
    CHECK(state.log.regenerated == 1);
    CHECK(state.deaths.size() == 1);
    CHECK(state.deaths.front().status == Status::Dead);
    CHECK(state.recovered.size() == state.log.recovered);
    CHECK(state.infected.size() == infected_before + 3 - state.log.recovered);
}

TEST_CASE("dedupe") {
    auto ind = [](std::vector<double> x) { return Individual{std::move(x), 1.0, Status::Infected}; };
    CHECK(dedupe({ind({1.0, 2.0}), ind({1.0, 2.0})}, 1e-9).size() == 1);
    const double eps = 1e-3;
    const auto kept = dedupe({ind({0.0, 0.0}), ind({2 * eps, 0.0})}, eps);
    CHECK(kept.size() == 2);
    CHECK(kept[1].position[0] == 2 * eps);
    CHECK(dedupe({}, eps).empty());
    const auto order = dedupe({ind({5.0}), ind({1.0}), ind({5.0}), ind({3.0})}, 0.0);
    REQUIRE(order.size() == 3);
    CHECK(order[0].position[0] == 5.0);
    CHECK(order[1].position[0] == 1.0);
    CHECK(order[2].position[0] == 3.0);
}

TEST_CASE("termination rules") {
    auto params = preset_table_two();
    params.max_iter = 10;
    PopulationState state;
    state.infected.push_back({{0.0}, 1.0, Status::Infected});
    CHECK_FALSE(should_terminate(state, params).has_value());
    state.iteration = 10;
    CHECK(should_terminate(state, params) == Termination::BudgetExhausted);
    state.iteration = 0;
    state.evals = params.max_evals;
    CHECK(should_terminate(state, params) == Termination::BudgetExhausted);
    state.evals = 0;
    state.stagnation_counter = params.stagnation_k;
    CHECK(should_terminate(state, params) == Termination::Stagnation);
    state.stagnation_counter = 0;
    state.infected.clear();
    CHECK(should_terminate(state, params) == Termination::PopulationExtinct);
    state.recovered.push_back({{0.0}, 1.0, Status::Recovered});
    CHECK_FALSE(should_terminate(state, params).has_value());
    params.p_reinfected = 0.0;
    CHECK(should_terminate(state, params) == Termination::PopulationExtinct);
}

TEST_CASE("run with no iterations returns the screened initial elite") {
    const auto spec = make_function(FunctionId::F1, 10);
    auto params = preset_table_two();
    params.max_iter = 0;
    const auto r = run(spec, params, 5);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.evals == 20);
    Rng rng(5);
    const auto state = init_population(params, spec, rng);
    CHECK(r.best_error == *state.best.fitness);
    CHECK(r.best_position == state.best.position);
}

TEST_CASE("run is deterministic per seed") {
    const auto spec = make_function(FunctionId::F7, 10);
    auto params = preset_table_two();
    params.max_evals = 5000;
    const auto a = run(spec, params, 77);
    const auto b = run(spec, params, 77);
    CHECK(same_outcome(a, b));
    const auto c = run(spec, params, 78);
    CHECK_FALSE(same_outcome(a, c));
}

TEST_CASE("run invariants: bounds, elitism, budget, conservation, deaths") {
    for (auto id : {FunctionId::F1, FunctionId::F5, FunctionId::F9, FunctionId::F12}) {
        auto inst = instrument(make_function(id, 10));
        for (const auto& base : {preset_table_two(), preset_table_one()}) {
            auto params = base;
            params.max_evals = 8000;
            std::size_t prev_total = 0;
            std::size_t prev_deaths = 0;
            bool first = true;
            bool conserved = true;
            bool deaths_monotone = true;
            bool capped = true;
            const auto r = run(inst.spec, params, 3, [&](const PopulationState& s) {
                if (!first) {
                    const auto& l = s.log;
                    const std::size_t expected =
                        prev_total + l.zero_patients + l.spread_accepted + l.regenerated - l.deduped - l.culled;
                    conserved = conserved && s.total() == expected;
                    deaths_monotone = deaths_monotone && s.deaths.size() >= prev_deaths;
                    capped = capped && s.infected.size() <= params.population;
                }
                first = false;
                prev_total = s.total();
                prev_deaths = s.deaths.size();
            });
            INFO(function_name(id));
            CHECK(*inst.out_of_bounds == 0);
            CHECK(conserved);
            CHECK(deaths_monotone);
            CHECK(capped);
            CHECK(r.evals <= params.max_evals);
            CHECK(r.trace.back().best_error == r.best_error);
            for (std::size_t i = 1; i < r.trace.size(); ++i) {
                CHECK(r.trace[i].best_error <= r.trace[i - 1].best_error);
                CHECK(r.trace[i].evals >= r.trace[i - 1].evals);
            }
            CHECK(r.best_error == *inst.min_seen);
            *inst.min_seen = INFINITY;
            *inst.out_of_bounds = 0;
        }
    }
}

TEST_CASE("run improves on its initial elite (F1, D=30, 1000 iterations)") {
    const auto spec = make_function(FunctionId::F1, 30);
    auto params = preset_table_two();
    params.max_iter = 1000;
    const auto r = run(spec, params, 11);
    CHECK(r.best_error <= r.trace.front().best_error);
    CHECK(r.best_error < 1e-6);
}

TEST_CASE("non-finite objective values are discarded") {
    ObjectiveSpec spec;
    spec.name = "holes";
    spec.dimension = 3;
    spec.lower = -1.0;
    spec.upper = 1.0;
    spec.evaluator = [](std::span<const double> x, Rng&) {
        return x[0] > 0.5 ? NAN : x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    };
    auto params = preset_table_two();
    params.max_evals = 3000;
    const auto r = run(spec, params, 1);
    CHECK(std::isfinite(r.best_error));
    CHECK(r.nonfinite_discards > 0);
    CHECK(r.best_position[0] <= 0.5);
}
