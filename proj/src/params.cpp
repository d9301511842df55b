#include "covo/params.hpp"

#include <cmath>
#include <stdexcept>

namespace covo {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("CovoParams: ") + what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void read_range(const nlohmann::json& j, RateRange& r) {
    if (j.is_number()) {
        r.lo = r.hi = j.get<double>();
    } else if (j.is_array() && j.size() == 2) {
        r.lo = j[0].get<double>();
        r.hi = j[1].get<double>();
    } else {
        throw std::invalid_argument("rate range must be a number or [lo, hi]");
    }
}

}  // namespace

void CovoParams::validate() const {
    require(population >= 2, "population must be >= 2");
    require(std::isfinite(lower) && std::isfinite(upper) && lower < upper, "require lower < upper");
    require(delta > 0.0, "delta must be > 0");
    require(threshold > 0.0, "threshold must be > 0");
    require(is_probability(p_travel) && is_probability(p_die) && is_probability(death_rate) &&
                is_probability(p_spreader) && is_probability(p_reinfected) &&
                is_probability(p_isolation),
            "probabilities must lie in [0, 1]");
    require(spreading_rate.lo <= spreading_rate.hi && spreading_rate.lo >= 0.0 && spreading_rate.hi <= 0.5,
            "spreading rate range must lie in [0, 0.5]");
    require(super_spreading_rate.lo <= super_spreading_rate.hi && super_spreading_rate.lo >= 0.5 &&
                super_spreading_rate.hi <= 1.0,
            "super-spreading rate range must lie in [0.5, 1]");
    require(super_contacts >= 1, "super_contacts must be >= 1");
    require(stagnation_k >= 1, "stagnation_k must be >= 1");
    require(dedupe_eps >= 0.0, "dedupe_eps must be >= 0");
    require(std::isfinite(map_b) && std::isfinite(map_p), "map constants must be finite");
}

CovoParams preset_table_one() {
    CovoParams p;
    p.spreading_rate = {0.0, 0.5};
    p.super_spreading_rate = {0.5, 1.0};
    p.p_travel = 0.5;
    p.p_die = 0.43597;
    p.death_rate = 0.13955;
    p.social_distance = 13.77323;
    p.threshold = 0.5;
    p.lower = -10.0;
    p.upper = 10.0;
    p.delta = 0.97248;
    return p;
}

CovoParams preset_table_two() { return CovoParams{}; }

CovoParams preset_by_name(std::string_view name) {
    if (name == "tableI") return preset_table_one();
    if (name == "tableII") return preset_table_two();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected tableI or tableII)");
}

void apply_overrides(CovoParams& p, const nlohmann::json& overrides) {
    if (!overrides.is_object()) throw std::invalid_argument("overrides must be a JSON object");
    for (const auto& [key, value] : overrides.items()) {
        if (key == "population") p.population = value.get<std::size_t>();
        else if (key == "spreading_rate") read_range(value, p.spreading_rate);
        else if (key == "super_spreading_rate") read_range(value, p.super_spreading_rate);
        else if (key == "p_travel") p.p_travel = value.get<double>();
        else if (key == "p_die") p.p_die = value.get<double>();
        else if (key == "death_rate") p.death_rate = value.get<double>();
        else if (key == "delta") p.delta = value.get<double>();
        else if (key == "social_distance") p.social_distance = value.get<double>();
        else if (key == "threshold") p.threshold = value.get<double>();
        else if (key == "lower") p.lower = value.get<double>();
        else if (key == "upper") p.upper = value.get<double>();
        else if (key == "p_spreader") p.p_spreader = value.get<double>();
        else if (key == "super_contacts") p.super_contacts = value.get<std::size_t>();
        else if (key == "p_reinfected") p.p_reinfected = value.get<double>();
        else if (key == "p_isolation") p.p_isolation = value.get<double>();
        else if (key == "travel_rate") p.travel_rate = value.get<double>();
        else if (key == "max_iter") p.max_iter = value.get<std::uint64_t>();
        else if (key == "max_evals") p.max_evals = value.get<std::uint64_t>();
        else if (key == "stagnation_k") p.stagnation_k = value.get<std::uint64_t>();
        else if (key == "dedupe_eps") p.dedupe_eps = value.get<double>();
        else if (key == "map_b") p.map_b = value.get<double>();
        else if (key == "map_p") p.map_p = value.get<double>();
        else throw std::invalid_argument("unknown COVO parameter '" + key + "'");
    }
}

nlohmann::json to_json(const CovoParams& p) {
    return {
        {"population", p.population},
        {"spreading_rate", {p.spreading_rate.lo, p.spreading_rate.hi}},
        {"super_spreading_rate", {p.super_spreading_rate.lo, p.super_spreading_rate.hi}},
        {"p_travel", p.p_travel},
        {"p_die", p.p_die},
        {"death_rate", p.death_rate},
        {"delta", p.delta},
        {"social_distance", p.social_distance},
        {"threshold", p.threshold},
        {"lower", p.lower},
        {"upper", p.upper},
        {"p_spreader", p.p_spreader},
        {"super_contacts", p.super_contacts},
        {"p_reinfected", p.p_reinfected},
        {"p_isolation", p.p_isolation},
        {"travel_rate", p.travel_rate},
        {"max_iter", p.max_iter},
        {"max_evals", p.max_evals},
        {"stagnation_k", p.stagnation_k},
        {"dedupe_eps", p.dedupe_eps},
        {"map_b", p.map_b},
        {"map_p", p.map_p},
    };
}

}  // namespace covo
