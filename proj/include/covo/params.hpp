#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace covo {

/// Closed interval a rate is drawn from; lo == hi pins the rate.
struct RateRange {
    double lo;
    double hi;
};

struct CovoParams {
    std::size_t population = 10;
    RateRange spreading_rate{0.3575, 0.3575};
    RateRange super_spreading_rate{0.80138, 0.80138};
    double p_travel = 0.0;
    double p_die = 1.0;
    double death_rate = 0.888557;
    double delta = 0.41466;
    double social_distance = 0.87306;
    double threshold = 0.5;
    double lower = -100.0;
    double upper = 100.0;
    double p_spreader = 0.5;
    std::size_t super_contacts = 15;
    double p_reinfected = 0.1;
    double p_isolation = 0.5;
    // Named travelling rate; carried for completeness, not used by any update.
    double travel_rate = 0.0;
    std::uint64_t max_iter = 1'000'000;
    std::uint64_t max_evals = 100'000;
    std::uint64_t stagnation_k = 50;
    double dedupe_eps = 1e-9;
    double map_b = 0.5;
    double map_p = 6.283185307179586;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

/// Preset with the first published parameter table (bounds [-10, 10]).
CovoParams preset_table_one();
/// Preset with the initial-values table (N = 10, bounds [-100, 100]); the default.
CovoParams preset_table_two();
/// "tableI" or "tableII"; throws std::invalid_argument otherwise.
CovoParams preset_by_name(std::string_view name);

/// Applies every recognised key of `overrides` onto `params`.
/// Unknown keys throw std::invalid_argument.
void apply_overrides(CovoParams& params, const nlohmann::json& overrides);
nlohmann::json to_json(const CovoParams& params);

}  // namespace covo
