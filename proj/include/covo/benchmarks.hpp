#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covo/rng.hpp"

namespace covo {

enum class FunctionId { F1 = 1, F2, F3, F4, F5, F6, F7, F8, F9, F10, F11, F12, F13, Custom };

enum class Modality { Unimodal, Multimodal, Step, Noisy };

/// Raw objective value at x. The Rng is only consumed by noisy objectives.
using Evaluator = std::function<double(std::span<const double>, Rng&)>;

/// One objective to minimise over the box [lower, upper]^dimension.
struct ObjectiveSpec {
    FunctionId id = FunctionId::Custom;
    std::string name;
    std::size_t dimension = 0;
    double lower = 0.0;
    double upper = 0.0;
    double optimum_value = 0.0;
    std::optional<std::vector<double>> optimizer;
    Modality modality = Modality::Multimodal;
    Evaluator evaluator;

    bool in_bounds(std::span<const double> x) const;
};

struct PenaltyParams {
    double a;
    double k;
    double m;
};

/// Penalty term shared by the two penalised functions (F12, F13).
double penalty_u(double x, const PenaltyParams& p);

/// Raw evaluation of a suite function; no bounds check. `noise` is the
/// additive uniform draw used by F7 and ignored by the other functions.
double suite_value(FunctionId id, std::span<const double> x, double noise = 0.0);

/// Checked evaluation: throws std::invalid_argument on a dimension mismatch
/// or an out-of-bounds component.
double evaluate(const ObjectiveSpec& spec, std::span<const double> x, Rng& rng);

/// Error relative to the known optimum: f - f*.
inline double error_of(const ObjectiveSpec& spec, double f) { return f - spec.optimum_value; }

ObjectiveSpec make_function(FunctionId id, std::size_t dimension);

/// F1..F13 at the given dimension (dimension >= 2).
std::vector<ObjectiveSpec> make_suite(std::size_t dimension);

std::string_view function_name(FunctionId id);
std::optional<FunctionId> parse_function_id(std::string_view name);

}  // namespace covo
