#include "covo/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace covo {
namespace {

constexpr double kPi = std::numbers::pi;

double sq(double v) { return v * v; }

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double schwefel_2_22(std::span<const double> x) {
    double sum = 0.0;
    double prod = 1.0;
    for (double v : x) {
        sum += std::fabs(v);
        prod *= std::fabs(v);
    }
    return sum + prod;
}

double schwefel_1_2(std::span<const double> x) {
    double total = 0.0;
    double prefix = 0.0;
    for (double v : x) {
        prefix += v;
        total += prefix * prefix;
    }
    return total;
}

double schwefel_2_21(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        s += 100.0 * sq(x[i + 1] - x[i] * x[i]) + sq(x[i] - 1.0);
    }
    return s;
}

double step(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += sq(std::floor(v + 0.5));
    return s;
}

double quartic(std::span<const double> x, double noise) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += static_cast<double>(i + 1) * sq(sq(x[i]));
    }
    return s + noise;
}

double schwefel_2_26(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * std::sin(std::sqrt(std::fabs(v)));
    return 418.9829 * static_cast<double>(x.size()) - s;
}

double rastrigin(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * kPi * v) + 10.0;
    return s;
}

double ackley(std::span<const double> x) {
    const double d = static_cast<double>(x.size());
    double sum_sq = 0.0;
    double sum_cos = 0.0;
    for (double v : x) {
        sum_sq += v * v;
        sum_cos += std::cos(2.0 * kPi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / d)) - std::exp(sum_cos / d) + 20.0 +
           std::numbers::e;
}

double griewank(std::span<const double> x) {
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i];
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum / 4000.0 - prod + 1.0;
}

double penalized_1(std::span<const double> x) {
    const std::size_t n = x.size();
    auto y = [&](std::size_t i) { return 1.0 + 0.25 * (x[i] + 1.0); };
    double inner = 10.0 * sq(std::sin(kPi * y(0)));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        inner += sq(y(i) - 1.0) * (1.0 + 10.0 * sq(std::sin(kPi * y(i + 1))));
    }
    inner += sq(y(n - 1) - 1.0);
    double pen = 0.0;
    for (double v : x) pen += penalty_u(v, {10.0, 100.0, 4.0});
    return kPi / static_cast<double>(n) * inner + pen;
}

double penalized_2(std::span<const double> x) {
    const std::size_t n = x.size();
    double inner = sq(std::sin(3.0 * kPi * x[0]));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        inner += sq(x[i] - 1.0) * (1.0 + sq(std::sin(3.0 * kPi * x[i + 1])));
    }
    inner += sq(x[n - 1] - 1.0) * (1.0 + sq(std::sin(2.0 * kPi * x[n - 1])));
    double pen = 0.0;
    for (double v : x) pen += penalty_u(v, {5.0, 100.0, 4.0});
    return 0.1 * inner + pen;
}

struct SuiteRow {
    FunctionId id;
    double lower;
    double upper;
    double optimizer_coord;
    Modality modality;
};

constexpr std::array<SuiteRow, 13> kSuite{{
    {FunctionId::F1, -100.0, 100.0, 0.0, Modality::Unimodal},
    {FunctionId::F2, -10.0, 10.0, 0.0, Modality::Unimodal},
    {FunctionId::F3, -100.0, 100.0, 0.0, Modality::Unimodal},
    {FunctionId::F4, -100.0, 100.0, 0.0, Modality::Unimodal},
    {FunctionId::F5, -30.0, 30.0, 1.0, Modality::Unimodal},
    {FunctionId::F6, -100.0, 100.0, 0.0, Modality::Step},
    {FunctionId::F7, -1.28, 1.28, 0.0, Modality::Noisy},
    {FunctionId::F8, -500.0, 500.0, 420.9687, Modality::Multimodal},
    {FunctionId::F9, -5.12, 5.12, 0.0, Modality::Multimodal},
    {FunctionId::F10, -32.0, 32.0, 0.0, Modality::Multimodal},
    {FunctionId::F11, -600.0, 600.0, 0.0, Modality::Multimodal},
    {FunctionId::F12, -50.0, 50.0, -1.0, Modality::Multimodal},
    {FunctionId::F13, -50.0, 50.0, 1.0, Modality::Multimodal},
}};

}  // namespace

bool ObjectiveSpec::in_bounds(std::span<const double> x) const {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v >= lower && v <= upper; });
}

double penalty_u(double x, const PenaltyParams& p) {
    if (x > p.a) return p.k * std::pow(x - p.a, p.m);
    if (x < -p.a) return p.k * std::pow(-x - p.a, p.m);
    return 0.0;
}

double suite_value(FunctionId id, std::span<const double> x, double noise) {
    switch (id) {
        case FunctionId::F1: return sphere(x);
        case FunctionId::F2: return schwefel_2_22(x);
        case FunctionId::F3: return schwefel_1_2(x);
        case FunctionId::F4: return schwefel_2_21(x);
        case FunctionId::F5: return rosenbrock(x);
        case FunctionId::F6: return step(x);
        case FunctionId::F7: return quartic(x, noise);
        case FunctionId::F8: return schwefel_2_26(x);
        case FunctionId::F9: return rastrigin(x);
        case FunctionId::F10: return ackley(x);
        case FunctionId::F11: return griewank(x);
        case FunctionId::F12: return penalized_1(x);
        case FunctionId::F13: return penalized_2(x);
        case FunctionId::Custom: break;
    }
    throw std::invalid_argument("suite_value: not a suite function");
}

double evaluate(const ObjectiveSpec& spec, std::span<const double> x, Rng& rng) {
    if (x.size() != spec.dimension) throw std::invalid_argument("evaluate: dimension mismatch");
    if (!spec.in_bounds(x)) throw std::invalid_argument("evaluate: component out of bounds");
    return spec.evaluator(x, rng);
}

ObjectiveSpec make_function(FunctionId id, std::size_t dimension) {
    if (dimension < 2) throw std::invalid_argument("make_function: dimension must be >= 2");
    const auto it = std::find_if(kSuite.begin(), kSuite.end(), [&](const SuiteRow& r) { return r.id == id; });
    if (it == kSuite.end()) throw std::invalid_argument("make_function: unknown suite id");

    ObjectiveSpec spec;
    spec.id = id;
    spec.name = std::string(function_name(id));
    spec.dimension = dimension;
    spec.lower = it->lower;
    spec.upper = it->upper;
    spec.modality = it->modality;
    spec.optimizer = std::vector<double>(dimension, it->optimizer_coord);
    if (id == FunctionId::F7) {
        spec.evaluator = [](std::span<const double> x, Rng& rng) {
            return suite_value(FunctionId::F7, x, rng.uniform01());
        };
    } else {
        spec.evaluator = [id](std::span<const double> x, Rng&) { return suite_value(id, x); };
    }
    // F8's minimiser 420.9687 is rounded; its value there is the reference.
    spec.optimum_value = id == FunctionId::F8 ? suite_value(id, *spec.optimizer) : 0.0;
    return spec;
}

std::vector<ObjectiveSpec> make_suite(std::size_t dimension) {
    std::vector<ObjectiveSpec> suite;
    suite.reserve(kSuite.size());
    for (const auto& row : kSuite) suite.push_back(make_function(row.id, dimension));
    return suite;
}

std::string_view function_name(FunctionId id) {
    static constexpr std::array<std::string_view, 14> names{
        "", "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10", "F11", "F12", "F13"};
    const auto i = static_cast<std::size_t>(id);
    return i < names.size() ? names[i] : std::string_view{"custom"};
}

std::optional<FunctionId> parse_function_id(std::string_view name) {
    std::string upper(name);
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (int i = 1; i <= 13; ++i) {
        if (upper == function_name(static_cast<FunctionId>(i))) return static_cast<FunctionId>(i);
    }
    return std::nullopt;
}

}  // namespace covo
