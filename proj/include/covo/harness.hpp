#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "covo/baselines.hpp"
#include "covo/benchmarks.hpp"
#include "covo/csv.hpp"
#include "covo/params.hpp"
#include "covo/run_result.hpp"
#include "covo/stats.hpp"
#include "covo/svg.hpp"
#include "json.hpp"

namespace covo::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;

inline constexpr std::string_view kTraceHeader =
    "run_id,seed,algorithm,function,iteration,evals,best_error,elapsed_ms";
inline constexpr std::string_view kSummaryHeader = "function,algorithm,runs,best,median,worst,mean,std";
inline constexpr std::string_view kTimingHeader = "run_id,seed,algorithm,function,evals,termination,wall_ms";
inline constexpr std::string_view kStatsHeader = "test,algorithm_a,algorithm_b,statistic,p_value";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Algorithm { Covo, RandomSearch, Pso };

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct ExperimentConfig {
    std::vector<FunctionId> functions;
    std::size_t dimension = 30;
    std::vector<Algorithm> algorithms{Algorithm::Covo, Algorithm::RandomSearch, Algorithm::Pso};
    std::string preset = "tableII";
    nlohmann::json overrides = nlohmann::json::object();
    std::vector<std::uint64_t> seeds;
    std::uint64_t budget = 100'000;
    BaselineParams pso;
    std::filesystem::path out = "results";
    // Write measured elapsed_ms into the trace (makes it non-reproducible).
    bool timing = false;

    /// COVO parameters: preset, then overrides, with the budget as max_evals.
    CovoParams covo_params() const;
    /// Throws ConfigError.
    void validate() const;
};

/// All 13 functions, three algorithms, tableII, D = 30, seeds 1..21, 1e5 evaluations.
ExperimentConfig default_config();

/// Applies the keys of a JSON config document. Throws ConfigError.
void apply_config_json(ExperimentConfig& config, const nlohmann::json& doc);

/// "21" -> count from `base`; "100:21" -> base 100, count 21; "3,5,8" -> list.
std::vector<std::uint64_t> parse_seeds(std::string_view text, std::uint64_t base);

/// "F1,F9" or "all".
std::vector<FunctionId> parse_functions(const std::vector<std::string>& names);
std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names);

struct Cell {
    FunctionId function;
    Algorithm algorithm;
    std::uint64_t seed;
    RunResult result;

    std::string run_id() const;
};

/// Worker count from COVO_THREADS, else hardware concurrency (at least 1).
std::size_t thread_count_from_env();

/// Runs every function x algorithm x seed cell. The returned order is fixed
/// by the config, independent of scheduling.
std::vector<Cell> run_cells(const ExperimentConfig& config, std::size_t threads);

std::string trace_csv(const std::vector<Cell>& cells, bool with_timing);
std::string summary_csv(const std::vector<Cell>& cells);
std::string timing_csv(const std::vector<Cell>& cells);

/// Final best_error per function -> algorithm -> run key.
using FinalErrors = std::map<std::string, std::map<std::string, std::map<std::string, double>>>;

/// Accepts a trace CSV (last row per run_id) or a summary CSV (the mean column).
void collect_final_errors(const csv::Table& table, FinalErrors& into);

struct StatRow {
    stats::TestKind test;
    std::string algorithm_a;
    std::string algorithm_b;
    double statistic;
    double p_value;
};

/// Friedman across algorithms (blocks = functions, or runs when only one
/// function is present), then pairwise Wilcoxon and Welch t-tests over
/// matched (function, run) cells. Throws ConfigError when the input cannot
/// support the tests.
std::vector<StatRow> compare_algorithms(const FinalErrors& errors);
std::string stats_csv(const std::vector<StatRow>& rows);

/// One chart per function; one series per algorithm (median over runs of
/// best_error at each iteration, runs held at their last value once done).
std::vector<svg::Chart> convergence_charts(const csv::Table& trace);

int cmd_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covo::harness
