#include "covo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "covo/covo.hpp"
#include "covo/ecg.hpp"

namespace covo::harness {
namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::uint64_t parse_u64(std::string_view text, const char* what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(std::string("invalid ") + what + ": '" + std::string(text) + "'");
    }
    return v;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw csv::IoError("cannot create output directory '" + dir.string() + "'");
    }
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Covo: return "covo";
        case Algorithm::RandomSearch: return "random_search";
        case Algorithm::Pso: return "pso";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (auto a : {Algorithm::Covo, Algorithm::RandomSearch, Algorithm::Pso}) {
        if (name == algorithm_name(a)) return a;
    }
    return std::nullopt;
}

CovoParams ExperimentConfig::covo_params() const {
    CovoParams p = preset_by_name(preset);
    apply_overrides(p, overrides);
    p.max_evals = budget;
    return p;
}

void ExperimentConfig::validate() const {
    if (functions.empty()) throw ConfigError("config: at least one function is required");
    if (algorithms.empty()) throw ConfigError("config: at least one algorithm is required");
    if (seeds.empty()) throw ConfigError("config: at least one seed is required");
    if (dimension < 2) throw ConfigError("config: dim must be >= 2");
    CovoParams p;
    try {
        p = covo_params();
        p.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (auto a : algorithms) {
        const std::size_t population = a == Algorithm::Covo ? p.population : a == Algorithm::Pso ? pso.population : 1;
        if (budget < population) {
            throw ConfigError("config: budget " + std::to_string(budget) + " is below the " +
                              std::string(algorithm_name(a)) + " population " + std::to_string(population));
        }
    }
}

ExperimentConfig default_config() {
    ExperimentConfig c;
    for (int i = 1; i <= 13; ++i) c.functions.push_back(static_cast<FunctionId>(i));
    for (std::uint64_t s = 1; s <= 21; ++s) c.seeds.push_back(s);
    return c;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text, std::uint64_t base) {
    std::vector<std::uint64_t> seeds;
    if (text.find(',') != std::string_view::npos) {
        for (const auto& part : csv::split(text)) seeds.push_back(parse_u64(part, "seed"));
        return seeds;
    }
    std::uint64_t count = 0;
    if (const auto colon = text.find(':'); colon != std::string_view::npos) {
        base = parse_u64(text.substr(0, colon), "seed base");
        count = parse_u64(text.substr(colon + 1), "seed count");
    } else {
        count = parse_u64(text, "seed count");
    }
    if (count == 0) throw ConfigError("seed count must be >= 1");
    for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(base + i);
    return seeds;
}

std::vector<FunctionId> parse_functions(const std::vector<std::string>& names) {
    std::vector<FunctionId> ids;
    for (const auto& name : names) {
        if (name == "all") {
            for (int i = 1; i <= 13; ++i) ids.push_back(static_cast<FunctionId>(i));
            continue;
        }
        const auto id = parse_function_id(name);
        if (!id) throw ConfigError("unknown function '" + name + "' (expected F1..F13 or all)");
        if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
    }
    return ids;
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<Algorithm> algos;
    for (const auto& name : names) {
        const auto a = parse_algorithm(name);
        if (!a) throw ConfigError("unknown algorithm '" + name + "' (expected covo, random_search or pso)");
        if (std::find(algos.begin(), algos.end(), *a) == algos.end()) algos.push_back(*a);
    }
    return algos;
}

void apply_config_json(ExperimentConfig& c, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "functions") {
                c.functions = value.is_string() ? parse_functions({value.get<std::string>()})
                                                : parse_functions(value.get<std::vector<std::string>>());
            } else if (key == "dim") {
                c.dimension = value.get<std::size_t>();
            } else if (key == "algorithms") {
                c.algorithms = parse_algorithms(value.get<std::vector<std::string>>());
            } else if (key == "preset") {
                c.preset = value.get<std::string>();
            } else if (key == "overrides") {
                c.overrides = value;
            } else if (key == "seeds") {
                if (value.is_array()) {
                    c.seeds = value.get<std::vector<std::uint64_t>>();
                } else if (value.is_object()) {
                    const auto base = value.value("base", std::uint64_t{1});
                    const auto count = value.at("count").get<std::uint64_t>();
                    c.seeds.clear();
                    for (std::uint64_t i = 0; i < count; ++i) c.seeds.push_back(base + i);
                } else {
                    c.seeds = parse_seeds(value.get<std::string>(), 1);
                }
            } else if (key == "budget") {
                c.budget = value.get<std::uint64_t>();
            } else if (key == "out") {
                c.out = value.get<std::string>();
            } else if (key == "timing") {
                c.timing = value.get<bool>();
            } else if (key == "pso") {
                c.pso.population = value.value("population", c.pso.population);
                c.pso.inertia = value.value("inertia", c.pso.inertia);
                c.pso.cognitive = value.value("cognitive", c.pso.cognitive);
                c.pso.social = value.value("social", c.pso.social);
            } else {
                throw ConfigError("config: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string Cell::run_id() const {
    return std::string(function_name(function)) + "-" + std::string(algorithm_name(algorithm)) + "-" +
           std::to_string(seed);
}

std::size_t thread_count_from_env() {
    if (const char* env = std::getenv("COVO_THREADS")) {
        try {
            const auto v = parse_u64(env, "COVO_THREADS");
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const ConfigError&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Cell> run_cells(const ExperimentConfig& config, std::size_t threads) {
    config.validate();
    const CovoParams covo = config.covo_params();
    BaselineParams pso_params = config.pso;
    pso_params.id = BaselineId::Pso;
    pso_params.budget = config.budget;

    std::vector<ObjectiveSpec> specs;
    for (auto f : config.functions) specs.push_back(make_function(f, config.dimension));

    std::vector<Cell> cells;
    std::vector<std::size_t> spec_of;
    for (std::size_t fi = 0; fi < specs.size(); ++fi) {
        for (auto a : config.algorithms) {
            for (auto s : config.seeds) {
                cells.push_back({config.functions[fi], a, s, {}});
                spec_of.push_back(fi);
            }
        }
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            Cell& cell = cells[i];
            const ObjectiveSpec& spec = specs[spec_of[i]];
            switch (cell.algorithm) {
                case Algorithm::Covo: cell.result = run(spec, covo, cell.seed); break;
                case Algorithm::RandomSearch: cell.result = random_search(spec, config.budget, cell.seed); break;
                case Algorithm::Pso: cell.result = pso(spec, pso_params, cell.seed); break;
            }
        }
    };
    const std::size_t n = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, cells.size()));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    return cells;
}

std::string trace_csv(const std::vector<Cell>& cells, bool with_timing) {
    std::ostringstream out;
    out << kTraceHeader << '\n';
    for (const auto& cell : cells) {
        const std::string id = cell.run_id();
        const auto fn = function_name(cell.function);
        const auto algo = algorithm_name(cell.algorithm);
        for (const auto& e : cell.result.trace) {
            out << id << ',' << cell.seed << ',' << algo << ',' << fn << ',' << e.iteration << ',' << e.evals << ','
                << csv::format_real(e.best_error) << ',' << csv::format_real(with_timing ? e.elapsed_ms : 0.0)
                << '\n';
        }
    }
    return out.str();
}

std::string summary_csv(const std::vector<Cell>& cells) {
    // Keyed in first-appearance order.
    std::vector<std::pair<std::string, std::string>> keys;
    std::map<std::pair<std::string, std::string>, std::vector<double>> finals;
    for (const auto& cell : cells) {
        std::pair<std::string, std::string> key{std::string(function_name(cell.function)),
                                                std::string(algorithm_name(cell.algorithm))};
        if (!finals.count(key)) keys.push_back(key);
        finals[key].push_back(cell.result.best_error);
    }
    std::ostringstream out;
    out << kSummaryHeader << '\n';
    for (const auto& key : keys) {
        const auto& values = finals[key];
        const auto s = stats::describe(values);
        out << key.first << ',' << key.second << ',' << values.size() << ',' << csv::format_real(s.best) << ','
            << csv::format_real(s.median) << ',' << csv::format_real(s.worst) << ',' << csv::format_real(s.mean)
            << ',' << csv::format_real(s.std) << '\n';
    }
    return out.str();
}

std::string timing_csv(const std::vector<Cell>& cells) {
    std::ostringstream out;
    out << kTimingHeader << '\n';
    for (const auto& cell : cells) {
        out << cell.run_id() << ',' << cell.seed << ',' << algorithm_name(cell.algorithm) << ','
            << function_name(cell.function) << ',' << cell.result.evals << ','
            << termination_name(cell.result.termination) << ',' << csv::format_real(cell.result.wall_ms) << '\n';
    }
    return out.str();
}

void collect_final_errors(const csv::Table& table, FinalErrors& into) {
    if (table.column("run_id")) {
        const auto c_run = table.require_column("run_id");
        const auto c_algo = table.require_column("algorithm");
        const auto c_fn = table.require_column("function");
        const auto c_iter = table.require_column("iteration");
        const auto c_err = table.require_column("best_error");
        std::map<std::string, std::pair<std::uint64_t, std::size_t>> last_row;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            const auto iter = csv::parse_uint(row[c_iter], table.row_lines[r]);
            csv::parse_real(row[c_err], table.row_lines[r]);
            auto [it, inserted] = last_row.try_emplace(row[c_run], iter, r);
            if (!inserted && iter >= it->second.first) it->second = {iter, r};
        }
        for (const auto& [run_id, entry] : last_row) {
            const auto& row = table.rows[entry.second];
            into[row[c_fn]][row[c_algo]][run_id.substr(run_id.rfind('-') + 1)] =
                csv::parse_real(row[c_err], table.row_lines[entry.second]);
        }
        return;
    }
    if (table.column("mean")) {
        const auto c_algo = table.require_column("algorithm");
        const auto c_fn = table.require_column("function");
        const auto c_mean = table.require_column("mean");
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            into[row[c_fn]][row[c_algo]]["mean"] = csv::parse_real(row[c_mean], table.row_lines[r]);
        }
        return;
    }
    throw csv::FormatError(1, "neither a trace (run_id column) nor a summary (mean column) CSV");
}

std::vector<StatRow> compare_algorithms(const FinalErrors& errors) {
    std::set<std::string> algo_set;
    for (const auto& [fn, by_algo] : errors) {
        for (const auto& [algo, runs] : by_algo) algo_set.insert(algo);
    }
    const std::vector<std::string> algos(algo_set.begin(), algo_set.end());
    if (algos.size() < 2) throw ConfigError("stats: need results for at least 2 algorithms");

    // Friedman blocks.
    std::vector<std::vector<double>> matrix;
    std::vector<std::string> complete;
    for (const auto& [fn, by_algo] : errors) {
        if (by_algo.size() == algos.size()) complete.push_back(fn);
    }
    if (complete.size() >= 2) {
        for (const auto& fn : complete) {
            std::vector<double> row;
            for (const auto& a : algos) {
                double sum = 0.0;
                for (const auto& [key, v] : errors.at(fn).at(a)) sum += v;
                row.push_back(sum / static_cast<double>(errors.at(fn).at(a).size()));
            }
            matrix.push_back(std::move(row));
        }
    } else if (complete.size() == 1) {
        const auto& by_algo = errors.at(complete.front());
        for (const auto& [key, v] : by_algo.at(algos.front())) {
            std::vector<double> row;
            for (const auto& a : algos) {
                const auto it = by_algo.at(a).find(key);
                if (it == by_algo.at(a).end()) break;
                row.push_back(it->second);
            }
            if (row.size() == algos.size()) matrix.push_back(std::move(row));
        }
    }
    if (matrix.size() < 2) throw ConfigError("stats: need at least 2 complete blocks for the Friedman test");

    std::vector<StatRow> rows;
    const auto fr = stats::friedman(matrix);
    rows.push_back({stats::TestKind::Friedman, join(algos, ';'), "-", fr.statistic, fr.p_value});

    std::vector<StatRow> wilcoxon_rows;
    std::vector<StatRow> t_rows;
    for (std::size_t i = 0; i < algos.size(); ++i) {
        for (std::size_t j = i + 1; j < algos.size(); ++j) {
            std::vector<double> a;
            std::vector<double> b;
            for (const auto& [fn, by_algo] : errors) {
                const auto ia = by_algo.find(algos[i]);
                const auto ib = by_algo.find(algos[j]);
                if (ia == by_algo.end() || ib == by_algo.end()) continue;
                for (const auto& [key, v] : ia->second) {
                    if (const auto it = ib->second.find(key); it != ib->second.end()) {
                        a.push_back(v);
                        b.push_back(it->second);
                    }
                }
            }
            if (a.size() < 2) {
                throw ConfigError("stats: fewer than 2 matched runs for " + algos[i] + " vs " + algos[j]);
            }
            const auto w = stats::wilcoxon_signed_rank(a, b);
            wilcoxon_rows.push_back({stats::TestKind::Wilcoxon, algos[i], algos[j], w.statistic, w.p_value});
            const auto t = stats::t_test(a, b);
            t_rows.push_back({stats::TestKind::TTest, algos[i], algos[j], t.statistic, t.p_value});
        }
    }
    rows.insert(rows.end(), wilcoxon_rows.begin(), wilcoxon_rows.end());
    rows.insert(rows.end(), t_rows.begin(), t_rows.end());
    return rows;
}

std::string stats_csv(const std::vector<StatRow>& rows) {
    std::ostringstream out;
    out << kStatsHeader << '\n';
    for (const auto& r : rows) {
        out << stats::test_name(r.test) << ',' << r.algorithm_a << ',' << r.algorithm_b << ','
            << csv::format_real(r.statistic) << ',' << csv::format_real(r.p_value) << '\n';
    }
    return out.str();
}

std::vector<svg::Chart> convergence_charts(const csv::Table& trace) {
    const auto c_run = trace.require_column("run_id");
    const auto c_algo = trace.require_column("algorithm");
    const auto c_fn = trace.require_column("function");
    const auto c_iter = trace.require_column("iteration");
    const auto c_err = trace.require_column("best_error");
    if (trace.rows.empty()) throw csv::FormatError(2, "trace has no data rows");

    // function -> algorithm -> run -> iteration -> best_error, in first-appearance order.
    std::vector<std::string> fn_order;
    std::map<std::string, std::vector<std::string>> algo_order;
    std::map<std::string, std::map<std::string, std::map<std::string, std::map<std::uint64_t, double>>>> data;
    for (std::size_t r = 0; r < trace.rows.size(); ++r) {
        const auto& row = trace.rows[r];
        const auto line = trace.row_lines[r];
        const auto& fn = row[c_fn];
        const auto& algo = row[c_algo];
        if (!data.count(fn)) fn_order.push_back(fn);
        auto& by_algo = data[fn];
        if (!by_algo.count(algo)) algo_order[fn].push_back(algo);
        by_algo[algo][row[c_run]][csv::parse_uint(row[c_iter], line)] = csv::parse_real(row[c_err], line);
    }

    std::vector<svg::Chart> charts;
    for (const auto& fn : fn_order) {
        svg::Chart chart{fn + " convergence", "iteration", "best error (median over runs)", {}};
        for (const auto& algo : algo_order[fn]) {
            const auto& runs = data[fn][algo];
            std::set<std::uint64_t> iterations;
            for (const auto& [run, series] : runs) {
                for (const auto& [it, v] : series) iterations.insert(it);
            }
            svg::Series series{algo, {}};
            for (auto it : iterations) {
                std::vector<double> values;
                for (const auto& [run, s] : runs) {
                    auto pos = s.upper_bound(it);
                    if (pos == s.begin()) continue;
                    values.push_back(std::prev(pos)->second);
                }
                if (!values.empty()) series.points.emplace_back(static_cast<double>(it), median_of(values));
            }
            chart.series.push_back(std::move(series));
        }
        charts.push_back(std::move(chart));
    }
    return charts;
}

namespace {

int run_bench(const ExperimentConfig& config, std::ostream& out) {
    const auto cells = run_cells(config, thread_count_from_env());
    ensure_directory(config.out);
    csv::write_file(config.out / "trace.csv", trace_csv(cells, config.timing));
    csv::write_file(config.out / "summary.csv", summary_csv(cells));
    csv::write_file(config.out / "timing.csv", timing_csv(cells));
    out << "bench: " << cells.size() << " runs -> " << (config.out / "trace.csv").string() << ", "
        << (config.out / "summary.csv").string() << ", " << (config.out / "timing.csv").string() << '\n';
    return kExitOk;
}

int run_stats(const std::vector<std::string>& inputs, const std::filesystem::path& out_path, std::ostream& out) {
    FinalErrors errors;
    for (const auto& path : inputs) {
        const auto table = csv::read_file(path);
        try {
            collect_final_errors(table, errors);
        } catch (const csv::FormatError& e) {
            throw csv::FormatError(e.line(), path + ": " + e.what());
        }
    }
    const auto rows = compare_algorithms(errors);
    csv::write_file(out_path, stats_csv(rows));
    out << "stats: " << rows.size() << " rows -> " << out_path.string() << '\n';
    return kExitOk;
}

int run_plot(const std::string& input, const std::filesystem::path& out_path, std::ostream& out) {
    const auto table = csv::read_file(input);
    const auto charts = convergence_charts(table);
    csv::write_file(out_path, svg::render(charts));
    out << "plot: " << charts.size() << " charts -> " << out_path.string() << '\n';
    return kExitOk;
}

struct DenoiseFlags {
    std::size_t samples = 1000;
    double sample_rate = 250.0;
    std::uint64_t seed = 1;
    std::uint64_t budget = 50'000;
    std::string preset = "tableII";
    std::vector<double> mixing{1.0, 0.6, 0.4, 1.0};
    std::string signal;
    std::filesystem::path out = "denoise";
};

int run_denoise(const DenoiseFlags& f, bool samples_given, std::ostream& out) {
    if (f.mixing.size() != 4) throw ConfigError("--mixing needs exactly 4 values");
    if (f.samples < 2) throw ConfigError("--samples must be >= 2");
    ecg::MixingModel model;
    std::copy(f.mixing.begin(), f.mixing.end(), model.mixing.begin());
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    CovoParams covo;
    try {
        covo = preset_by_name(f.preset);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    covo.max_evals = f.budget;

    ecg::DenoiseReport report;
    double dt = 1.0 / f.sample_rate;
    if (!f.signal.empty()) {
        const auto table = csv::read_file(f.signal);
        const auto c = table.require_column("value");
        ecg::Signal s;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            s.push_back(csv::parse_real(table.rows[r][c], table.row_lines[r]));
        }
        if (samples_given && f.samples < s.size()) s.resize(f.samples);
        if (s.size() < 2) throw ConfigError("signal file needs at least 2 samples");
        report = ecg::denoise_signal(s, model, covo, f.seed);
    } else {
        ecg::EcgParams ecg_params;
        ecg_params.sample_rate = f.sample_rate;
        ecg_params.duration = static_cast<double>(f.samples) / f.sample_rate;
        report = ecg::denoise_run(ecg_params, model, covo, f.seed);
    }

    ensure_directory(f.out);
    std::ostringstream signals;
    signals << "t,original,contaminated,reconstructed\n";
    for (std::size_t i = 0; i < report.original.size(); ++i) {
        signals << csv::format_real(static_cast<double>(i) * dt) << ',' << csv::format_real(report.original[i]) << ','
                << csv::format_real(report.contaminated[i]) << ',' << csv::format_real(report.reconstructed[i])
                << '\n';
    }
    std::ostringstream summary;
    summary << "sample_size,mse_o_r,mse_o_c\n"
            << report.original.size() << ',' << csv::format_real(report.mse_o_r) << ','
            << csv::format_real(report.mse_o_c) << '\n';
    csv::write_file(f.out / "signals.csv", signals.str());
    csv::write_file(f.out / "report.csv", summary.str());
    out << "denoise: samples=" << report.original.size() << " mse_o_r=" << report.mse_o_r
        << " mse_o_c=" << report.mse_o_c << " -> " << f.out.string() << '\n';
    return kExitOk;
}

}  // namespace

int cmd_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"COVO optimizer experiment driver", "covo"};
    app.require_subcommand(1);

    ExperimentConfig bench_defaults = default_config();
    std::vector<std::string> fn_names;
    std::vector<std::string> algo_names;
    std::size_t dim = 0;
    std::string preset;
    std::string seeds_text;
    std::uint64_t base_seed = 1;
    std::uint64_t budget = 0;
    std::string bench_out;
    std::string config_path;
    bool timing = false;

    auto* bench = app.add_subcommand("bench", "Run function x algorithm x seed cells; write trace/summary/timing CSVs");
    auto* o_fn = bench->add_option("--function", fn_names, "Functions, e.g. F1,F9 or all")->delimiter(',');
    auto* o_dim = bench->add_option("--dim", dim, "Problem dimension");
    auto* o_algo = bench->add_option("--algo", algo_names, "covo,random_search,pso")->delimiter(',');
    auto* o_preset = bench->add_option("--preset", preset, "tableI or tableII");
    auto* o_seeds = bench->add_option("--seeds", seeds_text, "Count, base:count, or a,b,c list");
    auto* o_seed = bench->add_option("--seed", base_seed, "Base seed for a seed count");
    auto* o_budget = bench->add_option("--budget", budget, "Evaluations per run");
    auto* o_out = bench->add_option("--out", bench_out, "Output directory");
    bench->add_option("--config", config_path, "JSON config file (flags win)");
    auto* o_timing = bench->add_flag("--timing", timing, "Record measured elapsed_ms in the trace");

    std::vector<std::string> stats_inputs;
    std::string stats_out = "stats.csv";
    auto* stats_cmd = app.add_subcommand("stats", "Friedman, Wilcoxon and t-tests over trace or summary CSVs");
    stats_cmd->add_option("inputs", stats_inputs, "Trace or summary CSV files")->required();
    stats_cmd->add_option("--out", stats_out, "Output CSV");

    DenoiseFlags dn;
    std::string dn_out;
    auto* denoise = app.add_subcommand("denoise", "ECG noise removal by COVO-optimised 2x2 unmixing");
    auto* o_samples = denoise->add_option("--samples", dn.samples, "Number of signal samples");
    denoise->add_option("--sample-rate", dn.sample_rate, "Samples per second");
    denoise->add_option("--seed", dn.seed, "Seed");
    denoise->add_option("--budget", dn.budget, "Evaluations");
    denoise->add_option("--preset", dn.preset, "tableI or tableII");
    denoise->add_option("--mixing", dn.mixing, "Mixing matrix a11,a12,a21,a22")->delimiter(',');
    denoise->add_option("--signal", dn.signal, "Source signal CSV with a 'value' column");
    denoise->add_option("--out", dn_out, "Output directory");

    std::string plot_input;
    std::string plot_out = "convergence.svg";
    auto* plot = app.add_subcommand("plot", "Render convergence charts from a trace CSV as SVG");
    plot->add_option("trace", plot_input, "Trace CSV")->required();
    plot->add_option("--out", plot_out, "Output SVG");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "covo: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (bench->parsed()) {
            ExperimentConfig config = bench_defaults;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw csv::IoError("cannot open config '" + config_path + "'");
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(in);
                } catch (const nlohmann::json::exception& e) {
                    throw ConfigError("config '" + config_path + "': " + e.what());
                }
                apply_config_json(config, doc);
            }
            if (o_fn->count()) config.functions = parse_functions(fn_names);
            if (o_dim->count()) config.dimension = dim;
            if (o_algo->count()) config.algorithms = parse_algorithms(algo_names);
            if (o_preset->count()) config.preset = preset;
            if (o_seeds->count()) {
                config.seeds = parse_seeds(seeds_text, base_seed);
            } else if (o_seed->count()) {
                const auto count = config.seeds.size();
                config.seeds.clear();
                for (std::uint64_t i = 0; i < count; ++i) config.seeds.push_back(base_seed + i);
            }
            if (o_budget->count()) config.budget = budget;
            if (o_out->count()) config.out = bench_out;
            if (o_timing->count()) config.timing = timing;
            config.validate();
            return run_bench(config, out);
        }
        if (stats_cmd->parsed()) return run_stats(stats_inputs, stats_out, out);
        if (denoise->parsed()) {
            if (!dn_out.empty()) dn.out = dn_out;
            return run_denoise(dn, o_samples->count() > 0, out);
        }
        if (plot->parsed()) return run_plot(plot_input, plot_out, out);
    } catch (const csv::IoError& e) {
        err << "covo: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "covo: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "covo: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace covo::harness
