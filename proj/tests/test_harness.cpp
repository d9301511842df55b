#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "covo/csv.hpp"
#include "covo/harness.hpp"
#include "covo/rng.hpp"
#include "doctest.h"
#include "temp_dir.hpp"

using namespace covo;
using namespace covo::harness;
using testing::slurp;
using testing::spit;
using testing::TempDir;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cmd_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("seed lists") {
    CHECK(parse_seeds("3", 1) == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(parse_seeds("3", 10) == std::vector<std::uint64_t>{10, 11, 12});
    CHECK(parse_seeds("100:2", 1) == std::vector<std::uint64_t>{100, 101});
    CHECK(parse_seeds("5,3,8", 1) == std::vector<std::uint64_t>{5, 3, 8});
    CHECK_THROWS_AS(parse_seeds("", 1), ConfigError);
    CHECK_THROWS_AS(parse_seeds("x", 1), ConfigError);
    CHECK_THROWS_AS(parse_seeds("0", 1), ConfigError);
}

TEST_CASE("function and algorithm names") {
    CHECK(parse_functions({"all"}).size() == 13);
    CHECK(parse_functions({"F1", "f9"}) == std::vector<FunctionId>{FunctionId::F1, FunctionId::F9});
    CHECK_THROWS_AS(parse_functions({"F14"}), ConfigError);
    CHECK(parse_algorithms({"covo", "pso"}) == std::vector<Algorithm>{Algorithm::Covo, Algorithm::Pso});
    CHECK_THROWS_AS(parse_algorithms({"gwo"}), ConfigError);
}

TEST_CASE("default config and JSON overrides") {
    const auto d = default_config();
    CHECK(d.functions.size() == 13);
    CHECK(d.seeds.size() == 21);
    CHECK(d.seeds.front() == 1);
    CHECK(d.dimension == 30);
    CHECK(d.budget == 100000);
    CHECK_NOTHROW(d.validate());

    auto c = default_config();
    apply_config_json(c, nlohmann::json::parse(R"({
        "functions": ["F1", "F5"], "dim": 10, "algorithms": ["covo"], "preset": "tableI",
        "overrides": {"population": 12}, "seeds": {"base": 7, "count": 2}, "budget": 500,
        "out": "somewhere", "timing": true})"));
    CHECK(c.functions == std::vector<FunctionId>{FunctionId::F1, FunctionId::F5});
    CHECK(c.dimension == 10);
    CHECK(c.algorithms == std::vector<Algorithm>{Algorithm::Covo});
    CHECK(c.seeds == std::vector<std::uint64_t>{7, 8});
    CHECK(c.budget == 500);
    CHECK(c.timing);
    const auto p = c.covo_params();
    CHECK(p.population == 12);
    CHECK(p.max_evals == 500);
    CHECK(p.p_die == doctest::Approx(0.43597));

    auto bad = default_config();
    CHECK_THROWS_AS(apply_config_json(bad, nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(apply_config_json(bad, nlohmann::json::parse(R"({"dim": "ten"})")), ConfigError);
    auto wrong = default_config();
    apply_config_json(wrong, nlohmann::json::parse(R"({"overrides": {"nope": 1}})"));
    CHECK_THROWS(wrong.covo_params());
}

TEST_CASE("csv round trip") {
    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-300.0, 300.0));
        CHECK(csv::parse_real(csv::format_real(v), 1) == v);
    }
    CHECK(std::isinf(csv::parse_real(csv::format_real(INFINITY), 1)));
    CHECK(std::isnan(csv::parse_real(csv::format_real(NAN), 1)));
    CHECK_THROWS_AS(csv::parse_real("1.5x", 4), csv::FormatError);

    const auto t = csv::parse("a,b\n1,2\n3,4\n");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK(t.row_lines[1] == 3);
    try {
        csv::parse("a,b\n1,2\n3\n");
        FAIL("ragged row accepted");
    } catch (const csv::FormatError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("bench writes reproducible traces") {
    TempDir dir;
    const std::vector<std::string> args{"bench", "--function", "F1", "--dim", "5", "--algo", "covo",
                                        "--seeds", "3",  "--budget",   "400", "--out", dir / "run"};
    const auto r = cli(args);
    REQUIRE(r.code == kExitOk);
    const std::string trace = slurp(dir.path() / "run" / "trace.csv");
    CHECK(first_line(trace) == kTraceHeader);
    const auto table = csv::parse(trace);
    std::set<std::string> ids;
    for (const auto& row : table.rows) ids.insert(row[0]);
    CHECK(ids == std::set<std::string>{"F1-covo-1", "F1-covo-2", "F1-covo-3"});

    const std::string summary = slurp(dir.path() / "run" / "summary.csv");
    CHECK(first_line(summary) == kSummaryHeader);
    CHECK(csv::parse(summary).rows.size() == 1);
    CHECK(first_line(slurp(dir.path() / "run" / "timing.csv")) == kTimingHeader);

    REQUIRE(cli(args).code == kExitOk);
    CHECK(slurp(dir.path() / "run" / "trace.csv") == trace);
}

TEST_CASE("bench honours budget and seed base") {
    TempDir dir;
    REQUIRE(cli({"bench", "--function", "F9", "--dim", "4", "--algo", "random_search,pso", "--seeds", "2",
                 "--seed", "40", "--budget", "300", "--out", dir / "b"})
                .code == kExitOk);
    const auto t = csv::read_file(dir.path() / "b" / "trace.csv");
    const auto evals = t.require_column("evals");
    const auto run_id = t.require_column("run_id");
    std::set<std::string> ids;
    for (const auto& row : t.rows) {
        CHECK(csv::parse_uint(row[evals], 1) <= 300);
        ids.insert(row[run_id]);
    }
    CHECK(ids == std::set<std::string>{"F9-random_search-40", "F9-random_search-41", "F9-pso-40", "F9-pso-41"});
}

TEST_CASE("bench usage errors") {
    TempDir dir;
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"bench", "--function", "F99", "--out", dir / "x"}).code == kExitUsage);
    CHECK(cli({"bench", "--dim", "abc"}).code == kExitUsage);
    CHECK(cli({"bench", "--function", "F1", "--budget", "0", "--out", dir / "x"}).code == kExitUsage);
    CHECK(cli({"bench", "--config", dir / "missing.json"}).code == kExitIo);
    spit(dir.path() / "bad.json", "{ not json");
    CHECK(cli({"bench", "--config", dir / "bad.json"}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("bench reads a JSON config") {
    TempDir dir;
    spit(dir.path() / "c.json", R"({"functions": ["F1"], "dim": 3, "algorithms": ["covo"],
                                    "seeds": "5,6", "budget": 200, "out": ")" + (dir / "cfg") + R"("})");
    REQUIRE(cli({"bench", "--config", dir / "c.json"}).code == kExitOk);
    const auto t = csv::read_file(dir.path() / "cfg" / "summary.csv");
    CHECK(t.rows.size() == 1);
    CHECK(t.rows[0][t.require_column("runs")] == "2");
}

TEST_CASE("stats over three algorithms") {
    TempDir dir;
    REQUIRE(cli({"bench", "--function", "F1,F9", "--dim", "4", "--seeds", "4", "--budget", "400", "--out",
                 dir / "r"})
                .code == kExitOk);
    const auto r = cli({"stats", dir / "r/trace.csv", "--out", dir / "stats.csv"});
    REQUIRE(r.code == kExitOk);
    const auto t = csv::read_file(dir.path() / "stats.csv");
    CHECK(first_line(slurp(dir.path() / "stats.csv")) == kStatsHeader);
    REQUIRE(t.rows.size() == 7);
    CHECK(t.rows[0][0] == "friedman");
    std::size_t wilcoxon = 0;
    std::size_t ttest = 0;
    for (const auto& row : t.rows) {
        if (row[0] == "wilcoxon") ++wilcoxon;
        if (row[0] == "t_test") ++ttest;
        const double p = csv::parse_real(row[4], 1);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    CHECK(wilcoxon == 3);
    CHECK(ttest == 3);

    // Summary CSVs are accepted too.
    CHECK(cli({"stats", dir / "r/summary.csv", "--out", dir / "s2.csv"}).code == kExitOk);
}

TEST_CASE("stats on identical algorithms") {
    TempDir dir;
    std::string text = std::string(kTraceHeader) + "\n";
    for (int seed = 1; seed <= 6; ++seed) {
        for (const std::string algo : {"a", "b"}) {
            text += "F1-" + algo + "-" + std::to_string(seed) + "," + std::to_string(seed) + "," + algo +
                    ",F1,0,10," + std::to_string(seed * 1.5) + ",0\n";
        }
    }
    spit(dir.path() / "t.csv", text);
    REQUIRE(cli({"stats", dir / "t.csv", "--out", dir / "o.csv"}).code == kExitOk);
    const auto t = csv::read_file(dir.path() / "o.csv");
    for (const auto& row : t.rows) CHECK(csv::parse_real(row[4], 1) == 1.0);
}

TEST_CASE("stats input errors") {
    TempDir dir;
    REQUIRE(cli({"bench", "--function", "F1", "--dim", "3", "--algo", "covo", "--seeds", "3", "--budget", "100",
                 "--out", dir / "one"})
                .code == kExitOk);
    const auto single = cli({"stats", dir / "one/trace.csv", "--out", dir / "o.csv"});
    CHECK(single.code == kExitUsage);
    CHECK_FALSE(single.err.empty());

    spit(dir.path() / "bad.csv", std::string(kTraceHeader) + "\nF1-a-1,1,a,F1,0,10,1.0,0\nF1-b-1,1,b,F1,0,10,oops,0\n");
    const auto bad = cli({"stats", dir / "bad.csv", "--out", dir / "o.csv"});
    CHECK(bad.code == kExitUsage);
    CHECK(bad.err.find("line 3") != std::string::npos);

    CHECK(cli({"stats", dir / "nope.csv"}).code == kExitIo);
}

TEST_CASE("denoise writes signals and report") {
    TempDir dir;
    const std::vector<std::string> args{"denoise", "--samples", "1000", "--budget", "2000", "--seed", "3",
                                        "--out", dir / "d"};
    REQUIRE(cli(args).code == kExitOk);
    const auto sig = csv::read_file(dir.path() / "d" / "signals.csv");
    CHECK(sig.header == std::vector<std::string>{"t", "original", "contaminated", "reconstructed"});
    CHECK(sig.rows.size() == 1000);
    const auto rep = csv::read_file(dir.path() / "d" / "report.csv");
    CHECK(rep.header == std::vector<std::string>{"sample_size", "mse_o_r", "mse_o_c"});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0][0] == "1000");
    CHECK(std::isfinite(csv::parse_real(rep.rows[0][1], 2)));
    CHECK(std::isfinite(csv::parse_real(rep.rows[0][2], 2)));

    const std::string first = slurp(dir.path() / "d" / "signals.csv");
    REQUIRE(cli(args).code == kExitOk);
    CHECK(slurp(dir.path() / "d" / "signals.csv") == first);

    CHECK(cli({"denoise", "--mixing", "1,1,1,1", "--budget", "100", "--out", dir / "e"}).code == kExitUsage);
    CHECK(cli({"denoise", "--mixing", "1,2,3", "--budget", "100", "--out", dir / "e"}).code == kExitUsage);
}

TEST_CASE("denoise on a supplied signal") {
    TempDir dir;
    std::string text = "value\n";
    for (int i = 0; i < 200; ++i) text += std::to_string(std::sin(0.1 * i) + (i % 25 == 0 ? 3.0 : 0.0)) + "\n";
    spit(dir.path() / "s.csv", text);
    REQUIRE(cli({"denoise", "--signal", dir / "s.csv", "--budget", "1000", "--out", dir / "d"}).code == kExitOk);
    CHECK(csv::read_file(dir.path() / "d" / "signals.csv").rows.size() == 200);
    spit(dir.path() / "nv.csv", "x\n1\n2\n");
    CHECK(cli({"denoise", "--signal", dir / "nv.csv", "--budget", "100", "--out", dir / "d2"}).code == kExitUsage);
}

TEST_CASE("plot renders one polyline per algorithm") {
    TempDir dir;
    REQUIRE(cli({"bench", "--function", "F1", "--dim", "3", "--algo", "covo,random_search", "--seeds", "2",
                 "--budget", "200", "--out", dir / "r"})
                .code == kExitOk);
    REQUIRE(cli({"plot", dir / "r/trace.csv", "--out", dir / "c.svg"}).code == kExitOk);
    const std::string svg = slurp(dir.path() / "c.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_of(svg, "<polyline") == 2);
    REQUIRE(cli({"plot", dir / "r/trace.csv", "--out", dir / "c.svg"}).code == kExitOk);
    CHECK(slurp(dir.path() / "c.svg") == svg);

    spit(dir.path() / "empty.csv", std::string(kTraceHeader) + "\n");
    CHECK(cli({"plot", dir / "empty.csv", "--out", dir / "e.svg"}).code == kExitUsage);
    spit(dir.path() / "cols.csv", "run_id,seed\nx,1\n");
    CHECK(cli({"plot", dir / "cols.csv", "--out", dir / "e.svg"}).code == kExitUsage);
}

TEST_CASE("unwritable output is an I/O error") {
    TempDir dir;
    REQUIRE(cli({"bench", "--function", "F1", "--dim", "3", "--algo", "covo", "--seeds", "1", "--budget", "50",
                 "--out", dir / "r"})
                .code == kExitOk);
    CHECK(cli({"plot", dir / "r/trace.csv", "--out", "/proc/covo-no/such.svg"}).code == kExitIo);
    CHECK(cli({"bench", "--function", "F1", "--dim", "3", "--algo", "covo", "--seeds", "1", "--budget", "50",
               "--out", "/proc/covo-no"})
              .code == kExitIo);
}

TEST_CASE("cells come back in config order regardless of threads") {
    auto c = default_config();
    c.functions = {FunctionId::F1, FunctionId::F5};
    c.dimension = 3;
    c.seeds = {1, 2, 3};
    c.budget = 150;
    const auto one = run_cells(c, 1);
    const auto four = run_cells(c, 4);
    REQUIRE(one.size() == 18);
    CHECK(trace_csv(one, false) == trace_csv(four, false));
    CHECK(summary_csv(one) == summary_csv(four));
}
