#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covo::stats {

struct SampleSet {
    std::string label;
    std::vector<double> values;
};

/// The five per-function columns of a results table (minimisation: best = min).
struct Summary {
    double best;
    double median;
    double worst;
    double mean;
    double std;  // sample standard deviation; 0 for a single value
};

enum class TestKind { Friedman, Wilcoxon, TTest };
enum class Alternative { TwoSided, Less, Greater };

std::string_view test_name(TestKind kind);

struct TestReport {
    TestKind test;
    double statistic;
    double p_value;
    std::vector<std::size_t> n;
};

/// Throws std::invalid_argument on an empty or non-finite set.
Summary describe(std::span<const double> values);
inline Summary describe(const SampleSet& s) { return describe(s.values); }

/// Midranks (1-based) of `values`; ties share the mean of their positions.
std::vector<double> midranks(std::span<const double> values);

/// Paired signed-rank test on a - b. Zero differences are dropped and tied
/// magnitudes get midranks. Up to 12 non-zero pairs the p-value is exact;
/// beyond that a normal approximation with continuity and tie correction is
/// used. Two-sided reports min(W+, W-); one-sided reports W+. `Less` tests
/// whether a tends to be smaller than b.
TestReport wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                Alternative alternative = Alternative::TwoSided);

/// Exact tail probabilities of W+ given the (mid)ranks of the non-zero pairs.
/// Returns {P(W+ <= w), P(W+ >= w)}.
std::pair<double, double> signed_rank_tails(std::span<const double> ranks, double w_plus);

/// Friedman test; rows are blocks, columns treatments. Tie-corrected
/// statistic with a chi-square(k - 1) p-value.
TestReport friedman(const std::vector<std::vector<double>>& matrix);

/// Welch two-sample t-test, two-sided.
TestReport t_test(std::span<const double> a, std::span<const double> b);

}  // namespace covo::stats
