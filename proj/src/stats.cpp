#include "covo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace covo::stats {
namespace {

constexpr std::size_t kExactLimit = 12;

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

// Sum of t^3 - t over tie groups of a sorted sequence.
double tie_term(std::vector<double> sorted) {
    std::sort(sorted.begin(), sorted.end());
    double term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        term += t * t * t - t;
        i = j;
    }
    return term;
}

}  // namespace

std::string_view test_name(TestKind kind) {
    switch (kind) {
        case TestKind::Friedman: return "friedman";
        case TestKind::Wilcoxon: return "wilcoxon";
        case TestKind::TTest: return "t_test";
    }
    return "unknown";
}

Summary describe(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("describe: empty sample set");
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
        throw std::invalid_argument("describe: non-finite value");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const double mean = mean_of(sorted);
    return {sorted.front(), median, sorted.back(), mean, std::sqrt(sample_variance(sorted, mean))};
}

std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        // Positions i..j-1 (0-based) share rank mean((i+1)..j).
        const double rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

std::pair<double, double> signed_rank_tails(std::span<const double> ranks, double w_plus) {
    // Midranks are multiples of 1/2, so doubled ranks are integers and the
    // null distribution of 2*W+ is a subset-sum count.
    std::vector<std::size_t> doubled;
    doubled.reserve(ranks.size());
    std::size_t total = 0;
    for (double r : ranks) {
        doubled.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
        total += doubled.back();
    }
    std::vector<double> ways(total + 1, 0.0);
    ways[0] = 1.0;
    for (std::size_t r : doubled) {
        for (std::size_t s = total; s >= r; --s) {
            ways[s] += ways[s - r];
            if (s == r) break;
        }
    }
    const double outcomes = std::ldexp(1.0, static_cast<int>(ranks.size()));
    const auto observed = static_cast<std::size_t>(std::llround(2.0 * w_plus));
    double below = 0.0;
    double above = 0.0;
    for (std::size_t s = 0; s <= total; ++s) {
        if (s <= observed) below += ways[s];
        if (s >= observed) above += ways[s];
    }
    return {below / outcomes, above / outcomes};
}

TestReport wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, Alternative alternative) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon_signed_rank: samples must be paired");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    const std::size_t n = diffs.size();
    if (n == 0) return {TestKind::Wilcoxon, 0.0, 1.0, {a.size(), b.size()}};

    std::vector<double> magnitudes(n);
    std::transform(diffs.begin(), diffs.end(), magnitudes.begin(), [](double d) { return std::fabs(d); });
    const std::vector<double> ranks = midranks(magnitudes);

    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) w_plus += ranks[i];
    }
    const double nn = static_cast<double>(n);
    const double w_minus = nn * (nn + 1.0) / 2.0 - w_plus;
    const double statistic = alternative == Alternative::TwoSided ? std::min(w_plus, w_minus) : w_plus;

    double p = 1.0;
    if (n <= kExactLimit) {
        const auto [below, above] = signed_rank_tails(ranks, w_plus);
        switch (alternative) {
            case Alternative::TwoSided: p = 2.0 * std::min(below, above); break;
            case Alternative::Less: p = below; break;
            case Alternative::Greater: p = above; break;
        }
    } else {
        const double mean = nn * (nn + 1.0) / 4.0;
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term(magnitudes) / 48.0;
        if (var > 0.0) {
            const double sd = std::sqrt(var);
            const boost::math::normal_distribution<double> z;
            switch (alternative) {
                case Alternative::TwoSided: {
                    const double dev = std::max(0.0, std::fabs(w_plus - mean) - 0.5);
                    p = 2.0 * boost::math::cdf(boost::math::complement(z, dev / sd));
                    break;
                }
                case Alternative::Less: p = boost::math::cdf(z, (w_plus - mean + 0.5) / sd); break;
                case Alternative::Greater:
                    p = boost::math::cdf(boost::math::complement(z, (w_plus - mean - 0.5) / sd));
                    break;
            }
        }
    }
    return {TestKind::Wilcoxon, statistic, clamp_p(p), {a.size(), b.size()}};
}

TestReport friedman(const std::vector<std::vector<double>>& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) throw std::invalid_argument("friedman: need at least 2 blocks");
    const std::size_t k = matrix.front().size();
    if (k < 2) throw std::invalid_argument("friedman: need at least 2 treatments");
    for (const auto& row : matrix) {
        if (row.size() != k) throw std::invalid_argument("friedman: ragged matrix");
    }

    std::vector<double> rank_sums(k, 0.0);
    double ties = 0.0;
    for (const auto& row : matrix) {
        const auto r = midranks(row);
        for (std::size_t j = 0; j < k; ++j) rank_sums[j] += r[j];
        ties += tie_term(row);
    }
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    double sum_sq = 0.0;
    for (double r : rank_sums) sum_sq += r * r;
    const double raw = 12.0 / (nn * kk * (kk + 1.0)) * sum_sq - 3.0 * nn * (kk + 1.0);
    const double correction = 1.0 - ties / (nn * kk * (kk * kk - 1.0));
    if (correction <= 0.0) return {TestKind::Friedman, 0.0, 1.0, {n, k}};

    const double statistic = std::max(0.0, raw / correction);
    const boost::math::chi_squared_distribution<double> chi(kk - 1.0);
    const double p = boost::math::cdf(boost::math::complement(chi, statistic));
    return {TestKind::Friedman, statistic, clamp_p(p), {n, k}};
}

TestReport t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t_test: each sample needs n >= 2");
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = sample_variance(a, ma) / static_cast<double>(a.size());
    const double vb = sample_variance(b, mb) / static_cast<double>(b.size());
    const double se2 = va + vb;
    const std::vector<std::size_t> sizes{a.size(), b.size()};
    if (se2 == 0.0) {
        if (ma == mb) return {TestKind::TTest, 0.0, 1.0, sizes};
        return {TestKind::TTest, ma > mb ? INFINITY : -INFINITY, 0.0, sizes};
    }
    const double t = (ma - mb) / std::sqrt(se2);
    const double df = se2 * se2 / (va * va / static_cast<double>(a.size() - 1) +
                                   vb * vb / static_cast<double>(b.size() - 1));
    const boost::math::students_t_distribution<double> dist(df);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    return {TestKind::TTest, t, clamp_p(p), sizes};
}

}  // namespace covo::stats
