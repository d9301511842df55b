#include "covo/ecg.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "covo/covo.hpp"

namespace covo::ecg {
namespace {

constexpr double kUnmixBound = 10.0;

// Stream separation so the noise draw does not depend on how many draws the
// generator consumed.
constexpr std::uint64_t kNoiseStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSearchStream = 0xbf58476d1ce4e5b9ULL;

bool output_channel(std::span<const double> w, const std::array<Signal, 2>& y, std::size_t row, Signal& out) {
    const std::size_t n = y[0].size();
    out.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = w[2 * row] * y[0][t] + w[2 * row + 1] * y[1][t];
        if (!std::isfinite(out[t])) return false;
    }
    return true;
}

}  // namespace

double det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

Mat2 inverse(const Mat2& m) {
    const double d = det(m);
    if (std::fabs(d) <= 1e-6) throw std::invalid_argument("inverse: singular 2x2 matrix");
    return {m[3] / d, -m[1] / d, -m[2] / d, m[0] / d};
}

std::size_t EcgParams::samples() const {
    return static_cast<std::size_t>(std::llround(sample_rate * duration));
}

void EcgParams::validate() const {
    if (!(sample_rate > 0.0) || !(duration > 0.0) || !(heart_rate > 0.0)) {
        throw std::invalid_argument("EcgParams: sample_rate, duration and heart_rate must be > 0");
    }
    if (samples() < 2) throw std::invalid_argument("EcgParams: need at least 2 samples");
    if (!(rr_jitter >= 0.0 && rr_jitter < 1.0)) throw std::invalid_argument("EcgParams: rr_jitter in [0, 1)");
    for (const auto& w : waves) {
        if (!(w.width > 0.0)) throw std::invalid_argument("EcgParams: wave widths must be > 0");
    }
}

void MixingModel::validate() const {
    for (double v : mixing) {
        if (!std::isfinite(v)) throw std::invalid_argument("MixingModel: non-finite entry");
    }
    if (std::fabs(det(mixing)) <= 1e-6) throw std::invalid_argument("MixingModel: singular mixing matrix");
}

Signal standardize(std::span<const double> s) {
    const double n = static_cast<double>(s.size());
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var /= n;
    if (!(var > 0.0)) throw std::invalid_argument("standardize: constant signal");
    const double sd = std::sqrt(var);
    Signal out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = (s[i] - mean) / sd;
    return out;
}

Signal synth_ecg(const EcgParams& params, Rng& rng) {
    params.validate();
    constexpr double pi = std::numbers::pi;
    const std::size_t n = params.samples();
    const double dt = 1.0 / params.sample_rate;
    const double base_period = 60.0 / params.heart_rate;

    Signal s(n);
    double beat_start = 0.0;
    double period = base_period * (1.0 + params.rr_jitter * rng.uniform(-1.0, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        while (t >= beat_start + period) {
            beat_start += period;
            period = base_period * (1.0 + params.rr_jitter * rng.uniform(-1.0, 1.0));
        }
        const double phase = 2.0 * pi * (t - beat_start) / period - pi;
        double v = 0.0;
        for (const auto& w : params.waves) {
            const double d = phase - w.angle;
            v += w.amplitude * std::exp(-d * d / (2.0 * w.width * w.width));
        }
        s[i] = v;
    }
    return standardize(s);
}

Mixture contaminate(std::span<const double> source, const MixingModel& model, Rng& rng) {
    model.validate();
    Mixture out;
    out.noise.resize(source.size());
    for (auto& v : out.noise) v = rng.normal();
    const auto& a = model.mixing;
    for (std::size_t row = 0; row < 2; ++row) {
        out.observed[row].resize(source.size());
        for (std::size_t t = 0; t < source.size(); ++t) {
            out.observed[row][t] = a[2 * row] * source[t] + a[2 * row + 1] * out.noise[t];
        }
    }
    return out;
}

double mse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("mse: length mismatch");
    if (a.empty()) throw std::invalid_argument("mse: empty signals");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

Signal align_to(std::span<const double> channel, std::span<const double> target) {
    if (channel.size() != target.size()) throw std::invalid_argument("align_to: length mismatch");
    double cc = 0.0;
    double ct = 0.0;
    for (std::size_t i = 0; i < channel.size(); ++i) {
        cc += channel[i] * channel[i];
        ct += channel[i] * target[i];
    }
    const double scale = cc > 0.0 ? ct / cc : 0.0;
    Signal out(channel.size());
    for (std::size_t i = 0; i < channel.size(); ++i) out[i] = scale * channel[i];
    return out;
}

double fitness_of_w(std::span<const double> w, const std::array<Signal, 2>& observed,
                    std::span<const double> source) {
    if (w.size() != 4) throw std::invalid_argument("fitness_of_w: W must have 4 entries");
    for (double v : w) {
        if (!std::isfinite(v)) return kWorstFitness;
    }
    double best = kWorstFitness;
    Signal channel;
    for (std::size_t row = 0; row < 2; ++row) {
        if (!output_channel(w, observed, row, channel)) continue;
        const double e = mse(align_to(channel, source), source);
        if (std::isfinite(e) && e < best) best = e;
    }
    return best;
}

Signal reconstruct(std::span<const double> w, const std::array<Signal, 2>& observed,
                   std::span<const double> source) {
    Signal best;
    double best_err = INFINITY;
    Signal channel;
    for (std::size_t row = 0; row < 2; ++row) {
        if (!output_channel(w, observed, row, channel)) continue;
        Signal aligned = align_to(channel, source);
        const double e = mse(aligned, source);
        if (e < best_err) {
            best_err = e;
            best = std::move(aligned);
        }
    }
    if (best.empty()) best.assign(source.size(), 0.0);
    return best;
}

ObjectiveSpec unmixing_objective(const std::array<Signal, 2>& observed, const Signal& source) {
    auto data = std::make_shared<const std::pair<std::array<Signal, 2>, Signal>>(observed, source);
    ObjectiveSpec spec;
    spec.id = FunctionId::Custom;
    spec.name = "ecg_unmix";
    spec.dimension = 4;
    spec.lower = -kUnmixBound;
    spec.upper = kUnmixBound;
    spec.optimum_value = 0.0;
    spec.modality = Modality::Multimodal;
    spec.evaluator = [data](std::span<const double> w, Rng&) {
        return fitness_of_w(w, data->first, data->second);
    };
    return spec;
}

DenoiseReport denoise_signal(const Signal& raw_source, const MixingModel& model, const CovoParams& covo,
                             std::uint64_t seed) {
    const Signal source = standardize(raw_source);
    Rng noise_rng(seed ^ kNoiseStream);
    const Mixture mixture = contaminate(source, model, noise_rng);

    const ObjectiveSpec objective = unmixing_objective(mixture.observed, source);
    RunResult run_result = run(objective, covo, seed ^ kSearchStream);

    DenoiseReport report;
    std::copy(run_result.best_position.begin(), run_result.best_position.end(), report.best_w.begin());
    report.mse_o_r = run_result.best_error;
    report.original = source;
    report.contaminated = mixture.observed[0];
    report.reconstructed = reconstruct(run_result.best_position, mixture.observed, source);
    report.mse_o_c = mse(source, align_to(mixture.observed[0], source));
    report.run = std::move(run_result);
    report.mixture = mixture;
    return report;
}

DenoiseReport denoise_run(const EcgParams& ecg, const MixingModel& model, const CovoParams& covo,
                          std::uint64_t seed) {
    Rng rng(seed);
    return denoise_signal(synth_ecg(ecg, rng), model, covo, seed);
}

}  // namespace covo::ecg
