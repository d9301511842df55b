#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "covo/benchmarks.hpp"
#include "covo/params.hpp"
#include "covo/rng.hpp"
#include "covo/run_result.hpp"

namespace covo::ecg {

using Signal = std::vector<double>;

/// Row-major 2x2 matrix.
using Mat2 = std::array<double, 4>;

double det(const Mat2& m);
Mat2 inverse(const Mat2& m);

/// One Gaussian bump of a heartbeat, placed by phase in [-pi, pi).
struct Wave {
    double angle;
    double amplitude;
    double width;
};

/// Parametric heartbeat: the P, Q, R, S, T waves summed per beat.
struct EcgParams {
    double sample_rate = 250.0;
    double duration = 4.0;
    double heart_rate = 72.0;
    // Relative beat-to-beat spread of the RR interval.
    double rr_jitter = 0.05;
    std::array<Wave, 5> waves{{
        {-1.0471975511965976, 1.2, 0.25},  // P
        {-0.2617993877991494, -5.0, 0.1},  // Q
        {0.0, 30.0, 0.1},                  // R
        {0.2617993877991494, -7.5, 0.1},   // S
        {1.5707963267948966, 0.75, 0.4},   // T
    }};

    std::size_t samples() const;
    void validate() const;
};

struct MixingModel {
    Mat2 mixing{1.0, 0.0, 0.0, 1.0};

    void validate() const;
};

/// Two observed channels Y = A [S; N] and the noise source that was drawn.
struct Mixture {
    std::array<Signal, 2> observed;
    Signal noise;
};

struct DenoiseReport {
    double mse_o_r;
    double mse_o_c;
    Mat2 best_w;
    RunResult run;
    Signal original;
    Signal contaminated;
    Signal reconstructed;
    Mixture mixture;
};

/// Synthetic ECG normalised to zero mean and unit (population) variance.
Signal synth_ecg(const EcgParams& params, Rng& rng);

/// Rescales a signal to zero mean and unit population variance.
Signal standardize(std::span<const double> s);

/// Throws std::invalid_argument for a singular mixing matrix.
Mixture contaminate(std::span<const double> source, const MixingModel& model, Rng& rng);

/// Mean squared difference. Throws std::invalid_argument on a length mismatch.
double mse(std::span<const double> a, std::span<const double> b);

/// `channel` multiplied by the least-squares scalar that best matches `target`.
Signal align_to(std::span<const double> channel, std::span<const double> target);

/// Value returned for unmixing matrices with non-finite entries or output.
inline constexpr double kWorstFitness = 1e18;

/// Best scale-aligned MSE against `source` over the two outputs of W * Y.
double fitness_of_w(std::span<const double> w_flat, const std::array<Signal, 2>& observed,
                    std::span<const double> source);

/// Reconstruction chosen by fitness_of_w: the aligned output channel.
Signal reconstruct(std::span<const double> w_flat, const std::array<Signal, 2>& observed,
                   std::span<const double> source);

/// Unmixing objective over w in [-10, 10]^4 with a zero optimum.
ObjectiveSpec unmixing_objective(const std::array<Signal, 2>& observed, const Signal& source);

/// Full pipeline on a synthetic ECG.
DenoiseReport denoise_run(const EcgParams& ecg, const MixingModel& model, const CovoParams& covo,
                          std::uint64_t seed);

/// Same pipeline on a caller-supplied source signal (standardised first).
DenoiseReport denoise_signal(const Signal& source, const MixingModel& model, const CovoParams& covo,
                             std::uint64_t seed);

}  // namespace covo::ecg
