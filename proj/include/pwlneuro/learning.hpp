#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pwlneuro/neuron.hpp"

namespace pwlneuro {

/// Binary bitmap with a class label. Pixels are bipolar on use:
/// black = +1, white = -1.
struct Pattern {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> pixels; ///< rows * cols, 1 = black
    int label = 0;

    std::size_t size() const { return pixels.size(); }
    double bipolar(std::size_t i) const { return pixels[i] ? 1.0 : -1.0; }
};

enum class LearnerBackend { Float, Fixed };

struct LearnerConfig {
    std::size_t n_inputs = 320; ///< M, pixel count
    std::size_t n_outputs = 0;  ///< class count
    int alpha_shift = 14;       ///< alpha = 2^-alpha_shift (shift-friendly)
    double i_bias = 0.0;        ///< I_0; 0 requests the startup bisection
    double f_high = 80.0;       ///< valid-class target frequency (Hz)
    double f_low = 10.0;        ///< invalid-class target frequency (Hz)
    double dt = 0.5;            ///< integration step (ms)
    double window_ms = 250.0;   ///< presentation window per pattern
    int presentations = 500;
    std::uint64_t seed = 1;
    LearnerBackend backend = LearnerBackend::Float;
    NeuronParams neuron{ModelKind::Original, 0.02, 0.2, -65.0, 6.0, kDefaultThreshold, {}};
    double v0 = -70.0;

    double alpha() const; ///< 2^-alpha_shift (0 for very large shifts)
    /// Target period in integration steps: round(1 / (f * dt)).
    std::size_t target_steps(double f_hz) const;
    std::size_t window_steps() const { return static_cast<std::size_t>(window_ms / dt); }
};

struct LearnerState {
    std::size_t n_inputs = 0;
    std::size_t n_outputs = 0;
    std::vector<double> w; ///< n_inputs * n_outputs, column j = output j

    double& at(std::size_t input, std::size_t output) { return w[input * n_outputs + output]; }
    double at(std::size_t input, std::size_t output) const { return w[input * n_outputs + output]; }
};

/// Eq-16 drive of output j: bipolar dot product plus the firing bias.
/// Throws DimensionMismatchError when sizes disagree.
double input_current(const Pattern& pattern, const LearnerState& state, std::size_t output,
                     double i_bias);

/// Eq-21 increment for one weight: alpha * pixel * (counter - target).
inline double weight_update(double bipolar_pixel, double counter_steps, double target_steps,
                            double alpha) {
    return alpha * bipolar_pixel * (counter_steps - target_steps);
}

/// Measured firing frequency (Hz) of one output neuron for a pattern under
/// the current weights, no learning.
double output_frequency(const Pattern& pattern, const LearnerState& state, std::size_t output,
                        const LearnerConfig& cfg, double i_bias);

/// Smallest bias current at which a zero-weight output fires at least at
/// f_low. Throws NoFiringError when none exists below the search bound.
double find_firing_bias(const LearnerConfig& cfg);

struct ConvergenceRow {
    int presentation;
    int pattern_label;
    std::vector<double> freq_hz; ///< per output
};

struct TrainResult {
    LearnerState state;
    double i_bias = 0.0;
    std::vector<ConvergenceRow> log;
};

/**
 * Supervised spike-rate training: patterns are presented round-robin (fixed
 * per-seed shuffle); during a presentation the target output chases the
 * high-frequency period and every other output the low one; weights change
 * only when their output fires, by the Eq-21 rule.
 */
TrainResult train(const std::vector<Pattern>& patterns, const LearnerConfig& cfg);

struct EvalResult {
    double accuracy = 0.0;
    std::vector<std::vector<double>> freq_table; ///< per pattern, per output (Hz)
    std::vector<int> predicted;
};

/// Predicted class = argmax output frequency during the presentation.
EvalResult evaluate(const LearnerState& state, const std::vector<Pattern>& patterns,
                    const LearnerConfig& cfg, double i_bias);

/// Synthetic dataset: `classes` base patterns with `writers` noisy copies
/// each (per-writer pixel flips), deterministic in the seed.
std::vector<Pattern> make_synthetic_dataset(int classes, int writers, int rows, int cols,
                                            double flip_prob, std::uint64_t seed);

/// PBM (P1) bitmap loader and a CSV manifest (path,label) reader.
Pattern load_pbm(const std::string& path, int label);
std::vector<Pattern> load_manifest(const std::string& manifest_csv);

void save_weights_csv(const LearnerState& state, const std::string& path);
LearnerState load_weights_csv(const std::string& path);
void write_convergence_csv(const TrainResult& r, const std::string& path);

} // namespace pwlneuro
