#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwlneuro/errors.hpp"

namespace pwlneuro {

/**
 * The four neuron models plus the hardware coefficient set.
 *
 * Original uses the quadratic v-nullcline 0.04 v^2 + 5 v + 140.
 * OriginalDiscretized is the shift-friendly variant (1/32) v^2 + 4 v + 140;
 * its trajectories are close to but not identical with Original, so it is
 * treated as a model of its own.
 */
enum class ModelKind {
    Original,
    Pwl2,
    Pwl3,
    Pwl4,
    OriginalDiscretized,
};

const char* model_name(ModelKind m);
std::optional<ModelKind> model_from_name(const std::string& name);

/// Slope/offset constants of a PWL nullcline. k3 is unused by Pwl2.
struct KCoeffs {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
};

/// The absolute-value breakpoint shared by every PWL model (mV).
inline constexpr double kPwlBreakpoint = -62.5;

/// Default spike apex; all spikes are equalized at this value (mV).
inline constexpr double kDefaultThreshold = 30.0;

struct NeuronParams {
    ModelKind model = ModelKind::Original;
    double a = 0.02;  ///< recovery time scale (1/ms)
    double b = 0.2;   ///< recovery sensitivity
    double c = -65.0; ///< post-spike reset voltage (mV)
    double d = 6.0;   ///< post-spike recovery increment
    double v_th = kDefaultThreshold;
    KCoeffs k;        ///< ignored for Original / OriginalDiscretized

    /// Throws ConfigError when the reset would not land below threshold
    /// or the recovery time scale is zero.
    void validate() const;
};

struct NeuronState {
    double v = -70.0;
    double u = -14.0;
};

/// Rest state with u on the recovery nullcline.
inline NeuronState rest_state(const NeuronParams& p, double v0) {
    return NeuronState{v0, p.b * v0};
}

struct StepResult {
    NeuronState state;
    bool fired = false;
    double emitted_v = 0.0; ///< clamped to v_th on firing steps
};

/// Spike record of one simulation run. Times are step indices (dt-units).
struct SpikeTrain {
    std::vector<std::size_t> spike_steps;
    double dt = 0.0;
    std::vector<double> trace; ///< per-step emitted v, empty unless requested

    std::size_t count() const { return spike_steps.size(); }
    double spike_time_ms(std::size_t i) const { return static_cast<double>(spike_steps[i]) * dt; }
};

/// Time-indexed input current: constant, staircase or explicit samples.
class InputSignal {
public:
    static InputSignal constant(double value);
    /// Each level held for seg_steps steps, last level held forever.
    static InputSignal staircase(std::vector<double> levels, std::size_t seg_steps);
    static InputSignal samples(std::vector<double> values);

    double at(std::size_t step) const;

    const std::vector<double>& levels() const { return levels_; }
    std::size_t segment_steps() const { return seg_steps_; }

private:
    enum class Kind { Constant, Staircase, Samples } kind_ = Kind::Constant;
    double value_ = 0.0;
    std::vector<double> levels_;
    std::size_t seg_steps_ = 0;
};

/// f(v) = v-equation right-hand side with u = 0 and I = 0.
double nullcline_value(ModelKind model, const KCoeffs& k, double v);

/// (dv, du) of the coupled system.
std::pair<double, double> derivative(const NeuronParams& p, const NeuronState& s, double i_in);

/// One forward-Euler step with the reset rule applied.
/// Throws NonFiniteError when the state leaves the finite range.
StepResult step(const NeuronParams& p, const NeuronState& s, double i_in, double dt);

/// Repeated step() from `initial`, recording spikes (and the v trace when
/// record_trace is set). Deterministic given its inputs.
SpikeTrain simulate(const NeuronParams& p, NeuronState initial, const InputSignal& input,
                    double dt, std::size_t n_steps, bool record_trace = false);

} // namespace pwlneuro
