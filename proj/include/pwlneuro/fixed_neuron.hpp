#pragma once

#include <cstddef>
#include <vector>

#include "pwlneuro/fixedpoint.hpp"
#include "pwlneuro/neuron.hpp"

namespace pwlneuro {

struct FixedNeuronState {
    FixedPoint v;
    FixedPoint u;
};

/**
 * Shift-add plans and encoded offsets for one neuron's datapath.
 *
 * Multiplicative constants (a, b, k1, and k2 for the 4PWL model) must be
 * shift-add representable; additive offsets (breakpoints, k2/k1k2k3/4k2k3,
 * the 140 constant, c and d) enter adders and are stored as encoded Q8.12
 * values. The quadratic model keeps one true multiplier for v^2; the
 * 0.04/5 coefficient pair has no shift-add form, so only the discretized
 * set (1/32, 4) is buildable.
 */
struct FixedModelConstants {
    ModelKind model = ModelKind::Pwl2;
    ShiftAddPlan a_plan;
    ShiftAddPlan b_plan;
    ShiftAddPlan k1_plan;      // PWL models
    ShiftAddPlan k2_plan;      // Pwl4 only (multiplicative there)
    ShiftAddPlan vsq_plan;     // OriginalDiscretized: 1/32
    ShiftAddPlan vlin_plan;    // OriginalDiscretized: 4
    FixedPoint bp_center;      // 62.5 (Pwl2, Pwl4)
    FixedPoint bp_plus;        // 62.5 + k2 (Pwl3) or 62.5 + k3 (Pwl4)
    FixedPoint bp_minus;       // 62.5 - k2 (Pwl3) or 62.5 - k3 (Pwl4)
    FixedPoint offset;         // k2 | k1k2k3 | 4k2k3 | -140 stored positive, see step
    FixedPoint c_reset;
    FixedPoint d_incr;
    FixedPoint v_th;

    /// Throws NotRepresentableError when a multiplicative constant has no
    /// shift-add form within max_terms terms.
    static FixedModelConstants build(const NeuronParams& p, int max_terms = 4);
};

struct FixedStepResult {
    FixedNeuronState state;
    bool fired = false;
    FixedPoint emitted_v;
    bool saturated = false;
};

/**
 * One Euler step in Q8.12 shift-add arithmetic, dt applied as >>14.
 * Operation order follows the arithmetic pipelines: the v-equation tree
 * left to right, then the u tree, then the threshold/reset stage.
 */
FixedStepResult fixed_step(const FixedModelConstants& fc, FixedNeuronState s, FixedPoint i_in);

struct FixedSimResult {
    SpikeTrain train;       ///< dt is 2^-14 ms per step
    bool saturated = false; ///< any saturating operation during the run
};

FixedSimResult fixed_simulate(const FixedModelConstants& fc, FixedNeuronState initial,
                              const InputSignal& input, std::size_t n_steps,
                              bool record_trace = false);

/// dt implied by the >>14 scaling, in ms.
inline constexpr double kFixedDtMs = 1.0 / 16384.0;

} // namespace pwlneuro
