#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pwlneuro/fixed_neuron.hpp"

namespace pwlneuro {

/**
 * Static description of one shared-datapath neuron pack: pipeline stage
 * counts, state buffer depths and word lengths. The synchronization
 * identities
 *
 *   N  = V_buffer_size + V_S = U_buffer_size + U_S
 *   V_buffer_size = U_buffer_size,  V_S = U_S
 *   I_S + D_S + V_S = N
 *
 * are enforced at construction and re-checked by validate().
 */
struct PipelineSpec {
    ModelKind model = ModelKind::Pwl2;
    int n_neurons = 0;
    int v_stages = 0;
    int u_stages = 0;
    int input_stages = 0;
    int delay_stages = 0;
    int v_buffer_size = 0;
    int u_buffer_size = 0;
    int wb = 20, vb = 20, ub = 20;

    /// Throws InfeasibleError when n_neurons is smaller than the minimum
    /// pack size input_stages + V_S(model).
    static PipelineSpec plan(ModelKind model, int n_neurons, int input_stages);

    /// Throws InfeasibleError when the synchronization identities fail.
    void validate() const;
};

/// v-pipeline depth per model (the 2/3/4-piece rows of the stage table;
/// the quadratic datapath is bound to six stages as an internal choice).
int v_stages_for(ModelKind model);

enum class CriticalPath { Multiply, Add };

/// Minimum arithmetic resources of the v-equation scheduling, plus the
/// critical-path class: the quadratic model is limited by its multiplier,
/// every PWL model by an adder.
struct ResourceReport {
    int adders = 0;
    int multipliers = 0;
    int multiplexers = 0;
    CriticalPath critical = CriticalPath::Add;
    int v_stages = 0;
};

ResourceReport resources(ModelKind model);

/// One row of the schedule trace: which neuron occupied which unit when.
struct ScheduleEvent {
    std::size_t cycle;
    const char* unit; ///< "enter" or "retire"
    std::size_t neuron;
};

struct ScheduleResult {
    std::vector<SpikeTrain> trains; ///< per neuron, dt = 2^-14 ms
    bool saturated = false;
    std::vector<ScheduleEvent> trace; ///< filled only when tracing is on
};

/**
 * Cycle-by-cycle emulation of the shared pipeline: one neuron enters the
 * datapath per clock, its state re-emerges V_S clocks later and circulates
 * through the buffers. Produces spike trains identical to n_neurons
 * independent fixed-point simulations; that equivalence is the module's
 * correctness requirement, not an accident.
 */
ScheduleResult schedule_simulate(const PipelineSpec& spec,
                                 const std::vector<FixedModelConstants>& constants,
                                 const std::vector<FixedNeuronState>& initial,
                                 const std::vector<InputSignal>& inputs, std::size_t n_steps,
                                 bool record_trace = false, bool schedule_trace = false);

void write_pipeline_spec_json(const PipelineSpec& spec, const ResourceReport& rep,
                              const std::string& path);
void write_schedule_trace_csv(const ScheduleResult& result, const std::string& path);

} // namespace pwlneuro
