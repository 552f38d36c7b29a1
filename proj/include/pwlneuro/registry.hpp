#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "pwlneuro/neuron.hpp"

namespace pwlneuro {

/**
 * One canonical firing behavior: the (a, b, c, d) set, its usual initial
 * voltage, a constant demo current that elicits the behavior under the
 * quadratic model, and the per-behavior PWL coefficients.
 *
 * The (a, b, c, d) values are the standard twenty-behavior sets from
 * Izhikevich's "Simple model of spiking neurons" (2003) and "Which model
 * to use for cortical spiking neurons?" (2004); they are shipped here as
 * external provenance and can be overridden per run. The demo currents
 * are chosen so that every model variant fires under a constant drive
 * (the reference figures use steps, ramps and pulses instead, which do
 * not suit waveform comparison).
 */
struct NeuronTypeInfo {
    std::string_view name;
    double a, b, c, d;
    double v0;         ///< initial membrane potential (mV)
    double demo_input; ///< constant comparison/demo current
    KCoeffs pwl2;      ///< per-type 2PWL coefficients
    KCoeffs pwl3;      ///< per-type 3PWL coefficients
    KCoeffs pwl4;      ///< per-type 4PWL coefficients

    NeuronParams params(ModelKind model, double v_th = kDefaultThreshold) const;
    const KCoeffs& coeffs(ModelKind model) const;
    NeuronState initial(ModelKind model) const;
};

/// All twenty canonical behaviors, in the reference row order.
std::span<const NeuronTypeInfo> neuron_type_registry();

std::optional<NeuronTypeInfo> find_neuron_type(std::string_view name);

} // namespace pwlneuro
