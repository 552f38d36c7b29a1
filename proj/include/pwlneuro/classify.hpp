#pragma once

#include <cstddef>
#include <string>

#include "pwlneuro/neuron.hpp"

namespace pwlneuro {

enum class Regime { Resting, TonicSpiking, Bursting, Other };

const char* regime_name(Regime r);

struct ClassifyOptions {
    double burst_gap_ratio = 3.0; ///< inter/intra-burst ISI ratio for bursting
    double tonic_cv_max = 0.2;    ///< ISI coefficient-of-variation bound for tonic
};

/**
 * Labels the firing pattern inside [window_begin, window_end) steps.
 *
 * Resting: no spikes. Bursting: the sorted inter-spike intervals split into
 * two clusters whose mean ratio reaches burst_gap_ratio. Tonic: unimodal
 * intervals with CV below tonic_cv_max. Anything else is Other.
 *
 * Throws WindowTooShortError when the window holds one or two spikes only,
 * since no spiking label can be supported there.
 */
Regime classify_regime(const SpikeTrain& train, std::size_t window_begin,
                       std::size_t window_end, const ClassifyOptions& opt = {});

} // namespace pwlneuro
