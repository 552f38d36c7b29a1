#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pwlneuro/neuron.hpp"

namespace pwlneuro {

/// How per-neuron parameters are assigned.
enum class Heterogeneity {
    CorticalRecipe, ///< RS-leaning excitatory / FS-leaning inhibitory smear
    UniformType,    ///< every neuron gets the same (a, b, c, d)
};

struct NetworkConfig {
    std::size_t n_total = 200;
    double exc_ratio = 0.8; ///< 4:1 excitatory to inhibitory
    std::uint64_t seed = 1;
    double sim_ms = 1000.0;
    double dt = 1.0; ///< network tick (ms); v integrates in two half-steps

    ModelKind model = ModelKind::Original;
    KCoeffs k;

    Heterogeneity heterogeneity = Heterogeneity::CorticalRecipe;
    double uniform_a = 0.02, uniform_b = 0.2, uniform_c = -65.0, uniform_d = 6.0;

    double noise_exc = 5.0;  ///< thalamic noise sigma, excitatory neurons
    double noise_inh = 2.0;  ///< thalamic noise sigma, inhibitory neurons
    double dc_exc = 0.0;     ///< constant drive added to every excitatory neuron
    double dc_inh = 0.0;
    double input_bias = 0.0; ///< per-model input regulation (rate matching)

    double exc_weight_scale = 0.5; ///< U(0, scale) weights from excitatory neurons
    double inh_weight_scale = 1.0; ///< U(-scale, 0) from inhibitory, stronger in magnitude

    double v_th = kDefaultThreshold;
    double v_init = -65.0;

    std::size_t n_exc() const { return static_cast<std::size_t>(n_total * exc_ratio); }
};

/// Dense synaptic weights; row = postsynaptic neuron. Diagonal is zero.
struct WeightMatrix {
    std::size_t n = 0;
    std::vector<double> w; ///< n * n, row-major

    double at(std::size_t post, std::size_t pre) const { return w[post * n + pre]; }
};

struct BuiltNetwork {
    WeightMatrix weights;
    std::vector<NeuronParams> params;
    std::size_t n_exc = 0;
};

/// Spike times per neuron (ms), plus class labels.
struct RasterData {
    std::vector<std::vector<double>> spikes_ms;
    std::vector<char> is_excitatory;
    double sim_ms = 0.0;

    std::size_t total_spikes() const;
};

/// Deterministic construction from the seed: 4:1 split, per-class parameter
/// smear (cortical recipe) or one shared parameter set, uniform random
/// weights with the inhibitory columns negative and scaled stronger.
BuiltNetwork build_network(const NetworkConfig& cfg);

/// Per tick: per-neuron thalamic noise (counter RNG), synaptic input from the
/// previous tick's spike vector, Euler update (v in two half-steps, matching
/// the reference network code), threshold/reset with spikes equalized at v_th.
RasterData run_network(const BuiltNetwork& net, const NetworkConfig& cfg);

/// Eq-10 style mean relative spike-timing error, in percent. Spikes are
/// matched i-th to i-th per neuron; denominators are the absolute reference
/// spike times; surplus spikes on either side add the neuron's mean per-spike
/// error each. Throws EmptyReferenceError when the reference raster is empty.
double mre_percent(const RasterData& reference, const RasterData& candidate);

/// Dominant nonzero frequency (Hz) of the binned population rate.
/// Throws TooShortError for runs under 1000 ms or empty rasters.
double population_rhythm_hz(const RasterData& raster, double bin_ms = 5.0);

/**
 * Input regulation: finds the per-model bias that matches the candidate
 * model's total spike count to the reference model's on the same network
 * and noise (the reference run uses bias 0). Scans [lo, hi] in the given
 * step and returns the best match, ties toward the smaller bias.
 */
double tune_input_bias(const NetworkConfig& reference_cfg, const NetworkConfig& candidate_cfg,
                       double lo, double hi, double step);

void write_raster_csv(const RasterData& raster, const std::string& path);
void write_rate_csv(const RasterData& raster, double bin_ms, const std::string& path);

} // namespace pwlneuro
