#include "pwlneuro/registry.hpp"

#include <array>

namespace pwlneuro {

namespace {

// Shared PWL coefficient rows. Most behaviors reuse one 3PWL set and the
// single universal 4PWL set; 2PWL varies per behavior.
constexpr KCoeffs kPwl3A{0.625, 5.8, 6.4};
constexpr KCoeffs kPwl3B{0.5, 7.0, 6.5};
constexpr KCoeffs kPwl3Bi{1.25, 12.0, 3.0};
constexpr KCoeffs kPwl4{0.375, 0.75, 11.0};

constexpr std::array<NeuronTypeInfo, 20> kRegistry{{
    {"tonic_spiking", 0.02, 0.2, -65, 6, -70, 14, {0.75, 20, 0}, kPwl3A, kPwl4},
    {"phasic_spiking", 0.02, 0.25, -65, 6, -64, 8, {0.5, 18, 0}, kPwl3A, kPwl4},
    {"tonic_bursting", 0.02, 0.2, -50, 2, -70, 15, {0.625, 20, 0}, kPwl3A, kPwl4},
    {"phasic_bursting", 0.02, 0.25, -55, 0.05, -64, 8, {0.5, 20, 0}, kPwl3B, kPwl4},
    {"mixed_mode", 0.02, 0.2, -55, 4, -70, 10, {0.5, 18, 0}, kPwl3B, kPwl4},
    {"spike_frequency_adaptation", 0.01, 0.2, -65, 8, -70, 30, {0.375, 18, 0}, kPwl3B, kPwl4},
    {"class_1", 0.02, -0.1, -55, 6, -60, 30, {0.375, 18, 0}, kPwl3B, kPwl4},
    {"class_2", 0.2, 0.26, -65, 0, -64, 9, {0.625, 18, 0}, kPwl3B, kPwl4},
    {"spike_latency", 0.02, 0.2, -65, 6, -70, 20, {0.625, 18, 0}, kPwl3B, kPwl4},
    {"subthreshold_oscillations", 0.05, 0.26, -60, 0, -62, 10, {0.875, 18, 0}, kPwl3B, kPwl4},
    {"resonator", 0.1, 0.26, -60, -1, -62, 10, {0.875, 18, 0}, kPwl3B, kPwl4},
    {"integrator", 0.02, -0.1, -55, 6, -60, 30, {0.875, 18, 0}, kPwl3B, kPwl4},
    {"rebound_spike", 0.03, 0.25, -60, 4, -64, 10, {0.875, 18, 0}, kPwl3B, kPwl4},
    {"rebound_burst", 0.03, 0.25, -52, 0, -64, 10, {0.375, 18, 0}, kPwl3B, kPwl4},
    {"threshold_variability", 0.03, 0.25, -60, 4, -64, 10, {0.375, 18, 0}, kPwl3B, kPwl4},
    {"bistability", 0.1, 0.26, -60, 0, -61, 10, {2.0, 22, 0}, kPwl3Bi, kPwl4},
    {"depolarizing_after_potential", 1.0, 0.2, -60, -21, -70, 20, {0.625, 18, 0}, kPwl3B, kPwl4},
    {"accommodation", 0.02, 1.0, -55, 4, -65, 20, {0.625, 18, 0}, kPwl3B, kPwl4},
    {"inhibition_induced_spiking", -0.02, -1.0, -60, 8, -63.8, 75, {0.625, 18, 0}, kPwl3B, kPwl4},
    {"inhibition_induced_bursting", -0.026, -1.0, -45, -2, -63.8, 75, {0.625, 18, 0}, kPwl3B, kPwl4},
}};

} // namespace

NeuronParams NeuronTypeInfo::params(ModelKind model, double v_th) const {
    NeuronParams p;
    p.model = model;
    p.a = a;
    p.b = b;
    p.c = c;
    p.d = d;
    p.v_th = v_th;
    p.k = coeffs(model);
    return p;
}

const KCoeffs& NeuronTypeInfo::coeffs(ModelKind model) const {
    switch (model) {
    case ModelKind::Pwl2: return pwl2;
    case ModelKind::Pwl3: return pwl3;
    case ModelKind::Pwl4: return pwl4;
    default: {
        static const KCoeffs none{};
        return none;
    }
    }
}

NeuronState NeuronTypeInfo::initial(ModelKind) const {
    return NeuronState{v0, b * v0};
}

std::span<const NeuronTypeInfo> neuron_type_registry() {
    return kRegistry;
}

std::optional<NeuronTypeInfo> find_neuron_type(std::string_view name) {
    for (const auto& t : kRegistry)
        if (t.name == name) return t;
    return std::nullopt;
}

} // namespace pwlneuro
