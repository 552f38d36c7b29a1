#include "pwlneuro/neuron.hpp"

#include <algorithm>

namespace pwlneuro {

const char* model_name(ModelKind m) {
    switch (m) {
    case ModelKind::Original: return "original";
    case ModelKind::Pwl2: return "pwl2";
    case ModelKind::Pwl3: return "pwl3";
    case ModelKind::Pwl4: return "pwl4";
    case ModelKind::OriginalDiscretized: return "original_discretized";
    }
    return "?";
}

std::optional<ModelKind> model_from_name(const std::string& name) {
    if (name == "original") return ModelKind::Original;
    if (name == "pwl2") return ModelKind::Pwl2;
    if (name == "pwl3") return ModelKind::Pwl3;
    if (name == "pwl4") return ModelKind::Pwl4;
    if (name == "original_discretized") return ModelKind::OriginalDiscretized;
    return std::nullopt;
}

void NeuronParams::validate() const {
    if (!(v_th > c))
        throw ConfigError("NeuronParams: reset voltage c must lie below v_th");
    if (a == 0.0)
        throw ConfigError("NeuronParams: recovery time scale a must be nonzero");
    if (model == ModelKind::Pwl2 || model == ModelKind::Pwl3 || model == ModelKind::Pwl4) {
        if (!(k.k1 > 0.0) || !(k.k2 > 0.0))
            throw ConfigError("NeuronParams: PWL models need k1 > 0 and k2 > 0");
        if ((model == ModelKind::Pwl3 || model == ModelKind::Pwl4) && !(k.k3 > 0.0))
            throw ConfigError("NeuronParams: 3/4PWL models need k3 > 0");
    }
}

InputSignal InputSignal::constant(double value) {
    InputSignal s;
    s.kind_ = Kind::Constant;
    s.value_ = value;
    return s;
}

InputSignal InputSignal::staircase(std::vector<double> levels, std::size_t seg_steps) {
    if (levels.empty() || seg_steps == 0)
        throw ConfigError("InputSignal::staircase needs levels and a positive segment length");
    InputSignal s;
    s.kind_ = Kind::Staircase;
    s.levels_ = std::move(levels);
    s.seg_steps_ = seg_steps;
    return s;
}

InputSignal InputSignal::samples(std::vector<double> values) {
    InputSignal s;
    s.kind_ = Kind::Samples;
    s.levels_ = std::move(values);
    return s;
}

double InputSignal::at(std::size_t step) const {
    switch (kind_) {
    case Kind::Constant:
        return value_;
    case Kind::Staircase: {
        std::size_t seg = step / seg_steps_;
        if (seg >= levels_.size()) seg = levels_.size() - 1;
        return levels_[seg];
    }
    case Kind::Samples:
        if (step >= levels_.size()) return levels_.empty() ? 0.0 : levels_.back();
        return levels_[step];
    }
    return 0.0;
}

double nullcline_value(ModelKind model, const KCoeffs& k, double v) {
    const double x = v - kPwlBreakpoint; // v + 62.5
    switch (model) {
    case ModelKind::Original:
        return 0.04 * v * v + 5.0 * v + 140.0;
    case ModelKind::OriginalDiscretized:
        return v * v / 32.0 + 4.0 * v + 140.0;
    case ModelKind::Pwl2:
        return k.k1 * std::abs(x) - k.k2;
    case ModelKind::Pwl3:
        return k.k1 * (std::abs(x + k.k2) + std::abs(x - k.k2)) - k.k3 * k.k2 * k.k1;
    case ModelKind::Pwl4:
        return k.k2 * (std::abs(x + k.k3) + std::abs(x - k.k3)) + k.k1 * std::abs(x)
             - 4.0 * k.k2 * k.k3;
    }
    return 0.0;
}

std::pair<double, double> derivative(const NeuronParams& p, const NeuronState& s, double i_in) {
    const double dv = nullcline_value(p.model, p.k, s.v) - s.u + i_in;
    const double du = p.a * (p.b * s.v - s.u);
    return {dv, du};
}

StepResult step(const NeuronParams& p, const NeuronState& s, double i_in, double dt) {
    const auto [dv, du] = derivative(p, s, i_in);
    double v = s.v + dt * dv;
    double u = s.u + dt * du;
    if (!std::isfinite(v) || !std::isfinite(u))
        throw NonFiniteError("step: state became non-finite (dt too large or divergent parameters)");

    StepResult r;
    if (v >= p.v_th) {
        r.fired = true;
        r.emitted_v = p.v_th; // spike equalization
        r.state = NeuronState{p.c, u + p.d};
    } else {
        r.fired = false;
        r.emitted_v = v;
        r.state = NeuronState{v, u};
    }
    return r;
}

SpikeTrain simulate(const NeuronParams& p, NeuronState state, const InputSignal& input,
                    double dt, std::size_t n_steps, bool record_trace) {
    SpikeTrain train;
    train.dt = dt;
    if (record_trace) train.trace.reserve(n_steps);

    for (std::size_t s = 0; s < n_steps; ++s) {
        const StepResult r = step(p, state, input.at(s), dt);
        state = r.state;
        if (r.fired) train.spike_steps.push_back(s);
        if (record_trace) train.trace.push_back(r.emitted_v);
    }
    return train;
}

} // namespace pwlneuro
