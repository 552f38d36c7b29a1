#include "pwlneuro/hw_model.hpp"

#include <deque>
#include <fstream>

#include <json.hpp>

namespace pwlneuro {

int v_stages_for(ModelKind model) {
    switch (model) {
    case ModelKind::Pwl2: return 5;
    case ModelKind::Pwl3: return 6;
    case ModelKind::Pwl4: return 7;
    case ModelKind::Original:
    case ModelKind::OriginalDiscretized: return 6;
    }
    return 6;
}

PipelineSpec PipelineSpec::plan(ModelKind model, int n_neurons, int input_stages) {
    const int vs = v_stages_for(model);
    if (n_neurons < input_stages + vs)
        throw InfeasibleError("plan_pipeline: need at least I_S + V_S = "
                              + std::to_string(input_stages + vs) + " neurons, got "
                              + std::to_string(n_neurons));
    PipelineSpec s;
    s.model = model;
    s.n_neurons = n_neurons;
    s.v_stages = vs;
    s.u_stages = vs; // u pipeline padded with delay stages to match
    s.input_stages = input_stages;
    s.delay_stages = n_neurons - input_stages - vs;
    s.v_buffer_size = n_neurons - vs;
    s.u_buffer_size = n_neurons - vs;
    s.validate();
    return s;
}

void PipelineSpec::validate() const {
    const auto fail = [](const char* what) { throw InfeasibleError(std::string("PipelineSpec: ") + what); };
    if (n_neurons != v_buffer_size + v_stages) fail("N != V_buffer_size + V_S");
    if (n_neurons != u_buffer_size + u_stages) fail("N != U_buffer_size + U_S");
    if (v_buffer_size != u_buffer_size) fail("V_buffer_size != U_buffer_size");
    if (v_stages != u_stages) fail("V_S != U_S");
    if (input_stages + delay_stages + v_stages != n_neurons) fail("I_S + D_S + V_S != N");
    if (v_buffer_size < 0 || delay_stages < 0) fail("negative buffer or delay depth");
}

ResourceReport resources(ModelKind model) {
    ResourceReport r;
    r.v_stages = v_stages_for(model);
    switch (model) {
    case ModelKind::Original:
    case ModelKind::OriginalDiscretized:
        r.adders = 6;
        r.multipliers = 1;
        r.multiplexers = 2;
        r.critical = CriticalPath::Multiply;
        break;
    case ModelKind::Pwl2:
        r.adders = 6;
        r.multipliers = 0;
        r.multiplexers = 3;
        r.critical = CriticalPath::Add;
        break;
    case ModelKind::Pwl3:
        r.adders = 8;
        r.multipliers = 0;
        r.multiplexers = 4;
        r.critical = CriticalPath::Add;
        break;
    case ModelKind::Pwl4:
        r.adders = 11;
        r.multipliers = 0;
        r.multiplexers = 5;
        r.critical = CriticalPath::Add;
        break;
    }
    return r;
}

ScheduleResult schedule_simulate(const PipelineSpec& spec,
                                 const std::vector<FixedModelConstants>& constants,
                                 const std::vector<FixedNeuronState>& initial,
                                 const std::vector<InputSignal>& inputs, std::size_t n_steps,
                                 bool record_trace, bool schedule_trace) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.n_neurons);
    if (constants.size() != n || initial.size() != n || inputs.size() != n)
        throw DimensionMismatchError("schedule_simulate: per-neuron vectors must match N");

    ScheduleResult out;
    out.trains.resize(n);
    for (auto& t : out.trains) {
        t.dt = kFixedDtMs;
        if (record_trace) t.trace.reserve(n_steps);
    }

    // In-flight pipeline entry: a neuron's step result travelling through
    // the V_S stages before re-entering the state buffer.
    struct InFlight {
        std::size_t neuron;
        FixedNeuronState state;
        bool fired;
        FixedPoint emitted;
        bool saturated;
    };

    // State buffer holds N - V_S entries once the pipeline is full; the
    // remaining V_S states are in flight. Together they circulate so each
    // neuron is stepped exactly once every N clocks.
    std::deque<std::pair<std::size_t, FixedNeuronState>> buffer;
    for (std::size_t i = 0; i < n; ++i) buffer.emplace_back(i, initial[i]);
    std::deque<InFlight> pipeline;

    std::vector<std::size_t> step_of(n, 0);
    const std::size_t total_enters = n_steps * n;
    std::size_t cycle = 0;
    std::size_t entered = 0;
    std::size_t retired = 0;

    while (retired < total_enters) {
        // results retire after V_S stages and re-enter the state buffer
        if (pipeline.size() == static_cast<std::size_t>(spec.v_stages)
            || (entered == total_enters && !pipeline.empty())) {
            const InFlight f = pipeline.front();
            pipeline.pop_front();
            buffer.emplace_back(f.neuron, f.state);
            out.saturated = out.saturated || f.saturated;
            SpikeTrain& train = out.trains[f.neuron];
            if (f.fired) train.spike_steps.push_back(step_of[f.neuron] - 1);
            if (record_trace) train.trace.push_back(decode(f.emitted));
            if (schedule_trace) out.trace.push_back({cycle, "retire", f.neuron});
            ++retired;
        }
        // one neuron enters the datapath per clock
        if (!buffer.empty() && entered < total_enters) {
            const auto [id, state] = buffer.front();
            buffer.pop_front();
            const std::size_t s = step_of[id]++;
            const FixedStepResult r = fixed_step(constants[id], state, encode(inputs[id].at(s)));
            pipeline.push_back(InFlight{id, r.state, r.fired, r.emitted_v, r.saturated});
            if (schedule_trace) out.trace.push_back({cycle, "enter", id});
            ++entered;
        }
        ++cycle;
    }
    return out;
}

void write_pipeline_spec_json(const PipelineSpec& spec, const ResourceReport& rep,
                              const std::string& path) {
    nlohmann::json j;
    j["model"] = model_name(spec.model);
    j["n_neurons"] = spec.n_neurons;
    j["v_stages"] = spec.v_stages;
    j["u_stages"] = spec.u_stages;
    j["input_stages"] = spec.input_stages;
    j["delay_stages"] = spec.delay_stages;
    j["v_buffer_size"] = spec.v_buffer_size;
    j["u_buffer_size"] = spec.u_buffer_size;
    j["word_lengths"] = {{"wb", spec.wb}, {"vb", spec.vb}, {"ub", spec.ub}};
    j["resources"] = {
        {"adders", rep.adders},
        {"multipliers", rep.multipliers},
        {"multiplexers", rep.multiplexers},
        {"critical_path", rep.critical == CriticalPath::Multiply ? "multiply" : "add"},
    };
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

void write_schedule_trace_csv(const ScheduleResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "cycle,unit,neuron_id\n";
    for (const auto& e : result.trace)
        out << e.cycle << ',' << e.unit << ',' << e.neuron << '\n';
}

} // namespace pwlneuro
