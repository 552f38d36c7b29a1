// Command-line front end: single-neuron runs, coefficient search, network
// simulation, pipeline planning, and the rate-coded trainer.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwlneuro/classify.hpp"
#include "pwlneuro/coeff_search.hpp"
#include "pwlneuro/fixed_neuron.hpp"
#include "pwlneuro/hw_model.hpp"
#include "pwlneuro/learning.hpp"
#include "pwlneuro/network.hpp"
#include "pwlneuro/registry.hpp"
#include "pwlneuro/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pwlneuro;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInfeasible = 4;

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string format = "csv";
    std::string backend = "float";
    std::string config_file;
    json config; // file-provided defaults, overridden by flags
};

void load_config(GlobalOpts& g) {
    if (g.config_file.empty()) return;
    std::ifstream in(g.config_file);
    if (!in) throw ConfigError("cannot open config file " + g.config_file);
    in >> g.config;
}

// flag not set on the command line -> optional config-file default
template <typename T>
void config_default(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
    if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

ModelKind parse_model(const std::string& name) {
    const auto m = model_from_name(name);
    if (!m) throw ConfigError("unknown model '" + name + "'");
    return *m;
}

KCoeffs parse_k(const std::vector<double>& v) {
    KCoeffs k;
    if (!v.empty()) k.k1 = v[0];
    if (v.size() > 1) k.k2 = v[1];
    if (v.size() > 2) k.k3 = v[2];
    return k;
}

fs::path out_path(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return fs::path(g.out_dir) / name;
}

void write_trace_csv(const SpikeTrain& t, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << "step,t_ms,v\n";
    char buf[96];
    for (std::size_t i = 0; i < t.trace.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i,
                      static_cast<double>(i) * t.dt, t.trace[i]);
        out << buf;
    }
}

void write_spikes_csv(const SpikeTrain& t, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << "index,step,t_ms\n";
    char buf[96];
    for (std::size_t i = 0; i < t.spike_steps.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", i, t.spike_steps[i],
                      t.spike_time_ms(i));
        out << buf;
    }
}

struct NeuronArgs {
    std::string model = "original";
    std::string type = "tonic_spiking";
    std::vector<double> abcd;
    std::vector<double> k;
    double input = std::nan("");
    std::vector<double> staircase;
    double seg_ms = 500.0;
    double duration_ms = 1000.0;
    double dt = kFixedDtMs;
    std::string compare;
    bool classify = false;
    double skip_ms = 150.0;
};

SpikeTrain run_one_model(ModelKind model, const NeuronTypeInfo& type,
                         const std::vector<double>& abcd, const std::vector<double>& kflag,
                         const InputSignal& input, double dt, std::size_t steps,
                         const std::string& backend) {
    NeuronParams p = type.params(model);
    if (abcd.size() == 4) {
        p.a = abcd[0];
        p.b = abcd[1];
        p.c = abcd[2];
        p.d = abcd[3];
    }
    if (!kflag.empty()) p.k = parse_k(kflag);
    const NeuronState init{type.v0, p.b * type.v0};
    if (backend == "fixed") {
        const auto fc = FixedModelConstants::build(p);
        auto res = fixed_simulate(fc, FixedNeuronState{encode(init.v), encode(init.u)},
                                  input, steps, true);
        return std::move(res.train);
    }
    return simulate(p, init, input, dt, steps, true);
}

int cmd_neuron(const GlobalOpts& g, const NeuronArgs& a) {
    const auto type = find_neuron_type(a.type);
    if (!type) throw ConfigError("unknown neuron type '" + a.type + "'");
    const ModelKind model = parse_model(a.model);

    double dt = a.dt;
    if (g.backend == "fixed") dt = kFixedDtMs;
    const auto steps = static_cast<std::size_t>(a.duration_ms / dt);

    InputSignal input = InputSignal::constant(std::isnan(a.input) ? type->demo_input : a.input);
    std::size_t seg_steps = 0;
    if (!a.staircase.empty()) {
        seg_steps = static_cast<std::size_t>(a.seg_ms / dt);
        input = InputSignal::staircase(a.staircase, seg_steps);
    }

    const SpikeTrain train =
        run_one_model(model, *type, a.abcd, a.k, input, dt, steps, g.backend);

    write_trace_csv(train, out_path(g, "trace.csv"));
    write_spikes_csv(train, out_path(g, "spikes.csv"));

    json summary;
    summary["model"] = model_name(model);
    summary["type"] = std::string(type->name);
    summary["dt_ms"] = dt;
    summary["steps"] = steps;
    summary["spikes"] = train.count();

    if (a.classify && !a.staircase.empty()) {
        json segs = json::array();
        const auto skip = static_cast<std::size_t>(a.skip_ms / dt);
        for (std::size_t s = 0; s < a.staircase.size(); ++s) {
            const std::size_t lo = s * seg_steps;
            const std::size_t hi = std::min(steps, (s + 1) * seg_steps);
            std::string label;
            try {
                label = regime_name(classify_regime(train, lo + skip, hi));
            } catch (const WindowTooShortError&) {
                label = "other";
            }
            segs.push_back({{"current", a.staircase[s]}, {"regime", label}});
        }
        summary["segments"] = segs;
    }

    if (!a.compare.empty()) {
        const ModelKind other = parse_model(a.compare);
        const SpikeTrain cand =
            run_one_model(other, *type, a.abcd, a.k, input, dt, steps, g.backend);
        write_trace_csv(cand, out_path(g, "trace_compare.csv"));
        CfConfig cfg;
        cfg.settle_steps = static_cast<std::size_t>(200.0 / dt);
        summary["compare_model"] = model_name(other);
        summary["cf"] = cost_function_or_inf(train, cand, cfg);
        if (g.format == "svg")
            write_trace_svg({&train, &cand}, {model_name(model), model_name(other)},
                            out_path(g, "trace.svg").string());
    } else if (g.format == "svg") {
        write_trace_svg({&train}, {model_name(model)}, out_path(g, "trace.svg").string());
    }

    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct SearchArgs {
    std::string model = "pwl2";
    std::string type = "tonic_spiking";
    std::string grid = "default";
    double dt = 0.1;
    double settle_ms = 200.0;
    double duration_ms = 1000.0;
    int cycles = 5;
    double input = std::nan("");
    int max_terms = 3;
};

AxisRange parse_axis(const std::string& spec) {
    AxisRange r;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &r.lo, &r.hi, &r.step) != 3)
        throw ConfigError("bad axis '" + spec + "', expected lo:hi:step");
    return r;
}

int cmd_search(const GlobalOpts& g, const SearchArgs& a) {
    const auto type = find_neuron_type(a.type);
    if (!type) throw ConfigError("unknown neuron type '" + a.type + "'");
    const ModelKind model = parse_model(a.model);
    if (model == ModelKind::Original || model == ModelKind::OriginalDiscretized)
        throw ConfigError("search optimizes PWL coefficients; pick pwl2/pwl3/pwl4");

    SearchGrid grid;
    if (a.grid == "default") {
        grid.k1 = {0.1, 8.0, model == ModelKind::Pwl2 ? 0.05 : 0.125};
        grid.k2 = model == ModelKind::Pwl2 ? AxisRange{10.0, 25.0, 1.0}
                                           : AxisRange{0.25, 8.0, 0.125};
        grid.k3 = {0.5, 12.0, 0.5};
    } else {
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : a.grid) {
            if (ch == ',') {
                parts.push_back(cur);
                cur.clear();
            } else
                cur += ch;
        }
        parts.push_back(cur);
        if (parts.size() < 2) throw ConfigError("grid needs at least k1 and k2 axes");
        grid.k1 = parse_axis(parts[0]);
        grid.k2 = parse_axis(parts[1]);
        if (parts.size() > 2) grid.k3 = parse_axis(parts[2]);
    }

    const NeuronParams ref = type->params(ModelKind::Original);
    const NeuronState init{type->v0, ref.b * type->v0};
    const double input = std::isnan(a.input) ? type->demo_input : a.input;
    const auto steps = static_cast<std::size_t>(a.duration_ms / a.dt);

    CfConfig cfg;
    cfg.settle_steps = static_cast<std::size_t>(a.settle_ms / a.dt);
    cfg.cycles = a.cycles;

    GridSearchOptions opt;
    opt.max_terms = a.max_terms;

    const GridSearchResult res = grid_search(ref, init, InputSignal::constant(input), a.dt,
                                             steps, model, grid, cfg, opt);

    write_surface_csv(res, out_path(g, "surface.csv").string());
    write_surface_summary_json(res, out_path(g, "summary.json").string());

    json summary;
    summary["model"] = model_name(model);
    summary["type"] = std::string(type->name);
    summary["cf_min"] = std::isfinite(res.cf_min) ? json(res.cf_min) : json("inf");
    summary["argmin"] = {{"k1", res.argmin.k1}, {"k2", res.argmin.k2}, {"k3", res.argmin.k3}};
    summary["surface_csv"] = out_path(g, "surface.csv").string();
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct NetworkArgs {
    std::size_t n = 200;
    std::string model = "original";
    std::vector<double> k;
    std::string compare;
    double ms = 1000.0;
    double dt = 1.0;
    bool mre_benchmark = false;
    std::string type = "tonic_spiking";
    double bias = 0.0;
    bool tune_bias = false;
};

NetworkConfig benchmark_config(const NetworkArgs& a, std::uint64_t seed) {
    // Table-III style homogeneous net: one behavior for every neuron, DC
    // drive with small per-neuron noise so the trains stay rate-dominated.
    NetworkConfig cfg;
    cfg.n_total = a.n;
    cfg.seed = seed;
    cfg.sim_ms = a.ms;
    cfg.dt = a.dt;
    cfg.heterogeneity = Heterogeneity::UniformType;
    cfg.dc_exc = cfg.dc_inh = 5.0;
    cfg.noise_exc = 1.0;
    cfg.noise_inh = 0.5;
    cfg.exc_weight_scale = 0.1;
    cfg.inh_weight_scale = 0.2;
    return cfg;
}

int cmd_network(const GlobalOpts& g, const NetworkArgs& a) {
    NetworkConfig cfg;
    if (a.mre_benchmark) {
        cfg = benchmark_config(a, g.seed);
        const auto type = find_neuron_type(a.type);
        if (!type) throw ConfigError("unknown neuron type '" + a.type + "'");
        cfg.uniform_a = type->a;
        cfg.uniform_b = type->b;
        cfg.uniform_c = type->c;
        cfg.uniform_d = type->d;
    } else {
        cfg.n_total = a.n;
        cfg.seed = g.seed;
        cfg.sim_ms = a.ms;
        cfg.dt = a.dt;
    }
    cfg.model = parse_model(a.model);
    cfg.k = parse_k(a.k);
    if (a.k.empty() && cfg.model != ModelKind::Original
        && cfg.model != ModelKind::OriginalDiscretized) {
        const auto type = find_neuron_type(a.type);
        if (type) cfg.k = type->coeffs(cfg.model);
    }
    cfg.input_bias = a.bias;

    const BuiltNetwork net = build_network(cfg);
    const RasterData raster = run_network(net, cfg);

    write_raster_csv(raster, out_path(g, "raster.csv").string());
    write_rate_csv(raster, 5.0, out_path(g, "rate.csv").string());
    if (g.format == "svg") write_raster_svg(raster, out_path(g, "raster.svg").string());

    json summary;
    summary["n"] = cfg.n_total;
    summary["model"] = model_name(cfg.model);
    summary["seed"] = cfg.seed;
    summary["spikes"] = raster.total_spikes();
    try {
        summary["rhythm_hz"] = population_rhythm_hz(raster);
    } catch (const TooShortError&) {
        summary["rhythm_hz"] = nullptr;
    }

    if (!a.compare.empty()) {
        NetworkConfig ref_cfg = cfg;
        ref_cfg.model = parse_model(a.compare);
        ref_cfg.k = {};
        if (ref_cfg.model != ModelKind::Original
            && ref_cfg.model != ModelKind::OriginalDiscretized) {
            const auto type = find_neuron_type(a.type);
            if (type) ref_cfg.k = type->coeffs(ref_cfg.model);
        }
        ref_cfg.input_bias = 0.0;
        NetworkConfig cand_cfg = cfg;
        if (a.tune_bias) {
            cand_cfg.input_bias = tune_input_bias(ref_cfg, cand_cfg, -1.5, 4.5, 0.125);
            summary["tuned_bias"] = cand_cfg.input_bias;
        }
        const RasterData ref = run_network(build_network(ref_cfg), ref_cfg);
        const RasterData cand = run_network(build_network(cand_cfg), cand_cfg);
        summary["compare_model"] = model_name(ref_cfg.model);
        summary["mre_percent"] = mre_percent(ref, cand);
    }

    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct HwplanArgs {
    std::string model = "pwl2";
    int neurons = 30;
    int input_stages = 25;
};

int cmd_hwplan(const GlobalOpts& g, const HwplanArgs& a) {
    const ModelKind model = parse_model(a.model);
    const PipelineSpec spec = PipelineSpec::plan(model, a.neurons, a.input_stages);
    const ResourceReport rep = resources(model);
    write_pipeline_spec_json(spec, rep, out_path(g, "hwplan.json").string());

    json summary;
    summary["model"] = model_name(model);
    summary["n_neurons"] = spec.n_neurons;
    summary["v_stages"] = spec.v_stages;
    summary["delay_stages"] = spec.delay_stages;
    summary["v_buffer_size"] = spec.v_buffer_size;
    summary["adders"] = rep.adders;
    summary["multipliers"] = rep.multipliers;
    summary["multiplexers"] = rep.multiplexers;
    summary["critical_path"] = rep.critical == CriticalPath::Multiply ? "multiply" : "add";
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct TrainArgs {
    std::string manifest;
    int classes = 5;
    int writers = 29;
    int rows = 20, cols = 16;
    double flip = 0.03;
    int presentations = 500;
    int alpha_shift = 14;
    double window_ms = 250.0;
    double dt = 0.5;
};

int cmd_train(const GlobalOpts& g, const TrainArgs& a) {
    std::vector<Pattern> patterns;
    if (!a.manifest.empty())
        patterns = load_manifest(a.manifest);
    else
        patterns = make_synthetic_dataset(a.classes, a.writers, a.rows, a.cols, a.flip, g.seed);
    if (patterns.empty()) throw ConfigError("train: dataset is empty");

    LearnerConfig cfg;
    cfg.n_inputs = patterns.front().size();
    cfg.alpha_shift = a.alpha_shift;
    cfg.presentations = a.presentations;
    cfg.window_ms = a.window_ms;
    cfg.dt = a.dt;
    cfg.seed = g.seed;
    cfg.backend = g.backend == "fixed" ? LearnerBackend::Fixed : LearnerBackend::Float;

    const TrainResult res = train(patterns, cfg);
    save_weights_csv(res.state, out_path(g, "weights.csv").string());
    write_convergence_csv(res, out_path(g, "convergence.csv").string());

    json summary;
    summary["patterns"] = patterns.size();
    summary["outputs"] = res.state.n_outputs;
    summary["i_bias"] = res.i_bias;
    summary["weights_csv"] = out_path(g, "weights.csv").string();
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct EvalArgs {
    std::string weights = "weights.csv";
    std::string manifest;
    int classes = 5;
    int writers = 10;
    int rows = 20, cols = 16;
    double flip = 0.03;
    double i_bias = 0.0;
    double window_ms = 250.0;
    double dt = 0.5;
    std::uint64_t dataset_seed = 9001;
};

int cmd_eval(const GlobalOpts& g, const EvalArgs& a) {
    const LearnerState state = load_weights_csv(a.weights);
    std::vector<Pattern> patterns;
    if (!a.manifest.empty())
        patterns = load_manifest(a.manifest);
    else
        patterns =
            make_synthetic_dataset(a.classes, a.writers, a.rows, a.cols, a.flip, a.dataset_seed);

    LearnerConfig cfg;
    cfg.n_inputs = state.n_inputs;
    cfg.window_ms = a.window_ms;
    cfg.dt = a.dt;
    cfg.seed = g.seed;

    const double bias = a.i_bias > 0 ? a.i_bias : find_firing_bias(cfg);
    const EvalResult res = evaluate(state, patterns, cfg, bias);

    json summary;
    summary["patterns"] = patterns.size();
    summary["accuracy"] = res.accuracy;
    json per_class = json::object();
    for (std::size_t i = 0; i < patterns.size(); ++i)
        per_class[std::to_string(patterns[i].label)].push_back(res.predicted[i]);
    summary["predictions_by_class"] = per_class;
    std::cout << summary.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PWL spiking-neuron toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "global RNG seed");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--format", g.format, "csv|json|svg")->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--backend", g.backend, "float|fixed")->check(CLI::IsMember({"float", "fixed"}));
    app.add_option("--config", g.config_file, "JSON config file (flags override)");

    NeuronArgs na;
    auto* neuron = app.add_subcommand("neuron", "single-neuron simulation");
    neuron->add_option("--model", na.model, "original|pwl2|pwl3|pwl4|original_discretized");
    neuron->add_option("--type", na.type, "registry behavior name");
    neuron->add_option("--params", na.abcd, "override a,b,c,d")->expected(4)->delimiter(',');
    neuron->add_option("--k", na.k, "override k1,k2[,k3]")->delimiter(',');
    auto* iopt = neuron->add_option("--i", na.input, "constant input current");
    neuron->add_option("--staircase", na.staircase, "staircase current levels")->delimiter(',');
    neuron->add_option("--seg-ms", na.seg_ms, "staircase segment length (ms)");
    neuron->add_option("--duration", na.duration_ms, "run length (ms)");
    neuron->add_option("--dt", na.dt, "integration step (ms)");
    neuron->add_option("--compare", na.compare, "second model to run and score with CF");
    neuron->add_flag("--classify", na.classify, "classify regimes per staircase segment");
    (void)iopt;

    SearchArgs sa;
    auto* search = app.add_subcommand("search", "grid search for PWL coefficients");
    search->add_option("--model", sa.model);
    search->add_option("--type", sa.type);
    search->add_option("--grid", sa.grid, "'default' or k1lo:hi:step,k2lo:hi:step[,k3...]");
    search->add_option("--dt", sa.dt);
    search->add_option("--settle-ms", sa.settle_ms);
    search->add_option("--duration", sa.duration_ms);
    search->add_option("--cycles", sa.cycles);
    search->add_option("--input", sa.input, "comparison current (default: type demo current)");
    search->add_option("--max-terms", sa.max_terms, "dyadic filter for the target area");

    NetworkArgs nw;
    auto* network = app.add_subcommand("network", "random network simulation");
    network->add_option("--n", nw.n);
    network->add_option("--model", nw.model);
    network->add_option("--k", nw.k, "k1,k2[,k3]")->delimiter(',');
    network->add_option("--compare", nw.compare, "reference model for MRE");
    network->add_option("--ms", nw.ms);
    network->add_option("--dt", nw.dt);
    network->add_flag("--mre-benchmark", nw.mre_benchmark,
                      "homogeneous-type benchmark configuration");
    network->add_option("--type", nw.type, "behavior for --mre-benchmark");
    network->add_option("--bias", nw.bias, "input regulation bias for the candidate model");
    network->add_flag("--tune-bias", nw.tune_bias, "rate-match the candidate bias first");

    HwplanArgs hw;
    auto* hwplan = app.add_subcommand("hwplan", "pipeline scheduling plan + resources");
    hwplan->add_option("--model", hw.model);
    hwplan->add_option("--neurons", hw.neurons);
    hwplan->add_option("--is", hw.input_stages, "input-computation pipeline stages");

    TrainArgs ta;
    auto* train_cmd = app.add_subcommand("train", "rate-coded supervised training");
    train_cmd->add_option("--manifest", ta.manifest, "CSV manifest (path,label) of PBM bitmaps");
    train_cmd->add_option("--classes", ta.classes);
    train_cmd->add_option("--writers", ta.writers);
    train_cmd->add_option("--flip", ta.flip, "synthetic writer pixel-flip probability");
    train_cmd->add_option("--presentations", ta.presentations);
    train_cmd->add_option("--alpha-shift", ta.alpha_shift, "alpha = 2^-shift");
    train_cmd->add_option("--window-ms", ta.window_ms);
    train_cmd->add_option("--dt", ta.dt);

    EvalArgs ea;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate trained weights");
    eval_cmd->add_option("--weights", ea.weights);
    eval_cmd->add_option("--manifest", ea.manifest);
    eval_cmd->add_option("--classes", ea.classes);
    eval_cmd->add_option("--writers", ea.writers);
    eval_cmd->add_option("--flip", ea.flip);
    eval_cmd->add_option("--i-bias", ea.i_bias);
    eval_cmd->add_option("--dataset-seed", ea.dataset_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        load_config(g);
        if (!g.config.is_null()) {
            config_default(app.get_option("--seed"), g.config, "seed", g.seed);
            config_default(app.get_option("--out"), g.config, "out", g.out_dir);
            config_default(app.get_option("--format"), g.config, "format", g.format);
            config_default(app.get_option("--backend"), g.config, "backend", g.backend);
        }
        if (neuron->parsed()) return cmd_neuron(g, na);
        if (search->parsed()) return cmd_search(g, sa);
        if (network->parsed()) return cmd_network(g, nw);
        if (hwplan->parsed()) return cmd_hwplan(g, hw);
        if (train_cmd->parsed()) return cmd_train(g, ta);
        if (eval_cmd->parsed()) return cmd_eval(g, ea);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const NonFiniteError& e) {
        std::cerr << "numeric: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const NotRepresentableError& e) {
        std::cerr << "numeric: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "config: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
