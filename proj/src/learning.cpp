#include "pwlneuro/learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pwlneuro/fixedpoint.hpp"
#include "pwlneuro/rng.hpp"

namespace pwlneuro {

std::size_t LearnerConfig::target_steps(double f_hz) const {
    return static_cast<std::size_t>(std::llround(1000.0 / (f_hz * dt)));
}

double LearnerConfig::alpha() const {
    return std::ldexp(1.0, -alpha_shift);
}

double input_current(const Pattern& pattern, const LearnerState& state, std::size_t output,
                     double i_bias) {
    if (pattern.size() != state.n_inputs || output >= state.n_outputs)
        throw DimensionMismatchError("input_current: pattern/weight dimensions disagree");
    double acc = i_bias;
    for (std::size_t i = 0; i < state.n_inputs; ++i)
        acc += pattern.bipolar(i) * state.at(i, output);
    return acc;
}

namespace {

double quantize_weight(double w) {
    bool sat = false;
    return decode(encode(w, &sat));
}

/// Simulates one output neuron over a presentation window. When `learn` is
/// set, applies the Eq-21 update at every firing event using the period
/// counter, then refreshes the drive. Returns the spike count.
std::size_t present_one(const Pattern& pattern, LearnerState& state, std::size_t output,
                        const LearnerConfig& cfg, double i_bias, std::size_t target,
                        bool learn) {
    const NeuronParams& p = cfg.neuron;
    NeuronState s{cfg.v0, p.b * cfg.v0};
    double drive = input_current(pattern, state, output, i_bias);
    const double alpha = cfg.alpha();
    const std::size_t steps = cfg.window_steps();
    std::size_t counter = 0; // steps since the last spike
    std::size_t fired = 0;

    for (std::size_t t = 0; t < steps; ++t) {
        const StepResult r = step(p, s, drive, cfg.dt);
        s = r.state;
        ++counter;
        if (r.fired) {
            ++fired;
            if (learn) {
                const double delta = alpha * (static_cast<double>(counter) - static_cast<double>(target));
                for (std::size_t i = 0; i < state.n_inputs; ++i) {
                    double w = state.at(i, output) + pattern.bipolar(i) * delta;
                    if (cfg.backend == LearnerBackend::Fixed) w = quantize_weight(w);
                    state.at(i, output) = w;
                }
                drive = input_current(pattern, state, output, i_bias);
            }
            counter = 0;
        }
    }
    return fired;
}

} // namespace

double output_frequency(const Pattern& pattern, const LearnerState& state, std::size_t output,
                        const LearnerConfig& cfg, double i_bias) {
    LearnerState scratch = state;
    const std::size_t n = present_one(pattern, scratch, output, cfg, i_bias, 0, false);
    return static_cast<double>(n) * 1000.0 / cfg.window_ms;
}

double find_firing_bias(const LearnerConfig& cfg) {
    LearnerState zero;
    zero.n_inputs = cfg.n_inputs;
    zero.n_outputs = 1;
    zero.w.assign(cfg.n_inputs, 0.0);
    Pattern blank;
    blank.rows = 1;
    blank.cols = static_cast<int>(cfg.n_inputs);
    blank.pixels.assign(cfg.n_inputs, 0);

    const auto rate = [&](double bias) {
        LearnerConfig probe = cfg;
        probe.window_ms = cfg.window_ms * 4; // longer window for a stable estimate
        return output_frequency(blank, zero, 0, probe, bias);
    };

    double lo = 0.0, hi = 2.0;
    // the bipolar blank pattern contributes -sum(w) = 0, so only the bias drives
    while (hi < 200.0 && rate(hi) < cfg.f_low) {
        lo = hi;
        hi *= 2.0;
    }
    if (hi >= 200.0) throw NoFiringError("find_firing_bias: no bias below 200 reaches f_low");
    for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rate(mid) >= cfg.f_low)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

TrainResult train(const std::vector<Pattern>& patterns, const LearnerConfig& cfg) {
    if (patterns.empty()) throw ConfigError("train: no patterns");
    std::size_t n_out = cfg.n_outputs;
    if (n_out == 0) {
        int max_label = 0;
        for (const auto& p : patterns) max_label = std::max(max_label, p.label);
        n_out = static_cast<std::size_t>(max_label) + 1;
    }
    for (const auto& p : patterns)
        if (p.size() != cfg.n_inputs)
            throw DimensionMismatchError("train: pattern size != n_inputs");

    TrainResult out;
    out.state.n_inputs = cfg.n_inputs;
    out.state.n_outputs = n_out;
    out.state.w.assign(cfg.n_inputs * n_out, 0.0);
    out.i_bias = cfg.i_bias > 0.0 ? cfg.i_bias : find_firing_bias(cfg);

    const std::size_t t_high = cfg.target_steps(cfg.f_high);
    const std::size_t t_low = cfg.target_steps(cfg.f_low);

    // fixed per-seed presentation order, round-robin over the pattern list
    std::vector<std::size_t> order(patterns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(
            rng::uniform01(cfg.seed, 42, i) * static_cast<double>(i));
        std::swap(order[i - 1], order[std::min(j, i - 1)]);
    }

    const int log_every = std::max(1, cfg.presentations / 20);
    for (int pres = 0; pres < cfg.presentations; ++pres) {
        const Pattern& pat = patterns[order[static_cast<std::size_t>(pres) % order.size()]];
        for (std::size_t j = 0; j < n_out; ++j) {
            const std::size_t target = (static_cast<int>(j) == pat.label) ? t_high : t_low;
            present_one(pat, out.state, j, cfg, out.i_bias, target, true);
        }
        if (pres % log_every == log_every - 1 || pres + 1 == cfg.presentations) {
            ConvergenceRow row;
            row.presentation = pres + 1;
            row.pattern_label = pat.label;
            for (std::size_t j = 0; j < n_out; ++j)
                row.freq_hz.push_back(output_frequency(pat, out.state, j, cfg, out.i_bias));
            out.log.push_back(std::move(row));
        }
    }
    return out;
}

EvalResult evaluate(const LearnerState& state, const std::vector<Pattern>& patterns,
                    const LearnerConfig& cfg, double i_bias) {
    EvalResult r;
    std::size_t correct = 0;
    for (const auto& pat : patterns) {
        std::vector<double> freqs(state.n_outputs);
        for (std::size_t j = 0; j < state.n_outputs; ++j)
            freqs[j] = output_frequency(pat, state, j, cfg, i_bias);
        const auto best = static_cast<int>(
            std::max_element(freqs.begin(), freqs.end()) - freqs.begin());
        if (best == pat.label) ++correct;
        r.predicted.push_back(best);
        r.freq_table.push_back(std::move(freqs));
    }
    r.accuracy = patterns.empty() ? 0.0
                                  : static_cast<double>(correct) / static_cast<double>(patterns.size());
    return r;
}

std::vector<Pattern> make_synthetic_dataset(int classes, int writers, int rows, int cols,
                                            double flip_prob, std::uint64_t seed) {
    const std::size_t n_px = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    std::vector<Pattern> out;
    for (int c = 0; c < classes; ++c) {
        Pattern base;
        base.rows = rows;
        base.cols = cols;
        base.label = c;
        base.pixels.resize(n_px);
        for (std::size_t i = 0; i < n_px; ++i)
            base.pixels[i] = rng::uniform01(seed, 500 + static_cast<std::uint64_t>(c), i) < 0.5 ? 0 : 1;
        for (int w = 0; w < writers; ++w) {
            Pattern p = base;
            const std::uint64_t stream =
                1000 + static_cast<std::uint64_t>(c) * 1000 + static_cast<std::uint64_t>(w);
            for (std::size_t i = 0; i < n_px; ++i)
                if (rng::uniform01(seed, stream, i) < flip_prob) p.pixels[i] ^= 1;
            out.push_back(std::move(p));
        }
    }
    return out;
}

Pattern load_pbm(const std::string& path, int label) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_pbm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P1") throw ConfigError("load_pbm: " + path + " is not an ASCII PBM (P1)");
    const auto next_token = [&]() -> std::string {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw ConfigError("load_pbm: truncated file " + path);
    };
    Pattern p;
    p.cols = std::stoi(next_token());
    p.rows = std::stoi(next_token());
    p.label = label;
    const std::size_t n = static_cast<std::size_t>(p.rows) * static_cast<std::size_t>(p.cols);
    p.pixels.reserve(n);
    while (p.pixels.size() < n) {
        const std::string tok = next_token();
        for (char ch : tok) {
            if (ch == '0') p.pixels.push_back(0);
            else if (ch == '1') p.pixels.push_back(1);
        }
    }
    return p;
}

std::vector<Pattern> load_manifest(const std::string& manifest_csv) {
    std::ifstream in(manifest_csv);
    if (!in) throw ConfigError("load_manifest: cannot open " + manifest_csv);
    const auto dir = std::filesystem::path(manifest_csv).parent_path();
    std::vector<Pattern> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "path,label") continue;
        const auto comma = line.find_last_of(',');
        if (comma == std::string::npos)
            throw ConfigError("load_manifest: bad row '" + line + "'");
        const std::string rel = line.substr(0, comma);
        const int label = std::stoi(line.substr(comma + 1));
        out.push_back(load_pbm((dir / rel).string(), label));
    }
    return out;
}

void save_weights_csv(const LearnerState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "n_inputs,n_outputs\n" << state.n_inputs << ',' << state.n_outputs << '\n';
    char buf[48];
    for (std::size_t i = 0; i < state.n_inputs; ++i) {
        for (std::size_t j = 0; j < state.n_outputs; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", state.at(i, j));
            out << buf << (j + 1 < state.n_outputs ? ',' : '\n');
        }
    }
}

LearnerState load_weights_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_weights_csv: cannot open " + path);
    std::string line;
    std::getline(in, line); // header
    std::getline(in, line);
    LearnerState s;
    {
        std::istringstream ss(line);
        char comma;
        ss >> s.n_inputs >> comma >> s.n_outputs;
    }
    s.w.reserve(s.n_inputs * s.n_outputs);
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) s.w.push_back(std::stod(cell));
    }
    if (s.w.size() != s.n_inputs * s.n_outputs)
        throw ConfigError("load_weights_csv: cell count mismatch in " + path);
    return s;
}

void write_convergence_csv(const TrainResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "presentation,pattern_label,output,frequency_hz\n";
    char buf[96];
    for (const auto& row : r.log)
        for (std::size_t j = 0; j < row.freq_hz.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%d,%d,%zu,%.17g\n", row.presentation,
                          row.pattern_label, j, row.freq_hz[j]);
            out << buf;
        }
}

} // namespace pwlneuro
