#include "pwlneuro/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "pwlneuro/rng.hpp"

namespace pwlneuro {

namespace {

// RNG stream ids: keep parameter, weight and noise draws independent.
constexpr std::uint64_t kStreamParams = 1'000'000;
constexpr std::uint64_t kStreamWeights = 2'000'000;

} // namespace

std::size_t RasterData::total_spikes() const {
    std::size_t n = 0;
    for (const auto& s : spikes_ms) n += s.size();
    return n;
}

BuiltNetwork build_network(const NetworkConfig& cfg) {
    if (cfg.n_total < 2) throw ConfigError("network: n_total must be at least 2");
    const std::size_t n = cfg.n_total;
    const std::size_t ne = cfg.n_exc();

    BuiltNetwork net;
    net.n_exc = ne;
    net.params.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        NeuronParams p;
        p.model = cfg.model;
        p.k = cfg.k;
        p.v_th = cfg.v_th;
        if (cfg.heterogeneity == Heterogeneity::UniformType) {
            p.a = cfg.uniform_a;
            p.b = cfg.uniform_b;
            p.c = cfg.uniform_c;
            p.d = cfg.uniform_d;
        } else if (i < ne) {
            const double re = rng::uniform01(cfg.seed, kStreamParams + i, 0);
            p.a = 0.02;
            p.b = 0.2;
            p.c = -65.0 + 15.0 * re * re;
            p.d = 8.0 - 6.0 * re * re;
        } else {
            const double ri = rng::uniform01(cfg.seed, kStreamParams + i, 0);
            p.a = 0.02 + 0.08 * ri;
            p.b = 0.25 - 0.05 * ri;
            p.c = -65.0;
            p.d = 2.0;
        }
        net.params[i] = p;
    }

    net.weights.n = n;
    net.weights.w.assign(n * n, 0.0);
    for (std::size_t post = 0; post < n; ++post) {
        for (std::size_t pre = 0; pre < n; ++pre) {
            if (post == pre) continue; // no self-connection
            const double u = rng::uniform01(cfg.seed, kStreamWeights + post, pre);
            net.weights.w[post * n + pre] =
                pre < ne ? cfg.exc_weight_scale * u : -cfg.inh_weight_scale * u;
        }
    }
    return net;
}

RasterData run_network(const BuiltNetwork& net, const NetworkConfig& cfg) {
    const std::size_t n = net.weights.n;
    const std::size_t ne = net.n_exc;
    const auto n_ticks = static_cast<std::size_t>(std::llround(cfg.sim_ms / cfg.dt));

    std::vector<double> v(n, cfg.v_init), u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = net.params[i].b * cfg.v_init;

    RasterData raster;
    raster.sim_ms = cfg.sim_ms;
    raster.spikes_ms.assign(n, {});
    raster.is_excitatory.assign(n, 0);
    for (std::size_t i = 0; i < ne; ++i) raster.is_excitatory[i] = 1;

    std::vector<char> fired_prev(n, 0), fired(n, 0);
    std::vector<double> input(n, 0.0);

    for (std::size_t t = 0; t < n_ticks; ++t) {
        // thalamic drive: per-neuron counter stream, identical for every model
        for (std::size_t i = 0; i < n; ++i) {
            const bool exc = i < ne;
            input[i] = (exc ? cfg.dc_exc : cfg.dc_inh) + cfg.input_bias
                     + (exc ? cfg.noise_exc : cfg.noise_inh) * rng::gaussian(cfg.seed, i, t);
        }
        // synaptic gather from last tick's spike vector
        for (std::size_t post = 0; post < n; ++post) {
            double s = 0.0;
            const double* row = &net.weights.w[post * n];
            for (std::size_t pre = 0; pre < n; ++pre)
                if (fired_prev[pre]) s += row[pre];
            input[post] += s;
        }
        // Euler update, v in two half-steps (reference network scheme)
        for (std::size_t i = 0; i < n; ++i) {
            const NeuronParams& p = net.params[i];
            double vi = v[i], ui = u[i];
            vi += 0.5 * cfg.dt * (nullcline_value(p.model, p.k, vi) - ui + input[i]);
            vi += 0.5 * cfg.dt * (nullcline_value(p.model, p.k, vi) - ui + input[i]);
            ui += cfg.dt * p.a * (p.b * vi - ui);
            if (!std::isfinite(vi) || !std::isfinite(ui))
                throw NonFiniteError("run_network: neuron " + std::to_string(i)
                                     + " became non-finite at tick " + std::to_string(t));
            if (vi >= p.v_th) {
                // spike equalized at v_th, then reset
                raster.spikes_ms[i].push_back(static_cast<double>(t) * cfg.dt);
                fired[i] = 1;
                vi = p.c;
                ui += p.d;
            } else {
                fired[i] = 0;
            }
            v[i] = vi;
            u[i] = ui;
        }
        std::swap(fired, fired_prev);
    }
    return raster;
}

double mre_percent(const RasterData& reference, const RasterData& candidate) {
    if (reference.spikes_ms.size() != candidate.spikes_ms.size())
        throw DimensionMismatchError("mre: rasters have different neuron counts");
    if (reference.total_spikes() == 0)
        throw EmptyReferenceError("mre: reference raster has no spikes");

    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < reference.spikes_ms.size(); ++i) {
        const auto& r = reference.spikes_ms[i];
        const auto& c = candidate.spikes_ms[i];
        const std::size_t matched = std::min(r.size(), c.size());
        double neuron_sum = 0.0;
        std::size_t neuron_n = 0;
        for (std::size_t s = 0; s < matched; ++s) {
            if (r[s] <= 0.0) continue; // zero denominator (spike in the first tick)
            neuron_sum += std::abs((c[s] - r[s]) / r[s]);
            ++neuron_n;
        }
        total += neuron_sum;
        count += neuron_n;
        // surplus spikes on either side: one mean per-spike error each
        const std::size_t surplus = std::max(r.size(), c.size()) - matched;
        if (surplus > 0 && neuron_n > 0) {
            total += static_cast<double>(surplus) * (neuron_sum / static_cast<double>(neuron_n));
            count += surplus;
        }
    }
    if (count == 0) return 0.0;
    return 100.0 * total / static_cast<double>(count);
}

double population_rhythm_hz(const RasterData& raster, double bin_ms) {
    if (raster.sim_ms < 1000.0)
        throw TooShortError("population_rhythm: need at least 1000 ms of data");
    if (raster.total_spikes() == 0)
        throw TooShortError("population_rhythm: raster is empty");

    const auto n_bins = static_cast<std::size_t>(raster.sim_ms / bin_ms);
    std::vector<double> rate(n_bins, 0.0);
    for (const auto& spikes : raster.spikes_ms)
        for (double t : spikes) {
            const auto b = static_cast<std::size_t>(t / bin_ms);
            if (b < n_bins) rate[b] += 1.0;
        }
    double mean = 0.0;
    for (double r : rate) mean += r;
    mean /= static_cast<double>(n_bins);
    for (double& r : rate) r -= mean;

    // magnitude spectrum, DC excluded; n_bins is small so direct evaluation is fine
    const double two_pi = 2.0 * 3.141592653589793;
    double best_mag = -1.0;
    std::size_t best_k = 1;
    for (std::size_t k = 1; k <= n_bins / 2; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < n_bins; ++t) {
            const double ph = two_pi * static_cast<double>(k * t) / static_cast<double>(n_bins);
            re += rate[t] * std::cos(ph);
            im -= rate[t] * std::sin(ph);
        }
        const double mag = re * re + im * im;
        if (mag > best_mag) {
            best_mag = mag;
            best_k = k;
        }
    }
    const double window_s = static_cast<double>(n_bins) * bin_ms / 1000.0;
    return static_cast<double>(best_k) / window_s;
}

double tune_input_bias(const NetworkConfig& reference_cfg, const NetworkConfig& candidate_cfg,
                       double lo, double hi, double step) {
    const BuiltNetwork ref_net = build_network(reference_cfg);
    const std::size_t ref_count = run_network(ref_net, reference_cfg).total_spikes();

    const BuiltNetwork cand_net = build_network(candidate_cfg);
    double best_bias = lo;
    long long best_err = -1;
    for (double bias = lo; bias <= hi + 1e-9; bias += step) {
        NetworkConfig c = candidate_cfg;
        c.input_bias = bias;
        const auto count = static_cast<long long>(run_network(cand_net, c).total_spikes());
        const long long err = std::llabs(count - static_cast<long long>(ref_count));
        if (best_err < 0 || err < best_err) {
            best_err = err;
            best_bias = bias;
        }
    }
    return best_bias;
}

void write_raster_csv(const RasterData& raster, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "neuron_id,class,spike_time_ms\n";
    char buf[96];
    for (std::size_t i = 0; i < raster.spikes_ms.size(); ++i) {
        const char* cls = raster.is_excitatory[i] ? "exc" : "inh";
        for (double t : raster.spikes_ms[i]) {
            std::snprintf(buf, sizeof buf, "%zu,%s,%.17g\n", i, cls, t);
            out << buf;
        }
    }
}

void write_rate_csv(const RasterData& raster, double bin_ms, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const auto n_bins = static_cast<std::size_t>(raster.sim_ms / bin_ms);
    std::vector<std::size_t> rate(n_bins, 0);
    for (const auto& spikes : raster.spikes_ms)
        for (double t : spikes) {
            const auto b = static_cast<std::size_t>(t / bin_ms);
            if (b < n_bins) ++rate[b];
        }
    out << "t_ms,rate\n";
    char buf[64];
    for (std::size_t b = 0; b < n_bins; ++b) {
        std::snprintf(buf, sizeof buf, "%.17g,%zu\n", static_cast<double>(b) * bin_ms, rate[b]);
        out << buf;
    }
}

} // namespace pwlneuro
