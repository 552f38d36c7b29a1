#include "pwlneuro/coeff_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "pwlneuro/fixedpoint.hpp"

namespace pwlneuro {

double err_slope(ModelKind model, const KCoeffs& k, double v) {
    const double orig = 0.08 * v + 5.0;
    double slope = 0.0;
    switch (model) {
    case ModelKind::Pwl2: slope = k.k1; break;
    case ModelKind::Pwl3: slope = 2.0 * k.k1; break;
    case ModelKind::Pwl4: slope = 2.0 * k.k2 + k.k1; break;
    default: return 0.0;
    }
    return std::abs(orig - slope);
}

double err_peak(ModelKind model, const KCoeffs& k) {
    const double vertex = nullcline_value(ModelKind::Original, {}, kPwlBreakpoint); // -16.25
    return std::abs(nullcline_value(model, k, kPwlBreakpoint) - vertex);
}

namespace {

std::size_t first_crossing(const SpikeTrain& t, std::size_t begin, std::size_t window,
                           const char* who) {
    if (t.trace.empty())
        throw InsufficientSamplesError("cost function needs recorded traces");
    const std::size_t end = window == 0 ? t.trace.size()
                                        : std::min(t.trace.size(), begin + window);
    for (const std::size_t s : t.spike_steps)
        if (s >= begin && s < end) return s;
    throw NoSpikeFoundError(std::string(who) + " trace has no threshold crossing in the window");
}

std::size_t median_isi(const SpikeTrain& t, std::size_t from) {
    std::vector<std::size_t> isi;
    std::size_t prev = 0;
    bool have = false;
    for (std::size_t s : t.spike_steps) {
        if (s < from) continue;
        if (have) isi.push_back(s - prev);
        prev = s;
        have = true;
    }
    if (isi.empty()) return 0;
    std::sort(isi.begin(), isi.end());
    return isi[isi.size() / 2];
}

} // namespace

std::pair<std::size_t, std::size_t> synchronize(const SpikeTrain& reference,
                                                const SpikeTrain& candidate,
                                                const CfConfig& cfg) {
    const std::size_t i = first_crossing(reference, cfg.settle_steps, cfg.sync_window, "reference");
    const std::size_t j = first_crossing(candidate, cfg.settle_steps, cfg.sync_window, "candidate");
    return {i, j};
}

double cost_function(const SpikeTrain& reference, const SpikeTrain& candidate,
                     const CfConfig& cfg) {
    const auto [i, j] = synchronize(reference, candidate, cfg);

    std::size_t n = cfg.sample_points;
    if (n == 0) {
        const std::size_t isi = median_isi(reference, cfg.settle_steps);
        if (isi == 0)
            throw InsufficientSamplesError("cost_function: reference has no full cycle after settle");
        n = static_cast<std::size_t>(cfg.cycles) * isi;
    }
    if (i + n > reference.trace.size() || j + n > candidate.trace.size())
        throw InsufficientSamplesError("cost_function: traces shorter than sync point + N samples");

    double acc = 0.0;
    std::size_t counted = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const double vo = reference.trace[i + s];
        if (std::abs(vo) < cfg.division_guard) continue; // singular denominator, skip
        const double vp = candidate.trace[j + s];
        const double e = (vo - vp) / vo;
        acc += e * e;
        ++counted;
    }
    if (counted == 0)
        throw InsufficientSamplesError("cost_function: every sample fell under the division guard");
    return acc / static_cast<double>(counted);
}

double cost_function_or_inf(const SpikeTrain& reference, const SpikeTrain& candidate,
                            const CfConfig& cfg) {
    try {
        return cost_function(reference, candidate, cfg);
    } catch (const NoSpikeFoundError&) {
        return kCfInfinity;
    } catch (const InsufficientSamplesError&) {
        return kCfInfinity;
    }
}

std::size_t AxisRange::points() const {
    if (step <= 0.0 || hi < lo) return 0;
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

void SearchGrid::validate(ModelKind model) const {
    if (k1.points() == 0 || k2.points() == 0)
        throw EmptyGridError("grid: k1/k2 ranges are empty (need lo <= hi, step > 0)");
    if ((model == ModelKind::Pwl3 || model == ModelKind::Pwl4) && k3.points() == 0)
        throw EmptyGridError("grid: k3 range is empty for a three-coefficient model");
}

std::size_t ErrorSurface::index(std::size_t i1, std::size_t i2, std::size_t i3) const {
    const std::size_t n2 = grid.k2.points();
    const std::size_t n3 = std::max<std::size_t>(1, grid.k3.points());
    return (i1 * n2 + i2) * n3 + i3;
}

double ErrorSurface::at(std::size_t i1, std::size_t i2, std::size_t i3) const {
    return cf[index(i1, i2, i3)];
}

namespace {

struct Dims {
    std::size_t n1, n2, n3;
    std::size_t total() const { return n1 * n2 * n3; }
};

Dims dims_of(ModelKind model, const SearchGrid& g) {
    const bool has_k3 = model == ModelKind::Pwl3 || model == ModelKind::Pwl4;
    return Dims{g.k1.points(), g.k2.points(), has_k3 ? g.k3.points() : 1};
}

KCoeffs coeffs_at(const SearchGrid& g, const Dims& d, std::size_t flat) {
    const std::size_t i3 = flat % d.n3;
    const std::size_t i2 = (flat / d.n3) % d.n2;
    const std::size_t i1 = flat / (d.n3 * d.n2);
    KCoeffs k;
    k.k1 = g.k1.at(i1);
    k.k2 = g.k2.at(i2);
    k.k3 = d.n3 > 1 ? g.k3.at(i3) : 0.0;
    return k;
}

/// Multiplicative coefficients of the datapath: the ones the hardware must
/// realize as shift-add plans (offsets are adder inputs and stay free).
std::vector<double> multiplicative_coeffs(ModelKind model, const KCoeffs& k) {
    switch (model) {
    case ModelKind::Pwl2:
    case ModelKind::Pwl3: return {k.k1};
    case ModelKind::Pwl4: return {k.k1, k.k2};
    default: return {};
    }
}

} // namespace

GridSearchResult grid_search(const NeuronParams& reference_params, NeuronState initial,
                             const InputSignal& input, double dt, std::size_t n_steps,
                             ModelKind model, const SearchGrid& grid, const CfConfig& cfg,
                             const GridSearchOptions& opt) {
    grid.validate(model);
    const Dims d = dims_of(model, grid);

    const SpikeTrain reference =
        simulate(reference_params, initial, input, dt, n_steps, /*record_trace=*/true);

    GridSearchResult res;
    res.surface.model = model;
    res.surface.grid = grid;
    res.surface.cf.assign(d.total(), kCfInfinity);

    const auto evaluate = [&](std::size_t flat) {
        NeuronParams p = reference_params;
        p.model = model;
        p.k = coeffs_at(grid, d, flat);
        try {
            const SpikeTrain cand = simulate(p, initial, input, dt, n_steps, true);
            res.surface.cf[flat] = cost_function_or_inf(reference, cand, cfg);
        } catch (const NonFiniteError&) {
            res.surface.cf[flat] = kCfInfinity;
        }
    };

    unsigned n_threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, 32));
    if (n_threads == 1 || d.total() < 64) {
        for (std::size_t f = 0; f < d.total(); ++f) evaluate(f);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t f = next.fetch_add(1);
                    if (f >= d.total()) return;
                    evaluate(f);
                }
            });
        for (auto& th : pool) th.join();
    }

    // argmin with lexicographic (k1, k2, k3) tie-break: the flat order is
    // already lexicographic, so the first strict minimum wins.
    std::size_t best = d.total();
    for (std::size_t f = 0; f < d.total(); ++f) {
        if (std::isfinite(res.surface.cf[f])
            && (best == d.total() || res.surface.cf[f] < res.surface.cf[best]))
            best = f;
    }
    if (best == d.total()) {
        res.cf_min = kCfInfinity;
        res.stable.assign(d.total(), 0);
        res.target.assign(d.total(), 0);
        return res;
    }
    res.cf_min = res.surface.cf[best];
    res.argmin = coeffs_at(grid, d, best);

    // Stable area: connected region around the argmin under factor * min.
    res.stable.assign(d.total(), 0);
    const double cut = opt.stability_factor * res.cf_min;
    std::deque<std::size_t> queue{best};
    res.stable[best] = 1;
    const auto push = [&](std::size_t f) {
        if (!res.stable[f] && res.surface.cf[f] <= cut) {
            res.stable[f] = 1;
            queue.push_back(f);
        }
    };
    while (!queue.empty()) {
        const std::size_t f = queue.front();
        queue.pop_front();
        const std::size_t i3 = f % d.n3;
        const std::size_t i2 = (f / d.n3) % d.n2;
        const std::size_t i1 = f / (d.n3 * d.n2);
        if (i1 > 0) push(f - d.n3 * d.n2);
        if (i1 + 1 < d.n1) push(f + d.n3 * d.n2);
        if (i2 > 0) push(f - d.n3);
        if (i2 + 1 < d.n2) push(f + d.n3);
        if (i3 > 0) push(f - 1);
        if (i3 + 1 < d.n3) push(f + 1);
    }

    res.target.assign(d.total(), 0);
    bool first = true;
    for (std::size_t f = 0; f < d.total(); ++f) {
        if (!res.stable[f]) continue;
        const KCoeffs k = coeffs_at(grid, d, f);
        if (first) {
            res.stable_lo = res.stable_hi = k;
            first = false;
        } else {
            res.stable_lo.k1 = std::min(res.stable_lo.k1, k.k1);
            res.stable_lo.k2 = std::min(res.stable_lo.k2, k.k2);
            res.stable_lo.k3 = std::min(res.stable_lo.k3, k.k3);
            res.stable_hi.k1 = std::max(res.stable_hi.k1, k.k1);
            res.stable_hi.k2 = std::max(res.stable_hi.k2, k.k2);
            res.stable_hi.k3 = std::max(res.stable_hi.k3, k.k3);
        }
        bool dyadic = true;
        for (double c : multiplicative_coeffs(model, k))
            dyadic = dyadic && is_shift_add_representable(c, opt.max_terms);
        if (dyadic) res.target[f] = 1;
    }
    return res;
}

void write_surface_csv(const GridSearchResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const Dims d = dims_of(r.surface.model, r.surface.grid);
    const bool has_k3 = d.n3 > 1;
    out << (has_k3 ? "k1,k2,k3,cf\n" : "k1,k2,cf\n");
    char buf[160];
    for (std::size_t f = 0; f < d.total(); ++f) {
        const KCoeffs k = coeffs_at(r.surface.grid, d, f);
        const double cf = r.surface.cf[f];
        if (has_k3)
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", k.k1, k.k2, k.k3, cf);
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", k.k1, k.k2, cf);
        out << buf;
    }
}

void write_surface_summary_json(const GridSearchResult& r, const std::string& path) {
    nlohmann::json j;
    j["model"] = model_name(r.surface.model);
    j["cf_min"] = std::isfinite(r.cf_min) ? nlohmann::json(r.cf_min) : nlohmann::json("inf");
    j["argmin"] = {{"k1", r.argmin.k1}, {"k2", r.argmin.k2}, {"k3", r.argmin.k3}};
    j["stable_area"] = {
        {"lo", {{"k1", r.stable_lo.k1}, {"k2", r.stable_lo.k2}, {"k3", r.stable_lo.k3}}},
        {"hi", {{"k1", r.stable_hi.k1}, {"k2", r.stable_hi.k2}, {"k3", r.stable_hi.k3}}},
        {"points", static_cast<std::size_t>(std::count(r.stable.begin(), r.stable.end(), 1))},
    };
    nlohmann::json targets = nlohmann::json::array();
    const Dims d = dims_of(r.surface.model, r.surface.grid);
    for (std::size_t f = 0; f < d.total(); ++f) {
        if (!r.target[f]) continue;
        const KCoeffs k = coeffs_at(r.surface.grid, d, f);
        targets.push_back({{"k1", k.k1}, {"k2", k.k2}, {"k3", k.k3}, {"cf", r.surface.cf[f]}});
    }
    j["target_area"] = targets;

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

} // namespace pwlneuro
