#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwlneuro/neuron.hpp"

namespace pwlneuro {

/// Analytic slope error on the excitation branch (outer linear region):
/// |d/dv f_orig(v) - d/dv f_pwl(v)| = |0.08 v + 5 - slope|, where slope is
/// k1, 2 k1 or 2 k2 + k1 for the 2/3/4-piece models.
double err_slope(ModelKind model, const KCoeffs& k, double v);

/// Vertex error |f_pwl(-62.5) - (-16.25)|: the distance between the PWL
/// nullcline's lowest point and the quadratic vertex. The reference table
/// prints the 3PWL row as k1k2(2-k3) - 16.25; its own values only reproduce
/// under the distance form used here (sign discrepancy documented).
double err_peak(ModelKind model, const KCoeffs& k);

inline constexpr double kCfInfinity = std::numeric_limits<double>::infinity();

struct CfConfig {
    std::size_t settle_steps = 0;  ///< transient discarded before sync (S)
    int cycles = 5;                ///< reference cycles compared (M)
    std::size_t sample_points = 0; ///< N; 0 derives M * median reference ISI
    std::size_t sync_window = 0;   ///< max steps searched for a spike (T); 0 = rest of trace
    double division_guard = 0.5;   ///< reference samples under this magnitude are skipped
};

/// First post-settle threshold-crossing sample index of each trace.
/// Throws NoSpikeFoundError if a trace never crosses inside the window.
std::pair<std::size_t, std::size_t> synchronize(const SpikeTrain& reference,
                                                const SpikeTrain& candidate,
                                                const CfConfig& cfg);

/// Mean squared relative trace error over N post-synchronization samples.
/// Throws InsufficientSamplesError when a trace is too short to compare.
/// A silent candidate surfaces as NoSpikeFoundError from synchronize.
double cost_function(const SpikeTrain& reference, const SpikeTrain& candidate,
                     const CfConfig& cfg);

/// As cost_function but maps NoSpikeFound to the +infinity sentinel.
double cost_function_or_inf(const SpikeTrain& reference, const SpikeTrain& candidate,
                            const CfConfig& cfg);

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;

    std::size_t points() const; ///< closed interval, endpoints included
    double at(std::size_t i) const { return lo + static_cast<double>(i) * step; }
};

struct SearchGrid {
    AxisRange k1;
    AxisRange k2;
    AxisRange k3; ///< ignored (0 points) for Pwl2

    void validate(ModelKind model) const; ///< throws EmptyGridError
};

struct GridSearchOptions {
    double stability_factor = 2.0; ///< stable area: CF <= factor * min, connected
    int max_terms = 3;             ///< dyadic filter for the target area
    unsigned threads = 0;          ///< 0 = hardware concurrency
};

struct ErrorSurface {
    ModelKind model = ModelKind::Pwl2;
    SearchGrid grid;
    std::vector<double> cf; ///< row-major over (k1, k2[, k3]); +inf where invalid

    std::size_t index(std::size_t i1, std::size_t i2, std::size_t i3 = 0) const;
    double at(std::size_t i1, std::size_t i2, std::size_t i3 = 0) const;
};

struct GridSearchResult {
    ErrorSurface surface;
    KCoeffs argmin;
    double cf_min = kCfInfinity;
    std::vector<char> stable;  ///< parallel to surface.cf
    std::vector<char> target;  ///< stable points with shift-add representable slopes
    KCoeffs stable_lo, stable_hi; ///< bounding box of the stable area
};

/**
 * Exhaustive sweep of the grid: one reference simulation, one candidate
 * simulation per point (state reset each point), CF per point. Failures at
 * individual points become +infinity entries and never abort the sweep.
 * Points are evaluated in parallel; the assembled surface is identical to
 * sequential evaluation.
 */
GridSearchResult grid_search(const NeuronParams& reference_params, NeuronState initial,
                             const InputSignal& input, double dt, std::size_t n_steps,
                             ModelKind model, const SearchGrid& grid, const CfConfig& cfg,
                             const GridSearchOptions& opt = {});

/// CSV rows k1,k2[,k3],cf.
void write_surface_csv(const GridSearchResult& r, const std::string& path);

/// {argmin, cf_min, stable-area bounding box, target-area points}.
void write_surface_summary_json(const GridSearchResult& r, const std::string& path);

} // namespace pwlneuro
