#include "pwlneuro/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pwlneuro {

const char* regime_name(Regime r) {
    switch (r) {
    case Regime::Resting: return "resting";
    case Regime::TonicSpiking: return "tonic-spiking";
    case Regime::Bursting: return "bursting";
    case Regime::Other: return "other";
    }
    return "?";
}

Regime classify_regime(const SpikeTrain& train, std::size_t window_begin,
                       std::size_t window_end, const ClassifyOptions& opt) {
    std::vector<double> spikes;
    for (std::size_t s : train.spike_steps)
        if (s >= window_begin && s < window_end) spikes.push_back(static_cast<double>(s));

    if (spikes.empty()) return Regime::Resting;
    if (spikes.size() < 3)
        throw WindowTooShortError("classify_regime: fewer than 3 spikes in window");

    std::vector<double> isi(spikes.size() - 1);
    for (std::size_t i = 0; i + 1 < spikes.size(); ++i) isi[i] = spikes[i + 1] - spikes[i];

    // Bimodality: split the sorted intervals at the largest consecutive ratio
    // and compare cluster means.
    std::vector<double> sorted = isi;
    std::sort(sorted.begin(), sorted.end());
    double best_ratio = 1.0;
    std::size_t split = 0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i] > 0.0) {
            const double r = sorted[i + 1] / sorted[i];
            if (r > best_ratio) {
                best_ratio = r;
                split = i + 1;
            }
        }
    }
    if (split > 0 && split < sorted.size()) {
        const double lo = std::accumulate(sorted.begin(), sorted.begin() + split, 0.0)
                        / static_cast<double>(split);
        const double hi = std::accumulate(sorted.begin() + split, sorted.end(), 0.0)
                        / static_cast<double>(sorted.size() - split);
        if (lo > 0.0 && hi / lo >= opt.burst_gap_ratio) return Regime::Bursting;
    }

    const double mean = std::accumulate(isi.begin(), isi.end(), 0.0) / static_cast<double>(isi.size());
    double var = 0.0;
    for (double x : isi) var += (x - mean) * (x - mean);
    var /= static_cast<double>(isi.size());
    const double cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
    if (cv <= opt.tonic_cv_max) return Regime::TonicSpiking;
    return Regime::Other;
}

} // namespace pwlneuro
