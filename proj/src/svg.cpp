#include "pwlneuro/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "pwlneuro/errors.hpp"

namespace pwlneuro {

namespace {

constexpr int kW = 1000;
constexpr int kH = 360;
constexpr int kPad = 40;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

} // namespace

void write_trace_svg(const std::vector<const SpikeTrain*>& trains,
                     const std::vector<std::string>& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");

    double vmin = 1e300, vmax = -1e300;
    std::size_t n = 0;
    for (const auto* t : trains) {
        n = std::max(n, t->trace.size());
        for (double v : t->trace) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    if (n == 0 || vmin >= vmax) {
        vmin = -80;
        vmax = 40;
        n = 1;
    }

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
        << "' viewBox='0 0 " << kW << ' ' << kH << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n";

    const double sx = static_cast<double>(kW - 2 * kPad) / static_cast<double>(n);
    const double sy = static_cast<double>(kH - 2 * kPad) / (vmax - vmin);
    char buf[64];
    for (std::size_t k = 0; k < trains.size(); ++k) {
        const auto& tr = trains[k]->trace;
        if (tr.empty()) continue;
        out << "<polyline fill='none' stroke='" << kColors[k % 5] << "' stroke-width='1' points='";
        // decimate long traces: at most ~4 points per output pixel
        const std::size_t stride = std::max<std::size_t>(1, tr.size() / (4 * (kW - 2 * kPad)));
        for (std::size_t i = 0; i < tr.size(); i += stride) {
            const double x = kPad + static_cast<double>(i) * sx;
            const double y = kH - kPad - (tr[i] - vmin) * sy;
            std::snprintf(buf, sizeof buf, "%.1f,%.1f ", x, y);
            out << buf;
        }
        out << "'/>\n";
        if (k < labels.size())
            out << "<text x='" << kPad + 6 << "' y='" << kPad + 14 * (k + 1) << "' fill='"
                << kColors[k % 5] << "' font-size='12'>" << labels[k] << "</text>\n";
    }
    out << "</svg>\n";
}

void write_raster_svg(const RasterData& raster, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const std::size_t n = raster.spikes_ms.size();
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
        << "' viewBox='0 0 " << kW << ' ' << kH << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n";
    if (n == 0 || raster.sim_ms <= 0) {
        out << "</svg>\n";
        return;
    }
    const double sx = static_cast<double>(kW - 2 * kPad) / raster.sim_ms;
    const double sy = static_cast<double>(kH - 2 * kPad) / static_cast<double>(n);
    char buf[96];
    for (std::size_t i = 0; i < n; ++i) {
        const char* color = raster.is_excitatory[i] ? "#1f77b4" : "#d62728";
        for (double t : raster.spikes_ms[i]) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx='%.1f' cy='%.1f' r='1' fill='%s'/>\n",
                          kPad + t * sx, kH - kPad - static_cast<double>(i) * sy, color);
            out << buf;
        }
    }
    out << "</svg>\n";
}

} // namespace pwlneuro
