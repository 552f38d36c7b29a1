#pragma once

#include <string>
#include <vector>

#include "pwlneuro/network.hpp"
#include "pwlneuro/neuron.hpp"

namespace pwlneuro {

/// Minimal polyline plot of one or more traces (v against time).
void write_trace_svg(const std::vector<const SpikeTrain*>& trains,
                     const std::vector<std::string>& labels, const std::string& path);

/// Dot raster: neuron index against spike time.
void write_raster_svg(const RasterData& raster, const std::string& path);

} // namespace pwlneuro
