#pragma once

#include <string>
#include <vector>

#include "bge/tensor.hpp"

namespace bge {

// One forecast panel: the observed input, the target continuation (dashed),
// and the model prediction over the horizon.
struct ForecastTrace {
    std::string title;
    Vec input;       // n_in samples
    Vec target;      // k_out samples, drawn after the input
    Vec prediction;  // k_out samples
};

// Stacked panels, shared x axis in samples.
void write_forecast_svg(const std::string& path, const std::vector<ForecastTrace>& traces);

}  // namespace bge
