#pragma once

#include <string>
#include <utility>
#include <vector>

#include "savopt/trace.hpp"

namespace savopt {

/// Writes a static SVG chart of loss vs iteration on a log y scale, one
/// polyline and legend entry per labeled trace. Traces containing divergence
/// are clipped at their last finite value; nonpositive losses are floored for
/// the log scale.
void render_plot(const std::vector<std::pair<std::string, Trace>>& traces,
                 const std::string& path);

}  // namespace savopt
