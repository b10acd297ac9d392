#pragma once

#include <string>
#include <vector>

#include "flexfor/geometry.hpp"
#include "flexfor/sampling.hpp"

namespace flexfor {

struct LabelledHull {
  std::string label;
  ForPolygon polygon;
};

/// Scatter of the cloud coloured by classification, with optional hull
/// outlines on top. Output depends only on the inputs.
std::string render_svg(const LabelledCloud& cloud, const std::vector<LabelledHull>& hulls = {},
                       const std::string& title = {});

}  // namespace flexfor
