#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace flexfor {

/// Per-km cable parameters.
struct LineType {
  double r_ohm_per_km = 0.0;
  double x_ohm_per_km = 0.0;
  double c_nf_per_km = 0.0;
  double max_i_ka = 0.0;
  friend bool operator==(const LineType&, const LineType&) = default;
};

/// Two-winding transformer nameplate data.
struct TrafoType {
  double sn_mva = 0.0;
  double vn_hv_kv = 0.0;
  double vn_lv_kv = 0.0;
  double vk_percent = 0.0;
  double vkr_percent = 0.0;
  double pfe_kw = 0.0;
  double i0_percent = 0.0;
  friend bool operator==(const TrafoType&, const TrafoType&) = default;
};

/// Look up a cable in the embedded catalogue. Throws std::invalid_argument
/// naming the known types when `name` is not found.
const LineType& standard_line_params(std::string_view name);
const TrafoType& standard_trafo_params(std::string_view name);

std::vector<std::string> standard_line_names();
std::vector<std::string> standard_trafo_names();

/// Provenance string recorded in the catalogue data file.
const std::string& standard_types_source();

}  // namespace flexfor
