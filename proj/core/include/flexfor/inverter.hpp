#pragma once

#include <span>
#include <vector>

#include "flexfor/feeder.hpp"
#include "flexfor/powerflow.hpp"

namespace flexfor {

/// Normalized set-values per DER. 0.5 maps to zero power, 1 to full export
/// (P = p_inst, Q = s_max), 0 to full import.
struct SetpointVector {
  std::vector<double> p_n;
  std::vector<double> q_n;

  static SetpointVector neutral(std::size_t n_der) { return {std::vector<double>(n_der, 0.5), std::vector<double>(n_der, 0.5)}; }
  std::size_t size() const noexcept { return p_n.size(); }

  /// Flat layout [p_0 .. p_{N-1}, q_0 .. q_{N-1}] used as optimizer genome.
  std::vector<double> flatten() const;
  static SetpointVector from_flat(std::span<const double> flat);

  /// Clamp every component into [0, 1].
  void clamp();
};

struct AppliedSetpoint {
  std::vector<PowerInjection> injections;
  std::vector<bool> clipped;
};

/// Feasibility slack on the apparent power limit (kVA).
inline constexpr double kApparentPowerSlackKva = 1e-9;

std::vector<PowerInjection> denormalize(const SetpointVector& sp, const FeederModel& model);

/// Move each raw operating point to the nearest point the inverter can
/// realize: clamp P to +-p_inst, then scale (P, Q) radially onto the
/// apparent-power circle if still outside it.
AppliedSetpoint project(std::span<const PowerInjection> raw, const FeederModel& model);

/// Inverse of denormalize.
SetpointVector renormalize(const AppliedSetpoint& applied, const FeederModel& model);
SetpointVector renormalize(std::span<const PowerInjection> injections, const FeederModel& model);

}  // namespace flexfor
