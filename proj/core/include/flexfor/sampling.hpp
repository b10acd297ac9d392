#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "flexfor/feeder.hpp"
#include "flexfor/geometry.hpp"
#include "flexfor/inverter.hpp"
#include "flexfor/powerflow.hpp"
#include "flexfor/random.hpp"

namespace flexfor {

enum class PointLabel { feasible, voltage, current, both, non_converged };

std::string_view to_string(PointLabel label) noexcept;
std::optional<PointLabel> parse_point_label(std::string_view text) noexcept;

/// One interconnection power flow with its feasibility class.
struct CloudPoint {
  double p_kw = 0.0;
  double q_kvar = 0.0;
  PointLabel label = PointLabel::feasible;
  friend bool operator==(const CloudPoint&, const CloudPoint&) = default;
};

struct LabelledCloud {
  std::vector<CloudPoint> points;
  std::size_t feasible_count = 0;
  std::uint64_t pf_calls = 0;

  std::vector<Point2> feasible_points() const;
};

inline constexpr double kDefaultDirichletAlpha = 1.2;

struct DirichletConfig {
  /// One concentration per DER; a single entry is broadcast to all DERs.
  std::vector<double> alpha{kDefaultDirichletAlpha};
  std::size_t sample_size = 10000;
  std::uint64_t seed = 0;

  /// Concentration vector expanded to k entries. Throws on a non-positive
  /// entry or a length that is neither 1 nor k.
  std::vector<double> alpha_for(std::size_t k) const;
};

/// Project, solve and classify one normalized setpoint.
CloudPoint evaluate_setpoint(const FeederModel& model, const SetpointVector& sp);

/// Baseline: every p_n, q_n independently uniform on [0, 1].
LabelledCloud sample_uniform(const FeederModel& model, std::size_t n, std::uint64_t seed, unsigned jobs = 1);

/// Shares x ~ Dir(alpha) of order k: x_i >= 0, sum x_i = 1.
std::vector<double> sample_dirichlet_shares(std::size_t k, std::span<const double> alpha, Rng& rng);

/// Stage one draws aggregate targets a_p, a_q ~ U[0, 1]; stage two splits
/// them over the k units with Dirichlet shares, p_n,i = a_p * k * x_i,
/// clamped to [0, 1]. No subset reflection is applied here.
SetpointVector draw_two_stage_setpoint(std::size_t k, std::span<const double> alpha, Rng& rng);

/// Reflection applied to sample i: subset i % 4 is
/// 0 unchanged, 1 p_n -> 1 - p_n, 2 q_n -> 1 - q_n, 3 both.
void apply_subset_reflection(SetpointVector& sp, std::size_t subset) noexcept;

/// Apply the four-subset reflection to a whole sample (subset = index % 4).
void transform_subsets(std::span<SetpointVector> sample) noexcept;

/// The normalized setpoints the two-stage sampler feeds to the grid, in order.
std::vector<SetpointVector> dirichlet_setpoints(std::size_t k, const DirichletConfig& cfg, std::size_t first,
                                                std::size_t count);

LabelledCloud sample_dirichlet_two_stage(const FeederModel& model, const DirichletConfig& cfg, unsigned jobs = 1);

/// Convex hull of the feasible points of a cloud. Throws DegenerateRegion.
ForPolygon feasible_hull(const LabelledCloud& cloud);

}  // namespace flexfor
