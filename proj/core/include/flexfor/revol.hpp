#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "flexfor/feeder.hpp"
#include "flexfor/geometry.hpp"
#include "flexfor/random.hpp"

namespace flexfor {

/// Hyperparameters of the multi-part evolution strategy. Defaults are the
/// best configuration found by the randomized search on the 9-node feeder.
struct RevolConfig {
  int population_size = 37;
  int elite_size = 3;
  int max_epochs = 16245;
  int max_no_success_epochs = 9281;
  int t = 5338;  ///< PT1 averaging horizon of the success rate
  int start_ttl = 763;
  double gradient_weight = 2.87;
  double success_weight = 2.18;
  double target_success = 0.29;
  double max_scatter_relative = 1.74;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
  friend bool operator==(const RevolConfig&, const RevolConfig&) = default;
};

/// [fitness, largest voltage-band violation, largest current-limit violation]
using Restrictions = std::array<double, 3>;

struct Individual {
  std::vector<double> params;   ///< normalized set-values, flat [p..., q...]
  std::vector<double> scatter;  ///< per-component mutation half-width
  Restrictions restrictions{};
  int ttl = 0;
  Point2 interchange;  ///< IPF of the applied setpoint (grid problems only)
};

/// Comparison operator of the strategy: violations first, compared
/// lexicographically by index; fitness (higher wins) only breaks ties.
bool is_better_than(const Restrictions& a, const Restrictions& b) noexcept;
inline bool is_better_than(const Individual& a, const Individual& b) noexcept {
  return is_better_than(a.restrictions, b.restrictions);
}

/// Time-discrete first-order lag: u if t == 0, else y + (u - y) / t.
double pt1(double y, double u, double t) noexcept;

/// Objective direction (alpha, beta) of max(alpha * P + beta * Q).
struct Direction {
  int alpha = 1;
  int beta = 0;
  friend bool operator==(const Direction&, const Direction&) = default;
};

/// The symmetric compass {(1,0), (1,1), (0,1), (-1,1), (-1,0), (-1,-1), (0,-1), (1,-1)}.
std::vector<Direction> compass_directions();

/// The direction list exactly as printed in the original method
/// description: (-1,0) appears twice and (0,-1) is missing.
std::vector<Direction> printed_directions();

std::string to_string(Direction d);

/// Fills `restrictions` (and may rewrite `params`) for one candidate.
using Objective = std::function<void(Individual&)>;

struct EpochRecord {
  int epoch = 0;
  Restrictions best{};
};

struct OptimizationResult {
  Individual best;
  int epochs_used = 0;
  std::uint64_t evaluations = 0;
  std::vector<EpochRecord> trace;  ///< one entry per best-so-far improvement
};

/// Lower bound on any scatter component.
inline constexpr double kMinScatter = 1e-6;

/// Run the strategy on a `dim`-dimensional problem over [0, 1]^dim. Every
/// epoch creates and evaluates exactly one child, so evaluations never
/// exceed population_size + max_epochs.
/// Called after every epoch with the population, sorted best first.
using EpochObserver = std::function<void(int epoch, std::span<const Individual> population)>;

OptimizationResult optimize(std::size_t dim, const Objective& objective, const RevolConfig& cfg, Rng& rng,
                            const EpochObserver& observer = {});

/// Violation entries assigned when the power flow does not converge.
inline constexpr double kNonConvergedViolation = 1e9;

/// Grid evaluation of one individual: denormalize, project onto the
/// inverter limits, solve, and fill the restrictions. `params` is replaced
/// by the renormalized applied setpoint.
void evaluate(Individual& ind, const FeederModel& model, Direction dir);

struct DirectionResult {
  Direction direction;
  Individual best;
  bool feasible = false;  ///< best has zero violations
  int epochs_used = 0;
  std::uint64_t pf_calls = 0;
  std::vector<EpochRecord> trace;
};

/// Solve one boundary-point problem. `stream` selects the random stream
/// under cfg.seed so repeated directions get independent draws.
DirectionResult run_direction(const FeederModel& model, Direction dir, const RevolConfig& cfg, std::uint64_t stream);

struct SweepResult {
  std::vector<DirectionResult> directions;
  std::uint64_t pf_calls = 0;

  /// The boundary points of the directions that ended feasible.
  std::vector<Point2> feasible_boundary() const;
  /// Hull of the feasible boundary points; throws DegenerateRegion if
  /// fewer than three remain.
  ForPolygon hull() const;
};

/// Run every direction (in parallel with `jobs` workers) and collect the
/// boundary points. Results do not depend on `jobs`.
SweepResult sweep(const FeederModel& model, const RevolConfig& cfg, const std::vector<Direction>& directions,
                  unsigned jobs = 1);

}  // namespace flexfor
