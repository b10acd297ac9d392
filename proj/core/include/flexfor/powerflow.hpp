#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "flexfor/feeder.hpp"

namespace flexfor {

/// Complex power fed into the grid by one DER (generation positive).
struct PowerInjection {
  double p_kw = 0.0;
  double q_kvar = 0.0;
};

/// System power base of the per-unit model.
inline constexpr double kBaseMva = 0.4;

struct SolverOptions {
  double tolerance_pu = 1e-8;
  int max_iterations = 25;
};

/// Outcome of one power flow. PCC quantities are measured on the MV side of
/// the transformer; positive values mean export toward the transmission grid.
struct InterchangeResult {
  double p_pcc_kw = 0.0;
  double q_pcc_kvar = 0.0;
  std::vector<double> v_pu;          ///< per bus, bus 0 is the slack
  std::vector<double> line_loading;  ///< per line, max end current / i_max
  double trafo_loading = 0.0;        ///< max terminal current / rated current
  double losses_kw = 0.0;            ///< sum of branch losses incl. shunts
  double max_mismatch_pu = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Balanced Newton-Raphson power flow. `injections` holds one entry per DER
/// in model.ders order. Never reports a non-converged case as converged.
InterchangeResult solve(const FeederModel& model, std::span<const PowerInjection> injections,
                        const SolverOptions& options = {});

/// Number of solve() calls since the last reset (process wide, thread safe).
std::uint64_t pf_call_count() noexcept;
void reset_pf_call_count() noexcept;

enum class ViolationLabel { feasible, voltage, current, both };

std::string_view to_string(ViolationLabel label) noexcept;

struct ConstraintReport {
  double max_v_violation = 0.0;   ///< pu outside the voltage band
  double max_i_violation = 0.0;   ///< line loading above 1
  double trafo_violation = 0.0;   ///< transformer loading above 1
  ViolationLabel label = ViolationLabel::feasible;
};

/// Classify a converged result against the spec's voltage band and the
/// thermal limits. Transformer overload counts as a current violation.
/// Throws std::invalid_argument for a non-converged result.
ConstraintReport evaluate_constraints(const InterchangeResult& result, const FeederSpec& spec);

}  // namespace flexfor
