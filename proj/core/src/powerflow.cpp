#include "flexfor/powerflow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace flexfor {
namespace {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

std::atomic<std::uint64_t> g_pf_calls{0};

constexpr double kFrequencyHz = 50.0;

// Two-port in pi form: series admittance plus a shunt at each terminal.
struct PiBranch {
  std::size_t from;
  std::size_t to;
  cd y_series;
  cd y_shunt_from;
  cd y_shunt_to;
};

PiBranch trafo_branch(const TrafoType& t) {
  const double z = t.vk_percent / 100.0 * kBaseMva / t.sn_mva;
  const double r = t.vkr_percent / 100.0 * kBaseMva / t.sn_mva;
  const double x = std::sqrt(std::max(z * z - r * r, 0.0));
  const double g = t.pfe_kw / 1000.0 / kBaseMva;
  const double y_abs = t.i0_percent / 100.0 * t.sn_mva / kBaseMva;
  const double b = std::sqrt(std::max(y_abs * y_abs - g * g, 0.0));
  const cd y_mag(g, -b);
  return {FeederModel::kSlackBus, FeederModel::kTrafoLvBus, 1.0 / cd(r, x), 0.5 * y_mag, 0.5 * y_mag};
}

PiBranch line_branch(const FeederLine& line, double z_base) {
  const double km = line.length_m / 1000.0;
  const cd z = cd(line.type.r_ohm_per_km, line.type.x_ohm_per_km) * km / z_base;
  const double b = 2.0 * std::numbers::pi * kFrequencyHz * line.type.c_nf_per_km * 1e-9 * km * z_base;
  return {line.from, line.to, 1.0 / z, cd(0.0, 0.5 * b), cd(0.0, 0.5 * b)};
}

MatrixXcd build_ybus(std::size_t n, std::span<const PiBranch> branches) {
  MatrixXcd y = MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& br : branches) {
    const auto f = static_cast<Eigen::Index>(br.from);
    const auto t = static_cast<Eigen::Index>(br.to);
    y(f, f) += br.y_series + br.y_shunt_from;
    y(t, t) += br.y_series + br.y_shunt_to;
    y(f, t) -= br.y_series;
    y(t, f) -= br.y_series;
  }
  return y;
}

}  // namespace

std::uint64_t pf_call_count() noexcept { return g_pf_calls.load(std::memory_order_relaxed); }
void reset_pf_call_count() noexcept { g_pf_calls.store(0, std::memory_order_relaxed); }

InterchangeResult solve(const FeederModel& model, std::span<const PowerInjection> injections,
                        const SolverOptions& options) {
  g_pf_calls.fetch_add(1, std::memory_order_relaxed);
  if (injections.size() != model.ders.size()) {
    throw std::invalid_argument("solve: expected one injection per DER");
  }

  const std::size_t n = model.bus_count;
  const double z_base_lv = model.trafo.vn_lv_kv * model.trafo.vn_lv_kv / kBaseMva;
  const double i_base_lv_ka = kBaseMva / (std::sqrt(3.0) * model.trafo.vn_lv_kv);

  std::vector<PiBranch> branches;
  branches.reserve(model.lines.size() + 1);
  branches.push_back(trafo_branch(model.trafo));
  for (const auto& line : model.lines) branches.push_back(line_branch(line, z_base_lv));
  const MatrixXcd ybus = build_ybus(n, branches);

  VectorXcd s_spec = VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < injections.size(); ++k) {
    s_spec(static_cast<Eigen::Index>(model.ders[k].bus)) +=
        cd(injections[k].p_kw, injections[k].q_kvar) / (1000.0 * kBaseMva);
  }

  // Unknowns: angle and magnitude of every non-slack bus.
  const auto m = static_cast<Eigen::Index>(n - 1);
  VectorXd theta = VectorXd::Zero(static_cast<Eigen::Index>(n));
  VectorXd vm = VectorXd::Ones(static_cast<Eigen::Index>(n));
  vm(0) = model.slack_voltage_pu;

  auto voltages = [&] {
    VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::polar(vm(i), theta(i));
    return v;
  };

  InterchangeResult res;
  VectorXcd v = voltages();
  VectorXd mismatch(2 * m);
  auto compute_mismatch = [&] {
    const VectorXcd s_calc = v.cwiseProduct((ybus * v).conjugate());
    for (Eigen::Index i = 0; i < m; ++i) {
      const cd d = s_spec(i + 1) - s_calc(i + 1);
      mismatch(i) = d.real();
      mismatch(m + i) = d.imag();
    }
    return mismatch.cwiseAbs().maxCoeff();
  };

  double worst = compute_mismatch();
  int iter = 0;
  while (worst >= options.tolerance_pu && iter < options.max_iterations) {
    // dS/dtheta = j diag(V) conj(diag(I) - Y diag(V));  dS/d|V| = diag(V) conj(Y diag(V/|V|)) + conj(diag(I)) diag(V/|V|)
    const VectorXcd ibus = ybus * v;
    const VectorXcd vnorm = v.cwiseQuotient(vm.cast<cd>());
    MatrixXcd ds_dth = -(ybus * v.asDiagonal());
    ds_dth.diagonal() += ibus;
    ds_dth = cd(0.0, 1.0) * (v.asDiagonal() * ds_dth.conjugate());
    MatrixXcd ds_dvm = v.asDiagonal() * (ybus * vnorm.asDiagonal()).conjugate();
    ds_dvm.diagonal() += ibus.conjugate().cwiseProduct(vnorm);

    MatrixXd jac(2 * m, 2 * m);
    jac.topLeftCorner(m, m) = ds_dth.bottomRightCorner(m, m).real();
    jac.topRightCorner(m, m) = ds_dvm.bottomRightCorner(m, m).real();
    jac.bottomLeftCorner(m, m) = ds_dth.bottomRightCorner(m, m).imag();
    jac.bottomRightCorner(m, m) = ds_dvm.bottomRightCorner(m, m).imag();

    const VectorXd dx = jac.partialPivLu().solve(mismatch);
    if (!dx.allFinite()) break;
    theta.tail(m) += dx.head(m);
    vm.tail(m) += dx.tail(m);
    ++iter;
    v = voltages();
    worst = compute_mismatch();
  }

  res.iterations = iter;
  res.max_mismatch_pu = worst;
  res.converged = std::isfinite(worst) && worst < options.tolerance_pu && (vm.array() > 0.0).all();

  res.v_pu.assign(vm.data(), vm.data() + vm.size());
  const cd s_slack = v(0) * std::conj((ybus.row(0) * v)(0));
  res.p_pcc_kw = -s_slack.real() * 1000.0 * kBaseMva;
  res.q_pcc_kvar = -s_slack.imag() * 1000.0 * kBaseMva;

  double losses = 0.0;
  res.line_loading.reserve(model.lines.size());
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const auto& br = branches[b];
    const cd vf = v(static_cast<Eigen::Index>(br.from));
    const cd vt = v(static_cast<Eigen::Index>(br.to));
    const cd i_from = (vf - vt) * br.y_series + vf * br.y_shunt_from;
    const cd i_to = (vt - vf) * br.y_series + vt * br.y_shunt_to;
    losses += (vf * std::conj(i_from) + vt * std::conj(i_to)).real();
    if (b == 0) {
      // Rated current in per unit on the system base is sn / base.
      const double rated = model.trafo.sn_mva / kBaseMva;
      res.trafo_loading = std::max(std::abs(i_from), std::abs(i_to)) / rated;
    } else {
      const double max_ka = std::max(std::abs(i_from), std::abs(i_to)) * i_base_lv_ka;
      res.line_loading.push_back(max_ka / model.lines[b - 1].type.max_i_ka);
    }
  }
  res.losses_kw = losses * 1000.0 * kBaseMva;
  return res;
}

std::string_view to_string(ViolationLabel label) noexcept {
  switch (label) {
    case ViolationLabel::feasible: return "feasible";
    case ViolationLabel::voltage: return "voltage";
    case ViolationLabel::current: return "current";
    case ViolationLabel::both: return "both";
  }
  return "unknown";
}

ConstraintReport evaluate_constraints(const InterchangeResult& result, const FeederSpec& spec) {
  if (!result.converged) {
    throw std::invalid_argument("evaluate_constraints: power flow did not converge");
  }
  ConstraintReport rep;
  for (double v : result.v_pu) {
    rep.max_v_violation = std::max({rep.max_v_violation, v - spec.v_max_pu, spec.v_min_pu - v});
  }
  for (double l : result.line_loading) rep.max_i_violation = std::max(rep.max_i_violation, l - 1.0);
  rep.trafo_violation = std::max(0.0, result.trafo_loading - 1.0);

  const bool v_bad = rep.max_v_violation > 0.0;
  const bool i_bad = rep.max_i_violation > 0.0 || rep.trafo_violation > 0.0;
  rep.label = v_bad && i_bad ? ViolationLabel::both
              : v_bad        ? ViolationLabel::voltage
              : i_bad        ? ViolationLabel::current
                             : ViolationLabel::feasible;
  return rep;
}

}  // namespace flexfor
