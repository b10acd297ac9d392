#include "flexfor/inverter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flexfor {

std::vector<double> SetpointVector::flatten() const {
  std::vector<double> out;
  out.reserve(p_n.size() + q_n.size());
  out.insert(out.end(), p_n.begin(), p_n.end());
  out.insert(out.end(), q_n.begin(), q_n.end());
  return out;
}

SetpointVector SetpointVector::from_flat(std::span<const double> flat) {
  if (flat.size() % 2 != 0) throw std::invalid_argument("setpoint genome must have even length");
  const auto half = flat.size() / 2;
  return {std::vector<double>(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(half)),
          std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(half), flat.end())};
}

void SetpointVector::clamp() {
  for (double& x : p_n) x = std::clamp(x, 0.0, 1.0);
  for (double& x : q_n) x = std::clamp(x, 0.0, 1.0);
}

std::vector<PowerInjection> denormalize(const SetpointVector& sp, const FeederModel& model) {
  if (sp.p_n.size() != model.ders.size() || sp.q_n.size() != model.ders.size()) {
    throw std::invalid_argument("denormalize: setpoint length does not match DER count");
  }
  std::vector<PowerInjection> out(model.ders.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].p_kw = (2.0 * sp.p_n[k] - 1.0) * model.ders[k].p_inst_kw;
    out[k].q_kvar = (2.0 * sp.q_n[k] - 1.0) * model.ders[k].s_max_kva;
  }
  return out;
}

AppliedSetpoint project(std::span<const PowerInjection> raw, const FeederModel& model) {
  if (raw.size() != model.ders.size()) throw std::invalid_argument("project: one operating point per DER expected");
  AppliedSetpoint out;
  out.injections.resize(raw.size());
  out.clipped.assign(raw.size(), false);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto& der = model.ders[k];
    double p = std::clamp(raw[k].p_kw, -der.p_inst_kw, der.p_inst_kw);
    double q = raw[k].q_kvar;
    const double s = std::hypot(p, q);
    if (s > der.s_max_kva + kApparentPowerSlackKva) {
      const double f = der.s_max_kva / s;
      p *= f;
      q *= f;
    }
    out.injections[k] = {p, q};
    out.clipped[k] = (p != raw[k].p_kw) || (q != raw[k].q_kvar);
  }
  return out;
}

SetpointVector renormalize(std::span<const PowerInjection> injections, const FeederModel& model) {
  if (injections.size() != model.ders.size()) throw std::invalid_argument("renormalize: DER count mismatch");
  SetpointVector sp;
  sp.p_n.resize(injections.size());
  sp.q_n.resize(injections.size());
  for (std::size_t k = 0; k < injections.size(); ++k) {
    sp.p_n[k] = 0.5 * (injections[k].p_kw / model.ders[k].p_inst_kw + 1.0);
    sp.q_n[k] = 0.5 * (injections[k].q_kvar / model.ders[k].s_max_kva + 1.0);
  }
  // Points inside the feasibility slack can land a few ulps outside [0, 1].
  sp.clamp();
  return sp;
}

SetpointVector renormalize(const AppliedSetpoint& applied, const FeederModel& model) {
  return renormalize(applied.injections, model);
}

}  // namespace flexfor
