#include "flexfor/feeder.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace flexfor {

void FeederSpec::validate() const {
  if (n_der < 1) throw std::invalid_argument("feeder spec: n_der must be at least 1");
  if (!(p_inst_total_kw > 0.0)) throw std::invalid_argument("feeder spec: p_inst_total_kw must be positive");
  if (!(cos_phi_min > 0.0 && cos_phi_min <= 1.0))
    throw std::invalid_argument("feeder spec: cos_phi_min must lie in (0, 1]");
  if (!(v_min_pu > 0.0 && v_min_pu < v_max_pu))
    throw std::invalid_argument("feeder spec: voltage band must satisfy 0 < v_min < v_max");
  if (!(mean_trafo_node_distance_m > 0.0))
    throw std::invalid_argument("feeder spec: mean transformer-node distance must be positive");
}

FeederSpec reference_feeder_spec(int n_nodes) {
  FeederSpec spec;
  spec.name = "feeder_" + std::to_string(n_nodes);
  spec.n_der = n_nodes;
  return spec;
}

double FeederModel::mean_trafo_node_distance_m() const {
  double sum = 0.0;
  for (const auto& der : ders) {
    // Chain bus k (k >= 2) sits k - 1 line sections away from the LV bus.
    sum += static_cast<double>(der.bus - kTrafoLvBus) * line_length_m;
  }
  return ders.empty() ? 0.0 : sum / static_cast<double>(ders.size());
}

FeederModel build_feeder(const FeederSpec& spec) {
  spec.validate();
  const LineType& line = standard_line_params(spec.line_type);
  const TrafoType& trafo = standard_trafo_params(spec.trafo_type);

  FeederModel m;
  m.spec = spec;
  m.trafo = trafo;
  const auto n = static_cast<std::size_t>(spec.n_der);
  m.bus_count = n + 2;
  m.line_length_m = 2.0 * spec.mean_trafo_node_distance_m / static_cast<double>(n + 1);
  m.feeder_length_m = m.line_length_m * static_cast<double>(n);

  m.lines.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    m.lines.push_back({FeederModel::kTrafoLvBus + k, FeederModel::kTrafoLvBus + k + 1, m.line_length_m, line});
  }

  const double p_each = spec.p_inst_total_kw / static_cast<double>(n);
  double assigned = 0.0;
  m.ders.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    // The last unit takes the rounding remainder so the ratings add up to the total.
    const double p = (k + 1 == n) ? spec.p_inst_total_kw - assigned : p_each;
    assigned += p;
    m.ders.push_back({FeederModel::kTrafoLvBus + k + 1, p, p / spec.cos_phi_min});
  }
  return m;
}

FeederSummary summarize(const FeederModel& model) {
  FeederSummary s;
  s.n_der = static_cast<int>(model.ders.size());
  s.p_inst_der_kw = std::round(model.ders.front().p_inst_kw * 10.0) / 10.0;
  s.s_max_der_kva = std::round(model.ders.front().s_max_kva * 10.0) / 10.0;
  s.feeder_length_m = std::round(model.feeder_length_m);
  s.line_length_m = std::round(model.line_length_m);
  s.line_type = model.spec.line_type;
  s.v_min_pu = model.spec.v_min_pu;
  s.v_max_pu = model.spec.v_max_pu;
  s.trafo_type = model.spec.trafo_type;
  return s;
}

std::string format_summary_table(const std::vector<FeederSummary>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%6s %12s %14s %12s %10s  %-14s %-10s %s\n", "# DERs", "P_inst (kW)", "|S|_max (kVA)",
                "Feeder (m)", "Line (m)", "Line type", "Band (pu)", "Trafo type");
  out += buf;
  for (const auto& r : rows) {
    char band[32];
    std::snprintf(band, sizeof band, "%.2g-%.2g", r.v_min_pu, r.v_max_pu);
    std::snprintf(buf, sizeof buf, "%6d %12.1f %14.1f %12.0f %10.0f  %-14s %-10s %s\n", r.n_der, r.p_inst_der_kw,
                  r.s_max_der_kva, r.feeder_length_m, r.line_length_m, r.line_type.c_str(), band, r.trafo_type.c_str());
    out += buf;
  }
  return out;
}

}  // namespace flexfor
