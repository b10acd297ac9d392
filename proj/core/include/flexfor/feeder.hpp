#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flexfor/standard_types.hpp"

namespace flexfor {

/// Parameters of a synthetic radial 0.4 kV feeder.
struct FeederSpec {
  std::string name;
  int n_der = 1;
  double p_inst_total_kw = 200.0;
  double cos_phi_min = 0.9;
  double v_min_pu = 0.9;
  double v_max_pu = 1.1;
  std::string line_type = "NAYY 4x150 SE";
  std::string trafo_type = "0.4 MVA 20/0.4 kV";
  double mean_trafo_node_distance_m = 400.0;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// One of the four benchmark feeders (n_nodes in {1, 3, 9, 27}); any other
/// positive node count yields a feeder built with the same conventions.
FeederSpec reference_feeder_spec(int n_nodes);

/// The node counts of the benchmark feeder series.
inline constexpr int kReferenceNodeCounts[] = {1, 3, 9, 27};

struct FeederLine {
  std::size_t from = 0;
  std::size_t to = 0;
  double length_m = 0.0;
  LineType type;
};

struct FeederDer {
  std::size_t bus = 0;
  double p_inst_kw = 0.0;
  double s_max_kva = 0.0;
};

/// Immutable grid model. Bus 0 is the MV slack (PCC), bus 1 the LV side of
/// the transformer, buses 2..N+1 the chain nodes with one DER each.
struct FeederModel {
  FeederSpec spec;
  std::size_t bus_count = 0;
  double slack_voltage_pu = 1.0;
  TrafoType trafo;
  std::vector<FeederLine> lines;
  std::vector<FeederDer> ders;
  double line_length_m = 0.0;
  double feeder_length_m = 0.0;

  static constexpr std::size_t kSlackBus = 0;
  static constexpr std::size_t kTrafoLvBus = 1;

  std::size_t der_count() const noexcept { return ders.size(); }
  /// Mean distance between the transformer and the DER nodes along the chain.
  double mean_trafo_node_distance_m() const;
};

/// Build the chain feeder. Line length solves l * (N + 1) / 2 = mean
/// transformer-node distance; the electrical model keeps the exact length.
FeederModel build_feeder(const FeederSpec& spec);

/// Table-style row: per-DER ratings, lengths rounded to whole metres.
struct FeederSummary {
  int n_der = 0;
  double p_inst_der_kw = 0.0;
  double s_max_der_kva = 0.0;
  double feeder_length_m = 0.0;
  double line_length_m = 0.0;
  std::string line_type;
  double v_min_pu = 0.0;
  double v_max_pu = 0.0;
  std::string trafo_type;
};

FeederSummary summarize(const FeederModel& model);
std::string format_summary_table(const std::vector<FeederSummary>& rows);

}  // namespace flexfor
