#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flexfor/feeder.hpp"
#include "flexfor/geometry.hpp"
#include "flexfor/revol.hpp"
#include "flexfor/sampling.hpp"

namespace flexfor {

enum class Method { uniform, dirichlet, revol };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;

struct ExperimentConfig {
  std::vector<FeederSpec> feeders;
  std::vector<Method> methods;
  std::size_t sample_size = 10000;
  std::size_t sampling_runs = 1;
  std::size_t revol_runs = 10;
  double dirichlet_alpha = kDefaultDirichletAlpha;
  RevolConfig revol;  // its seed field is ignored; each run gets its own stream
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  unsigned jobs = 1;

  void validate() const;
  std::size_t runs_for(Method m) const noexcept { return m == Method::revol ? revol_runs : sampling_runs; }
};

/// Fields mirror the struct; "feeders" entries are feeder spec objects or
/// reference node counts (1, 3, 9, 27).
ExperimentConfig experiment_config_from_json(std::string_view text);
std::string to_json(const ExperimentConfig& cfg);

/// Seed of one grid cell; depends only on the master seed and the cell key.
std::uint64_t cell_seed(std::uint64_t master, std::string_view feeder, Method method, std::size_t run);

struct CellResult {
  std::string feeder;
  Method method = Method::uniform;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  ForPolygon hull;
  double area = 0.0;
  std::size_t points = 0;
  std::size_t feasible_points = 0;
  std::uint64_t pf_calls = 0;
  double wall_seconds = 0.0;
  std::filesystem::path dir;  // relative to out_dir
};

struct ComparisonReport {
  std::vector<CellResult> cells;
  std::uint64_t pf_calls_total = 0;
  std::uint64_t pf_counter_delta = 0;
  bool all_ok = false;
  std::string report_json;  // contents of report.json
  std::string summary;      // plain-text table
};

/// Runs every feeder x method x run cell (cells in parallel), writes the
/// per-cell artifacts, out/report.json, out/summary.txt and out/timing.json.
/// A failing cell is recorded and the run continues.
ComparisonReport run_comparison(const ExperimentConfig& cfg);

}  // namespace flexfor
