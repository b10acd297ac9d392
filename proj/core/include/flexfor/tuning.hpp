#pragma once

#include <cstdint>
#include <vector>

#include "flexfor/feeder.hpp"
#include "flexfor/geometry.hpp"
#include "flexfor/random.hpp"
#include "flexfor/revol.hpp"

namespace flexfor {

struct ParamRange {
  double low = 0.0;
  double high = 0.0;
  bool integer = false;

  double sample(Rng& rng) const;
  bool contains(double v) const noexcept { return v >= low && v <= high; }
};

/// Uniform sampling ranges for every REvol hyperparameter.
struct SearchSpace {
  ParamRange population_size{20, 40, true};
  ParamRange elite_size{2, 5, true};
  ParamRange max_epochs{500, 20000, true};
  ParamRange max_no_success_epochs{20, 20000, true};
  ParamRange t{10, 20000, true};
  ParamRange start_ttl{80, 20000, true};
  ParamRange gradient_weight{0.0, 3.0, false};
  ParamRange success_weight{0.0, 3.0, false};
  ParamRange target_success{0.1, 0.4, false};
  ParamRange max_scatter_relative{0.2, 3.0, false};

  /// Throws std::invalid_argument if a range is empty or inverted.
  void validate() const;
  RevolConfig sample(Rng& rng) const;
  bool contains(const RevolConfig& cfg) const noexcept;
};

struct TrialRecord {
  std::size_t trial = 0;
  RevolConfig config;
  std::vector<double> scores;  ///< one Jaccard index per run
  double mean = 0.0;
  double stddev = 0.0;  ///< population standard deviation of scores
  std::uint64_t pf_calls = 0;
};

inline constexpr std::size_t kBenchmarkSampleSize = 100000;

/// Reference region: hull of a two-stage Dirichlet cloud (alpha = 1.2).
ForPolygon build_benchmark(const FeederModel& model, std::uint64_t seed, std::size_t samples = kBenchmarkSampleSize,
                           unsigned jobs = 1);

/// Jaccard score of one sweep against the benchmark; 0 when the sweep
/// yields a degenerate region.
double score_sweep(const SweepResult& sweep, const ForPolygon& benchmark);

/// Sample `trials` configurations from `space`, run `runs_per_trial`
/// sweeps of each, and return the records ranked by mean score (best first,
/// ties by trial index).
std::vector<TrialRecord> random_search(const SearchSpace& space, std::size_t trials, std::size_t runs_per_trial,
                                       const FeederModel& model, const ForPolygon& benchmark, std::uint64_t seed,
                                       unsigned jobs = 1);

}  // namespace flexfor
