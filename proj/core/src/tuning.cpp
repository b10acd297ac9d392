#include "flexfor/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flexfor/parallel.hpp"
#include "flexfor/sampling.hpp"

namespace flexfor {

double ParamRange::sample(Rng& rng) const {
  if (integer) {
    return static_cast<double>(uniform_int(rng, static_cast<std::int64_t>(std::ceil(low)),
                                           static_cast<std::int64_t>(std::floor(high))));
  }
  return uniform(rng, low, high);
}

void SearchSpace::validate() const {
  for (const ParamRange* r : {&population_size, &elite_size, &max_epochs, &max_no_success_epochs, &t, &start_ttl,
                              &gradient_weight, &success_weight, &target_success, &max_scatter_relative}) {
    if (!(r->low <= r->high)) throw std::invalid_argument("search space: range with low > high");
    if (r->integer && std::ceil(r->low) > std::floor(r->high)) {
      throw std::invalid_argument("search space: integer range contains no integer");
    }
  }
}

RevolConfig SearchSpace::sample(Rng& rng) const {
  RevolConfig c;
  c.population_size = static_cast<int>(population_size.sample(rng));
  c.elite_size = static_cast<int>(elite_size.sample(rng));
  c.max_epochs = static_cast<int>(max_epochs.sample(rng));
  c.max_no_success_epochs = static_cast<int>(max_no_success_epochs.sample(rng));
  c.t = static_cast<int>(t.sample(rng));
  c.start_ttl = static_cast<int>(start_ttl.sample(rng));
  c.gradient_weight = gradient_weight.sample(rng);
  c.success_weight = success_weight.sample(rng);
  c.target_success = target_success.sample(rng);
  c.max_scatter_relative = max_scatter_relative.sample(rng);
  return c;
}

bool SearchSpace::contains(const RevolConfig& c) const noexcept {
  return population_size.contains(c.population_size) && elite_size.contains(c.elite_size) &&
         max_epochs.contains(c.max_epochs) && max_no_success_epochs.contains(c.max_no_success_epochs) &&
         t.contains(c.t) && start_ttl.contains(c.start_ttl) && gradient_weight.contains(c.gradient_weight) &&
         success_weight.contains(c.success_weight) && target_success.contains(c.target_success) &&
         max_scatter_relative.contains(c.max_scatter_relative);
}

ForPolygon build_benchmark(const FeederModel& model, std::uint64_t seed, std::size_t samples, unsigned jobs) {
  DirichletConfig cfg;
  cfg.sample_size = samples;
  cfg.seed = seed;
  return feasible_hull(sample_dirichlet_two_stage(model, cfg, jobs));
}

double score_sweep(const SweepResult& sweep, const ForPolygon& benchmark) {
  try {
    return jaccard(sweep.hull(), benchmark);
  } catch (const DegenerateRegion&) {
    return 0.0;
  }
}

std::vector<TrialRecord> random_search(const SearchSpace& space, std::size_t trials, std::size_t runs_per_trial,
                                       const FeederModel& model, const ForPolygon& benchmark, std::uint64_t seed,
                                       unsigned jobs) {
  space.validate();
  if (trials < 1 || runs_per_trial < 1) throw std::invalid_argument("random_search: trials and runs must be >= 1");

  std::vector<TrialRecord> records(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = make_rng(seed, {stream_id("tune/config"), i});
    records[i].trial = i;
    records[i].config = space.sample(rng);
    records[i].scores.assign(runs_per_trial, 0.0);
  }

  std::vector<std::uint64_t> calls(trials * runs_per_trial, 0);
  const auto directions = compass_directions();
  parallel_for(trials * runs_per_trial, jobs, [&](std::size_t cell) {
    const std::size_t i = cell / runs_per_trial;
    const std::size_t r = cell % runs_per_trial;
    RevolConfig cfg = records[i].config;
    cfg.seed = derive_seed(seed, {stream_id("tune/run"), i, r});
    try {
      const SweepResult sw = sweep(model, cfg, directions);
      records[i].scores[r] = score_sweep(sw, benchmark);
      calls[cell] = sw.pf_calls;
    } catch (const std::invalid_argument&) {
      // A sampled configuration the strategy rejects scores zero.
      records[i].scores[r] = 0.0;
    }
  });

  for (std::size_t i = 0; i < trials; ++i) {
    auto& rec = records[i];
    double sum = 0.0;
    for (double s : rec.scores) sum += s;
    rec.mean = sum / static_cast<double>(runs_per_trial);
    double var = 0.0;
    for (double s : rec.scores) var += (s - rec.mean) * (s - rec.mean);
    rec.stddev = std::sqrt(var / static_cast<double>(runs_per_trial));
    for (std::size_t r = 0; r < runs_per_trial; ++r) rec.pf_calls += calls[i * runs_per_trial + r];
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const TrialRecord& a, const TrialRecord& b) { return a.mean > b.mean; });
  return records;
}

}  // namespace flexfor
