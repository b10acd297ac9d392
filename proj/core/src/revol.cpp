#include "flexfor/revol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flexfor/inverter.hpp"
#include "flexfor/parallel.hpp"
#include "flexfor/powerflow.hpp"

namespace flexfor {

void RevolConfig::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(std::string("revol config: ") + what); };
  if (population_size < 2) fail("population_size must be at least 2");
  if (elite_size < 1 || elite_size >= population_size) fail("elite_size must satisfy 1 <= elite_size < population_size");
  if (max_epochs < 0) fail("max_epochs must be non-negative");
  if (max_no_success_epochs < 1) fail("max_no_success_epochs must be positive");
  if (t < 0) fail("t must be non-negative");
  if (start_ttl < 1) fail("start_ttl must be positive");
  if (!(gradient_weight >= 0.0) || !(success_weight >= 0.0)) fail("weights must be non-negative");
  if (!(target_success > 0.0 && target_success < 1.0)) fail("target_success must lie in (0, 1)");
  if (!(max_scatter_relative > kMinScatter)) fail("max_scatter_relative must exceed the minimum scatter");
}

bool is_better_than(const Restrictions& a, const Restrictions& b) noexcept {
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return a[0] > b[0];
}

double pt1(double y, double u, double t) noexcept { return t == 0.0 ? u : y + (u - y) / t; }

std::vector<Direction> compass_directions() {
  return {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
}

std::vector<Direction> printed_directions() {
  return {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {-1, 0}, {1, -1}};
}

std::string to_string(Direction d) {
  return "(" + std::to_string(d.alpha) + "," + std::to_string(d.beta) + ")";
}

namespace {

// Population kept sorted best-first; the first elite_size members are the elite.
void insert_sorted(std::vector<Individual>& pop, Individual ind) {
  auto pos = std::upper_bound(pop.begin(), pop.end(), ind,
                              [](const Individual& a, const Individual& b) { return is_better_than(a, b); });
  pop.insert(pos, std::move(ind));
}

}  // namespace

OptimizationResult optimize(std::size_t dim, const Objective& objective, const RevolConfig& cfg, Rng& rng,
                            const EpochObserver& observer) {
  cfg.validate();
  if (dim == 0) throw std::invalid_argument("optimize: dimension must be positive");
  const auto pop_size = static_cast<std::size_t>(cfg.population_size);
  const auto elite = static_cast<std::size_t>(cfg.elite_size);

  OptimizationResult out;
  std::vector<Individual> pop;
  pop.reserve(pop_size + 1);
  for (std::size_t i = 0; i < pop_size; ++i) {
    Individual ind;
    ind.params.resize(dim);
    for (double& x : ind.params) x = uniform01(rng);
    ind.scatter.assign(dim, cfg.max_scatter_relative);
    ind.ttl = cfg.start_ttl;
    objective(ind);
    ++out.evaluations;
    insert_sorted(pop, std::move(ind));
  }
  out.best = pop.front();
  out.trace.push_back({0, out.best.restrictions});

  double success = 0.0;
  bool first = true;
  int since_success = 0;
  int epoch = 0;
  std::vector<double> gradient(dim);
  while (epoch < cfg.max_epochs && since_success < cfg.max_no_success_epochs) {
    ++epoch;

    // One parent from the elite, one from the rest of the population.
    const auto ei = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(elite) - 1));
    auto oi = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pop_size) - 2));
    if (oi >= ei) ++oi;
    const Individual& parent = pop[ei];
    const Individual& other = pop[oi];
    const bool parent_leads = !is_better_than(other, parent);
    const Individual& better = parent_leads ? parent : other;
    const Individual& worse = parent_leads ? other : parent;
    for (std::size_t j = 0; j < dim; ++j) gradient[j] = better.params[j] - worse.params[j];

    // The sampling interval around the elite parent is shifted along the
    // implicit gradient and widened while the averaged success rate beats
    // the target. The child keeps the displacement it actually realized as
    // its own scatter, so step sizes are inherited through selection.
    const double spread = std::max(0.0, 1.0 + cfg.success_weight * (success - cfg.target_success));
    const double shift = cfg.gradient_weight * uniform01(rng);
    Individual child;
    child.params.resize(dim);
    child.scatter.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const double width = std::clamp(parent.scatter[j] * spread, kMinScatter, cfg.max_scatter_relative);
      const double centre = parent.params[j] + shift * gradient[j];
      child.params[j] = std::clamp(centre + uniform(rng, -width, width), 0.0, 1.0);
      child.scatter[j] = std::clamp(std::abs(child.params[j] - parent.params[j]), kMinScatter, cfg.max_scatter_relative);
    }
    child.ttl = cfg.start_ttl;
    objective(child);
    ++out.evaluations;

    // An expired member outside the elite makes room unconditionally;
    // otherwise the child has to beat the worst member.
    std::size_t target = pop_size - 1;
    for (std::size_t i = pop_size; i-- > elite;) {
      if (pop[i].ttl <= 0) {
        target = i;
        break;
      }
    }
    const bool accepted = is_better_than(child, pop[target]);
    if (accepted || pop[target].ttl <= 0) {
      if (is_better_than(child, out.best)) {
        out.best = child;
        out.trace.push_back({epoch, out.best.restrictions});
      }
      pop.erase(pop.begin() + static_cast<std::ptrdiff_t>(target));
      insert_sorted(pop, std::move(child));
    }
    since_success = accepted ? 0 : since_success + 1;
    success = pt1(success, accepted ? 1.0 : 0.0, first ? 0.0 : static_cast<double>(cfg.t));
    first = false;

    for (std::size_t i = elite; i < pop_size; ++i) --pop[i].ttl;
    for (std::size_t i = 0; i < elite; ++i) pop[i].ttl = std::max(pop[i].ttl, 1);
    if (observer) observer(epoch, pop);
  }
  out.epochs_used = epoch;
  if (out.trace.back().epoch != epoch) out.trace.push_back({epoch, out.best.restrictions});
  return out;
}

void evaluate(Individual& ind, const FeederModel& model, Direction dir) {
  SetpointVector sp = SetpointVector::from_flat(ind.params);
  sp.clamp();
  const auto applied = project(denormalize(sp, model), model);
  const auto res = solve(model, applied.injections);
  ind.params = renormalize(applied, model).flatten();
  ind.interchange = {res.p_pcc_kw, res.q_pcc_kvar};
  if (!res.converged) {
    ind.restrictions = {std::numeric_limits<double>::lowest(), kNonConvergedViolation, kNonConvergedViolation};
    return;
  }
  const auto rep = evaluate_constraints(res, model.spec);
  ind.restrictions = {dir.alpha * res.p_pcc_kw + dir.beta * res.q_pcc_kvar, rep.max_v_violation,
                      std::max(rep.max_i_violation, rep.trafo_violation)};
}

DirectionResult run_direction(const FeederModel& model, Direction dir, const RevolConfig& cfg, std::uint64_t stream) {
  if (dir.alpha == 0 && dir.beta == 0) throw std::invalid_argument("run_direction: direction (0,0) has no objective");
  Rng rng = make_rng(cfg.seed, {stream_id("revol/direction"), stream});
  auto res = optimize(2 * model.der_count(), [&](Individual& ind) { evaluate(ind, model, dir); }, cfg, rng);
  DirectionResult out;
  out.direction = dir;
  out.feasible = res.best.restrictions[1] == 0.0 && res.best.restrictions[2] == 0.0;
  out.best = std::move(res.best);
  out.epochs_used = res.epochs_used;
  out.pf_calls = res.evaluations;
  out.trace = std::move(res.trace);
  return out;
}

std::vector<Point2> SweepResult::feasible_boundary() const {
  std::vector<Point2> pts;
  for (const auto& d : directions) {
    if (d.feasible) pts.push_back(d.best.interchange);
  }
  return pts;
}

ForPolygon SweepResult::hull() const {
  const auto pts = feasible_boundary();
  if (pts.size() < 3) throw DegenerateRegion("sweep produced fewer than three feasible boundary points");
  return convex_hull(pts);
}

SweepResult sweep(const FeederModel& model, const RevolConfig& cfg, const std::vector<Direction>& directions,
                  unsigned jobs) {
  cfg.validate();
  SweepResult out;
  out.directions.resize(directions.size());
  parallel_for(directions.size(), jobs,
               [&](std::size_t i) { out.directions[i] = run_direction(model, directions[i], cfg, i); });
  for (const auto& d : out.directions) out.pf_calls += d.pf_calls;
  return out;
}

}  // namespace flexfor
