#include "flexfor/sampling.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "flexfor/parallel.hpp"

namespace flexfor {
namespace {

const std::uint64_t kUniformStream = stream_id("sample/uniform");
const std::uint64_t kDirichletStream = stream_id("sample/dirichlet");

PointLabel to_point_label(ViolationLabel v) noexcept {
  switch (v) {
    case ViolationLabel::feasible: return PointLabel::feasible;
    case ViolationLabel::voltage: return PointLabel::voltage;
    case ViolationLabel::current: return PointLabel::current;
    case ViolationLabel::both: return PointLabel::both;
  }
  return PointLabel::non_converged;
}

SetpointVector dirichlet_setpoint(std::size_t k, std::span<const double> alpha, std::uint64_t seed, std::size_t i) {
  Rng rng = make_rng(seed, {kDirichletStream, i});
  SetpointVector sp = draw_two_stage_setpoint(k, alpha, rng);
  apply_subset_reflection(sp, i % 4);
  return sp;
}

LabelledCloud finish(std::vector<CloudPoint> points) {
  LabelledCloud cloud;
  cloud.points = std::move(points);
  cloud.pf_calls = cloud.points.size();
  cloud.feasible_count = static_cast<std::size_t>(
      std::count_if(cloud.points.begin(), cloud.points.end(), [](const CloudPoint& p) { return p.label == PointLabel::feasible; }));
  return cloud;
}

}  // namespace

std::string_view to_string(PointLabel label) noexcept {
  switch (label) {
    case PointLabel::feasible: return "feasible";
    case PointLabel::voltage: return "voltage";
    case PointLabel::current: return "current";
    case PointLabel::both: return "both";
    case PointLabel::non_converged: return "non-converged";
  }
  return "unknown";
}

std::optional<PointLabel> parse_point_label(std::string_view text) noexcept {
  for (auto l : {PointLabel::feasible, PointLabel::voltage, PointLabel::current, PointLabel::both, PointLabel::non_converged}) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

std::vector<Point2> LabelledCloud::feasible_points() const {
  std::vector<Point2> out;
  out.reserve(feasible_count);
  for (const auto& p : points) {
    if (p.label == PointLabel::feasible) out.push_back({p.p_kw, p.q_kvar});
  }
  return out;
}

std::vector<double> DirichletConfig::alpha_for(std::size_t k) const {
  if (alpha.size() != 1 && alpha.size() != k) {
    throw std::invalid_argument("dirichlet config: alpha must have 1 or " + std::to_string(k) + " entries");
  }
  std::vector<double> out = alpha.size() == 1 ? std::vector<double>(k, alpha.front()) : alpha;
  for (double a : out) {
    if (!(a > 0.0)) throw std::invalid_argument("dirichlet config: every alpha must be positive");
  }
  return out;
}

CloudPoint evaluate_setpoint(const FeederModel& model, const SetpointVector& sp) {
  const auto applied = project(denormalize(sp, model), model);
  const auto res = solve(model, applied.injections);
  CloudPoint pt{res.p_pcc_kw, res.q_pcc_kvar, PointLabel::non_converged};
  if (res.converged) pt.label = to_point_label(evaluate_constraints(res, model.spec).label);
  return pt;
}

LabelledCloud sample_uniform(const FeederModel& model, std::size_t n, std::uint64_t seed, unsigned jobs) {
  if (n < 1) throw std::invalid_argument("sample_uniform: n must be at least 1");
  const std::size_t k = model.der_count();
  std::vector<CloudPoint> points(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    Rng rng = make_rng(seed, {kUniformStream, i});
    SetpointVector sp;
    sp.p_n.resize(k);
    sp.q_n.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      sp.p_n[j] = uniform01(rng);
      sp.q_n[j] = uniform01(rng);
    }
    points[i] = evaluate_setpoint(model, sp);
  });
  return finish(std::move(points));
}

std::vector<double> sample_dirichlet_shares(std::size_t k, std::span<const double> alpha, Rng& rng) {
  if (k < 1 || alpha.size() != k) throw std::invalid_argument("sample_dirichlet_shares: need k >= 1 and k alphas");
  std::vector<double> x(k);
  dirichlet(rng, alpha, x);
  return x;
}

SetpointVector draw_two_stage_setpoint(std::size_t k, std::span<const double> alpha, Rng& rng) {
  const double a_p = uniform01(rng);
  const double a_q = uniform01(rng);
  const auto xp = sample_dirichlet_shares(k, alpha, rng);
  const auto xq = sample_dirichlet_shares(k, alpha, rng);
  const double kd = static_cast<double>(k);
  SetpointVector sp;
  sp.p_n.resize(k);
  sp.q_n.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    sp.p_n[i] = std::min(a_p * kd * xp[i], 1.0);
    sp.q_n[i] = std::min(a_q * kd * xq[i], 1.0);
  }
  return sp;
}

void apply_subset_reflection(SetpointVector& sp, std::size_t subset) noexcept {
  const bool flip_p = subset % 4 == 1 || subset % 4 == 3;
  const bool flip_q = subset % 4 == 2 || subset % 4 == 3;
  if (flip_p) {
    for (double& x : sp.p_n) x = 1.0 - x;
  }
  if (flip_q) {
    for (double& x : sp.q_n) x = 1.0 - x;
  }
}

void transform_subsets(std::span<SetpointVector> sample) noexcept {
  for (std::size_t i = 0; i < sample.size(); ++i) apply_subset_reflection(sample[i], i % 4);
}

std::vector<SetpointVector> dirichlet_setpoints(std::size_t k, const DirichletConfig& cfg, std::size_t first,
                                                std::size_t count) {
  const auto alpha = cfg.alpha_for(k);
  std::vector<SetpointVector> out;
  out.reserve(count);
  for (std::size_t i = first; i < first + count; ++i) out.push_back(dirichlet_setpoint(k, alpha, cfg.seed, i));
  return out;
}

LabelledCloud sample_dirichlet_two_stage(const FeederModel& model, const DirichletConfig& cfg, unsigned jobs) {
  if (cfg.sample_size < 1) throw std::invalid_argument("sample_dirichlet_two_stage: sample size must be at least 1");
  const std::size_t k = model.der_count();
  const auto alpha = cfg.alpha_for(k);
  std::vector<CloudPoint> points(cfg.sample_size);
  parallel_for(cfg.sample_size, jobs, [&](std::size_t i) {
    points[i] = evaluate_setpoint(model, dirichlet_setpoint(k, alpha, cfg.seed, i));
  });
  return finish(std::move(points));
}

ForPolygon feasible_hull(const LabelledCloud& cloud) {
  const auto pts = cloud.feasible_points();
  return convex_hull(pts);
}

}  // namespace flexfor
