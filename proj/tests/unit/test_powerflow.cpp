#include <algorithm>
#include <cmath>
#include <numeric>

#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "flexfor/feeder.hpp"
#include "flexfor/inverter.hpp"
#include "flexfor/powerflow.hpp"
#include "flexfor/random.hpp"
#include "two_bus_oracle.hpp"

using namespace flexfor;

namespace {
oracle::TwoBusSolution reference(const FeederModel& m, double p, double q) {
  return oracle::solve_two_bus(m.trafo, m.lines[0].type, m.lines[0].length_m, p, q);
}
}  // namespace

TEST_CASE("no injection: only no-load losses flow") {
  const auto m = build_feeder(reference_feeder_spec(9));
  std::vector<PowerInjection> inj(9);
  const auto r = solve(m, inj);
  REQUIRE(r.converged);
  CHECK(r.p_pcc_kw < 0.0);
  CHECK(r.p_pcc_kw > -2.0);
  for (double v : r.v_pu) {
    CHECK(v > 0.99);
    CHECK(v < 1.01);
  }
}

TEST_CASE("single node full export matches the closed form") {
  const auto m = build_feeder(reference_feeder_spec(1));
  const PowerInjection inj{200.0, 0.0};
  const auto r = solve(m, std::span(&inj, 1));
  REQUIRE(r.converged);
  const auto ref = reference(m, 200.0, 0.0);
  CHECK(std::abs(r.p_pcc_kw - ref.p_pcc_kw) / (1000.0 * kBaseMva) < 1e-6);
  CHECK(std::abs(r.q_pcc_kvar - ref.q_pcc_kvar) / (1000.0 * kBaseMva) < 1e-6);
  CHECK(std::abs(r.v_pu[2] - ref.v_der_pu) < 1e-6);
  CHECK(std::abs(r.v_pu[1] - ref.v_lv_pu) < 1e-6);
}

TEST_CASE("closed form agreement across a PQ grid") {
  const auto m = build_feeder(reference_feeder_spec(1));
  const double s = m.ders[0].s_max_kva;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const PowerInjection inj{-s + 2 * s * i / 9.0, -s + 2 * s * j / 9.0};
      const auto r = solve(m, std::span(&inj, 1));
      REQUIRE(r.converged);
      const auto ref = reference(m, inj.p_kw, inj.q_kvar);
      CHECK(std::abs(r.v_pu[2] - ref.v_der_pu) < 1e-6);
      CHECK(std::abs(r.p_pcc_kw - ref.p_pcc_kw) / 400.0 < 1e-6);
    }
}

TEST_CASE("power balance holds") {
  Rng rng(11);
  for (int n : kReferenceNodeCounts) {
    const auto m = build_feeder(reference_feeder_spec(n));
    for (int k = 0; k < 20; ++k) {
      SetpointVector sp;
      for (int i = 0; i < n; ++i) sp.p_n.push_back(uniform01(rng)), sp.q_n.push_back(uniform01(rng));
      const auto applied = project(denormalize(sp, m), m);
      const auto r = solve(m, applied.injections);
      REQUIRE(r.converged);
      double p_in = 0.0;
      for (const auto& x : applied.injections) p_in += x.p_kw;
      CHECK(std::abs(p_in - r.losses_kw - r.p_pcc_kw) < 1e-4);
      CHECK(r.iterations <= 10);
    }
  }
}

TEST_CASE("order of DERs does not matter for a uniform setpoint") {
  const auto m = build_feeder(reference_feeder_spec(27));
  std::vector<PowerInjection> inj;
  for (const auto& d : m.ders) inj.push_back({d.p_inst_kw, 0.0});
  const auto a = solve(m, inj);
  std::reverse(inj.begin(), inj.end());
  const auto b = solve(m, inj);
  CHECK(std::abs(a.p_pcc_kw - b.p_pcc_kw) < 1e-6);
  CHECK(std::abs(a.q_pcc_kvar - b.q_pcc_kvar) < 1e-6);
}

TEST_CASE("pf counter") {
  const auto m = build_feeder(reference_feeder_spec(1));
  reset_pf_call_count();
  CHECK(pf_call_count() == 0);
  const PowerInjection inj{};
  (void)solve(m, std::span(&inj, 1));
  CHECK(pf_call_count() == 1);
}

TEST_CASE("injection count must match") {
  const auto m = build_feeder(reference_feeder_spec(3));
  std::vector<PowerInjection> inj(2);
  CHECK_THROWS_AS(solve(m, inj), std::invalid_argument);
}

TEST_CASE("constraint classification") {
  const FeederSpec spec;
  InterchangeResult r;
  r.converged = true;
  r.v_pu = {1.0, 1.02, 1.05};
  r.line_loading = {0.5, 0.9};
  r.trafo_loading = 0.8;
  auto c = evaluate_constraints(r, spec);
  CHECK(c.label == ViolationLabel::feasible);
  CHECK(c.max_v_violation == 0.0);
  CHECK(c.max_i_violation == 0.0);

  r.v_pu = {1.0, 1.13};
  c = evaluate_constraints(r, spec);
  CHECK(c.label == ViolationLabel::voltage);
  CHECK(c.max_v_violation == doctest::Approx(0.03));

  r.v_pu = {1.0, 1.12};
  r.line_loading = {1.05};
  c = evaluate_constraints(r, spec);
  CHECK(c.label == ViolationLabel::both);
  CHECK(c.max_i_violation == doctest::Approx(0.05));

  r.v_pu = {1.0, 0.88};
  r.line_loading = {0.5};
  r.trafo_loading = 1.2;
  c = evaluate_constraints(r, spec);
  CHECK(c.label == ViolationLabel::both);
  CHECK(c.max_v_violation == doctest::Approx(0.02));
  CHECK(c.trafo_violation == doctest::Approx(0.2));

  r.converged = false;
  CHECK_THROWS_AS(evaluate_constraints(r, spec), std::invalid_argument);
}

TEST_CASE("non-convergence is reported, not thrown") {
  const auto m = build_feeder(reference_feeder_spec(1));
  const PowerInjection inj{-50000.0, -50000.0};
  const auto r = solve(m, std::span(&inj, 1));
  CHECK_FALSE(r.converged);
}
