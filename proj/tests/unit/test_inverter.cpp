#include <cmath>

#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "flexfor/feeder.hpp"
#include "flexfor/inverter.hpp"
#include "flexfor/random.hpp"

using namespace flexfor;

namespace {
const FeederModel& one() {
  static const FeederModel m = build_feeder(reference_feeder_spec(1));
  return m;
}
}  // namespace

TEST_CASE("denormalize") {
  const auto& m = one();
  auto inj = denormalize({{0.5}, {0.5}}, m);
  CHECK(inj[0].p_kw == 0.0);
  CHECK(inj[0].q_kvar == 0.0);
  inj = denormalize({{1.0}, {0.5}}, m);
  CHECK(inj[0].p_kw == doctest::Approx(200.0));
  CHECK(inj[0].q_kvar == 0.0);
  inj = denormalize({{0.0}, {0.5}}, m);
  CHECK(inj[0].p_kw == doctest::Approx(-200.0));
  CHECK_THROWS(denormalize({{0.5, 0.5}, {0.5, 0.5}}, m));
}

TEST_CASE("project examples") {
  const auto& m = one();
  const double smax = m.ders[0].s_max_kva;
  PowerInjection p{200.0, 0.0};
  auto a = project(std::span(&p, 1), m);
  CHECK(a.injections[0].p_kw == 200.0);
  CHECK_FALSE(a.clipped[0]);

  p = {200.0, 200.0};
  a = project(std::span(&p, 1), m);
  CHECK(a.clipped[0]);
  CHECK(std::abs(std::hypot(a.injections[0].p_kw, a.injections[0].q_kvar) - smax) < 1e-9);

  p = {0.0, 0.0};
  a = project(std::span(&p, 1), m);
  CHECK(a.injections[0].p_kw == 0.0);
  CHECK_FALSE(a.clipped[0]);
}

TEST_CASE("projection properties") {
  Rng rng(21);
  const auto m = build_feeder(reference_feeder_spec(3));
  for (int k = 0; k < 5000; ++k) {
    std::vector<PowerInjection> raw;
    for (const auto& d : m.ders) raw.push_back({uniform(rng, -1.5, 1.5) * d.p_inst_kw, uniform(rng, -1.5, 1.5) * d.s_max_kva});
    const auto a = project(raw, m);
    const auto b = project(a.injections, m);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto& d = m.ders[i];
      const auto& x = a.injections[i];
      REQUIRE(std::abs(x.p_kw) <= d.p_inst_kw + 1e-12);
      REQUIRE(std::hypot(x.p_kw, x.q_kvar) <= d.s_max_kva + kApparentPowerSlackKva);
      REQUIRE(std::hypot(x.p_kw, x.q_kvar) <= std::hypot(raw[i].p_kw, raw[i].q_kvar) + 1e-12);
      // idempotent
      REQUIRE(b.injections[i].p_kw == x.p_kw);
      REQUIRE(b.injections[i].q_kvar == x.q_kvar);
      REQUIRE_FALSE(b.clipped[i]);
      if (!a.clipped[i]) {
        REQUIRE(x.p_kw == raw[i].p_kw);
        REQUIRE(x.q_kvar == raw[i].q_kvar);
      }
    }
  }
}

TEST_CASE("renormalize inverts denormalize") {
  const auto& m = one();
  CHECK(renormalize(std::vector<PowerInjection>{{0.0, 0.0}}, m).p_n[0] == 0.5);
  Rng rng(22);
  for (int k = 0; k < 1000; ++k) {
    SetpointVector sp{{uniform(rng, 0.1, 0.9)}, {uniform(rng, 0.1, 0.6)}};
    const auto inj = denormalize(sp, m);
    const auto a = project(inj, m);
    if (a.clipped[0]) continue;
    const auto back = renormalize(a, m);
    CHECK(std::abs(back.p_n[0] - sp.p_n[0]) < 1e-12);
    CHECK(std::abs(back.q_n[0] - sp.q_n[0]) < 1e-12);
  }
}

TEST_CASE("clipped points renormalize inside the unit box and reproduce the applied power") {
  const auto& m = one();
  Rng rng(23);
  for (int k = 0; k < 1000; ++k) {
    SetpointVector sp{{uniform01(rng)}, {uniform01(rng)}};
    const auto a = project(denormalize(sp, m), m);
    const auto back = renormalize(a, m);
    REQUIRE(back.p_n[0] >= 0.0);
    REQUIRE(back.p_n[0] <= 1.0);
    REQUIRE(back.q_n[0] >= 0.0);
    REQUIRE(back.q_n[0] <= 1.0);
    const auto again = project(denormalize(back, m), m);
    CHECK(again.injections[0].p_kw == doctest::Approx(a.injections[0].p_kw).epsilon(1e-12));
    CHECK(again.injections[0].q_kvar == doctest::Approx(a.injections[0].q_kvar).epsilon(1e-12));
  }
}

TEST_CASE("flat layout round trip") {
  SetpointVector sp{{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}};
  const auto flat = sp.flatten();
  CHECK(flat == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  const auto back = SetpointVector::from_flat(flat);
  CHECK(back.p_n == sp.p_n);
  CHECK(back.q_n == sp.q_n);
  SetpointVector c{{-0.5, 1.5}, {0.5, 2.0}};
  c.clamp();
  CHECK(c.p_n == std::vector<double>{0.0, 1.0});
  CHECK(c.q_n == std::vector<double>{0.5, 1.0});
}
