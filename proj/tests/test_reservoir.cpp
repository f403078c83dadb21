#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "liqsim/error.hpp"
#include "liqsim/reservoir.hpp"

using namespace liqsim::reservoir;
using liqsim::ConfigError;
using liqsim::DomainError;

namespace {

// Closed form of S dh/dt = -s sqrt(2 g h): sqrt(h) falls linearly.
double closed_form_height(const ReservoirSpec& spec, double h0, double t) {
  const double u = std::sqrt(h0) - spec.orifice_section / spec.cross_section *
                                       std::sqrt(spec.gravity / 2.0) * t;
  return u > 0.0 ? u * u : 0.0;
}

ReservoirSpec unit_tank() {
  ReservoirSpec spec;
  spec.cross_section = 1.0;
  spec.orifice_section = 0.01;
  spec.gravity = 9.81;
  return spec;
}

}  // namespace

TEST_CASE("bernoulli head") {
  CHECK(bernoulli_head({0, 0, 0}, 1000, 9.81) == 0);
  CHECK(bernoulli_head({0, 1, 101325}, 1000, 9.81) == doctest::Approx(111135).epsilon(1e-12));

  const double h = 2.0;
  const double surface = bernoulli_head({0, h, kAtmosphericPressure}, 1000, 9.81);
  const double jet =
      bernoulli_head({torricelli_velocity(h, 9.81), 0, kAtmosphericPressure}, 1000, 9.81);
  CHECK(std::fabs(surface - jet) <= 1e-9 * surface);

  CHECK_THROWS_AS(bernoulli_head({0, 0, 0}, 0, 9.81), DomainError);
  CHECK_THROWS_AS(bernoulli_head({0, 0, 0}, 1000, -1), DomainError);
}

TEST_CASE("Bernoulli consistency and density independence") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> heads(1e-3, 500.0), rhos(0.5, 20000.0);
  for (int i = 0; i < 1000; ++i) {
    const double h = heads(gen), rho = rhos(gen);
    const double v = torricelli_velocity(h, kStandardGravity);
    const double surface = bernoulli_head({0, h, kAtmosphericPressure}, rho, kStandardGravity);
    const double jet = bernoulli_head({v, 0, kAtmosphericPressure}, rho, kStandardGravity);
    CAPTURE(h);
    CAPTURE(rho);
    CHECK(std::fabs(surface - jet) <= 1e-9 * surface);
  }
}

TEST_CASE("torricelli velocity") {
  CHECK(torricelli_velocity(0, 9.81) == 0);
  CHECK(std::fabs(torricelli_velocity(5, 9.81) - 9.9045) <= 1e-4);
  CHECK(std::fabs(torricelli_velocity(2, 9.81) - 6.2642) <= 1e-4);
  CHECK_THROWS_AS(torricelli_velocity(-0.1, 9.81), DomainError);
}

TEST_CASE("outflow rate") {
  auto spec = unit_tank();
  CHECK(outflow_rate(spec, 0) == 0);
  CHECK(std::fabs(outflow_rate(spec, 5) - 0.099045) <= 1e-5);
  const double q = outflow_rate(spec, 3.3);
  spec.orifice_section *= 2;
  CHECK(outflow_rate(spec, 3.3) == 2 * q);
  CHECK_THROWS_AS(outflow_rate(spec, -1), DomainError);
}

TEST_CASE("drain step") {
  const auto spec = unit_tank();

  SUBCASE("empty tank is absorbing") {
    const auto next = drain_step(spec, {0.0, 4.0}, 0.5);
    CHECK(next.h == 0.0);
    CHECK(next.t == 4.5);
  }
  SUBCASE("ten seconds from h0 = 2 matches the closed form") {
    ReservoirState s{2.0, 0.0};
    for (int i = 0; i < 10000; ++i) s = drain_step(spec, s, 1e-3);
    CHECK(s.t == doctest::Approx(10.0));
    // (sqrt 2 - 0.01 sqrt(9.81 / 2) 10)^2, mpmath.
    CHECK(std::fabs(s.h - 1.422631609465367) <= 1e-4);
    CHECK(std::fabs(s.h - closed_form_height(spec, 2.0, 10.0)) <= 1e-12);
  }
  SUBCASE("overshooting step lands on zero") {
    const auto next = drain_step(spec, {1e-8, 0.0}, 10.0);
    CHECK(next.h == 0.0);
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(drain_step(spec, {1.0, 0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(drain_step(spec, {1.0, 0.0}, -1.0), DomainError);
    CHECK_THROWS_AS(drain_step(spec, {-1.0, 0.0}, 1.0), DomainError);
  }
}

TEST_CASE("analytic empty time") {
  const auto spec = unit_tank();
  CHECK(analytic_empty_time(spec, 0) == 0);
  CHECK(std::fabs(analytic_empty_time(spec, 2) - 63.855) <= 0.01);
  CHECK(analytic_empty_time(spec, 4 * 1.7) == 2 * analytic_empty_time(spec, 1.7));
  CHECK_THROWS_AS(analytic_empty_time(spec, -1), DomainError);
}

TEST_CASE("full drain from h0 = 2") {
  const auto trace = drain(unit_tank(), 2.0);
  CHECK(trace.analytic_empty_time == doctest::Approx(63.855085681410095).epsilon(1e-12));
  CHECK(std::fabs(trace.crossing_time - 63.855) <= 0.001 * 63.855);
  CHECK(trace.samples.back().h == 0.0);
  CHECK(trace.samples.front().h == 2.0);
  CHECK(trace.samples.front().stock == 2.0);
}

TEST_CASE("zero head drain is a single sample") {
  const auto trace = drain(unit_tank(), 0.0);
  REQUIRE(trace.samples.size() == 1);
  CHECK(trace.analytic_empty_time == 0.0);
  CHECK(trace.crossing_time == 0.0);
}

TEST_CASE("drain rejects invalid specs") {
  auto spec = unit_tank();
  spec.orifice_section = 2.0;
  CHECK_THROWS_AS(drain(spec, 1.0), ConfigError);
  spec = unit_tank();
  spec.cross_section = 0.0;
  CHECK_THROWS_AS(drain(spec, 1.0), ConfigError);
  CHECK_THROWS_AS(drain(unit_tank(), -1.0), DomainError);
}

TEST_CASE("integrator vs closed form over randomized specs") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> areas(0.2, 5.0), ratios(0.001, 0.05), heads(0.1, 20.0);
  for (int k = 0; k < 100; ++k) {
    ReservoirSpec spec;
    spec.cross_section = areas(gen);
    spec.orifice_section = spec.cross_section * ratios(gen);
    const double h0 = heads(gen);
    const auto trace = drain(spec, h0);

    double sup = 0.0, pointwise = 0.0, prev = h0;
    for (const auto& s : trace.samples) {
      const double exact = closed_form_height(spec, h0, s.t);
      sup = std::max(sup, std::fabs(s.h - exact));
      if (exact >= 0.01 * h0) pointwise = std::max(pointwise, std::fabs(s.h - exact) / exact);
      CHECK(s.h <= prev);
      CHECK(s.h >= 0.0);
      prev = s.h;
    }
    CAPTURE(k);
    CHECK(sup / h0 <= 1e-4);
    CHECK(pointwise <= 1e-4);
    CHECK(std::fabs(trace.crossing_time - trace.analytic_empty_time) <=
          1e-3 * trace.analytic_empty_time);
  }
}

TEST_CASE("throttle orifice") {
  CHECK(throttle_orifice(0.0, 100, 2, 9.81) == 0.0);
  CHECK(std::fabs(throttle_orifice(0.5, 100, 2, 9.81) - 7.982e-4) <= 1e-6);
  CHECK(throttle_orifice(0.5, 200, 2, 9.81) == throttle_orifice(0.5, 100, 2, 9.81) / 2);
  CHECK_THROWS_AS(throttle_orifice(0.5, 0, 2, 9.81), DomainError);
  CHECK_THROWS_AS(throttle_orifice(0.5, 100, 0, 9.81), DomainError);
  CHECK_THROWS_AS(throttle_orifice(-0.5, 100, 2, 9.81), DomainError);
}

TEST_CASE("throttled drain never releases more than the budget") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> areas(0.5, 3.0), heads(0.5, 10.0), fractions(0.05, 1.0),
      horizons(10.0, 5000.0);
  for (int k = 0; k < 200; ++k) {
    ReservoirSpec spec;
    spec.cross_section = areas(gen);
    const double h = heads(gen);
    const double budget = fractions(gen) * spec.cross_section * h;
    const double horizon = horizons(gen);
    spec.orifice_section = throttle_orifice(budget, horizon, h, spec.gravity);
    REQUIRE(spec.orifice_section < spec.cross_section);

    ReservoirState s{h, 0.0};
    const int steps = 2000;
    for (int i = 0; i < steps; ++i) s = drain_step(spec, s, horizon / steps);
    const double drained = spec.cross_section * (h - s.h);
    CAPTURE(k);
    CHECK(drained <= budget * (1 + 1e-12));
  }
}

TEST_CASE("stock coupling and daily capacity") {
  ReservoirSpec spec = unit_tank();
  spec.cross_section = 2.0;
  spec.stock_per_volume = 3.0;
  CHECK(stock_from_height(spec, 1.5) == 9.0);
  CHECK(height_from_stock(spec, 9.0) == 1.5);
  CHECK(daily_capacity(spec, 0.01, 2.0) ==
        doctest::Approx(3.0 * 0.01 * std::sqrt(2 * 9.81 * 2.0) * 86400.0));
}

TEST_CASE("drain CSV") {
  std::ostringstream out;
  write_drain_csv(out, drain(unit_tank(), 0.0));
  CHECK(out.str() == "t_s,h_m,outflow_m3s,stock_gb\n0,0,0,0\n");
}
