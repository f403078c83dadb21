#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "liqsim/error.hpp"
#include "liqsim/gaussian.hpp"

using namespace liqsim::gaussian;
using liqsim::DomainError;

namespace {

// Independent oracle: composite Simpson on the density from 0 to x.
double simpson_cdf(double x) {
  const int n = 4000;  // even
  const double h = x / n;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double acc = pdf(0.0) + pdf(x);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * pdf(i * h);
  return 0.5 + acc * h / 3.0;
}

// Independent oracle: bisection on the CDF.
double bisect_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(-mid / std::numbers::sqrt2) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("cdf: reference values") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std::fabs(std_normal_cdf(1.96) - 0.975) <= 1e-4);
  CHECK(std::fabs(std_normal_cdf(2.326) - 0.99) <= 1e-4);

  // 40-digit mpmath values.
  CHECK(std::fabs(std_normal_cdf(1.96) - 0.97500210485177956586) <= 1e-10);
  CHECK(std::fabs(std_normal_cdf(2.326) - 0.98999072465913233274) <= 1e-10);
  CHECK(std::fabs(std_normal_cdf(1.0) - 0.84134474606854294859) <= 1e-10);
  CHECK(std::fabs(std_normal_cdf(0.5) - 0.69146246127401310364) <= 1e-10);
  CHECK(std::fabs(std_normal_cdf(5.0) - 0.99999971334842812081) <= 1e-10);
  CHECK(std_normal_cdf(-3.0) == doctest::Approx(0.0013498980316300945267).epsilon(1e-12));
  CHECK(std_normal_cdf(-8.0) == doctest::Approx(6.2209605742717841235e-16).epsilon(1e-12));
}

TEST_CASE("cdf: agrees with quadrature oracle to 1e-10") {
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    CAPTURE(x);
    CHECK(std::fabs(std_normal_cdf(x) - simpson_cdf(x)) <= 1e-10);
  }
}

TEST_CASE("cdf: symmetry and strict monotonicity") {
  double prev = 0.0;
  for (double x = -8.0; x <= 7.5; x += 0.01) {
    CAPTURE(x);
    CHECK(std::fabs(std_normal_cdf(-x) - (1.0 - std_normal_cdf(x))) <= 1e-12);
    const double now = std_normal_cdf(x);
    CHECK(now > prev);
    CHECK(now < 1.0);
    prev = now;
  }
}

TEST_CASE("cdf: non-finite input is a domain error") {
  CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(std_normal_cdf(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(std_normal_cdf(-std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("inv_cdf: reference values") {
  CHECK(std_normal_inv_cdf(0.5) == 0.0);
  CHECK(std::fabs(std_normal_inv_cdf(0.975) - 1.96) <= 0.005);
  CHECK(std::fabs(std_normal_inv_cdf(0.9875) - 2.24) <= 0.01);

  // mpmath, 20 digits.
  CHECK(std_normal_inv_cdf(0.84) == doctest::Approx(0.99445788320975316774).epsilon(1e-12));
  CHECK(std_normal_inv_cdf(0.90) == doctest::Approx(1.281551565544600467).epsilon(1e-12));
  CHECK(std_normal_inv_cdf(0.95) == doctest::Approx(1.6448536269514727149).epsilon(1e-12));
  CHECK(std_normal_inv_cdf(0.975) == doctest::Approx(1.9599639845400542355).epsilon(1e-12));
  CHECK(std_normal_inv_cdf(0.99) == doctest::Approx(2.3263478740408411009).epsilon(1e-12));
  CHECK(std_normal_inv_cdf(0.995) == doctest::Approx(2.575829303548900761).epsilon(1e-12));
  CHECK(std_normal_inv_cdf(1e-6) == doctest::Approx(-4.7534243088228989482).epsilon(1e-12));
  CHECK(std_normal_inv_cdf(0.05) == doctest::Approx(-1.6448536269514727149).epsilon(1e-12));
}

TEST_CASE("inv_cdf: round trip over [1e-6, 1 - 1e-6]") {
  double worst = 0.0;
  auto check = [&](double p) {
    const double err = std::fabs(std_normal_cdf(std_normal_inv_cdf(p)) - p);
    worst = std::max(worst, err);
  };
  for (double p = 1e-6; p < 0.5; p *= 1.05) {
    check(p);
    check(1.0 - p);
  }
  for (int i = 1; i < 10000; ++i) check(i / 10000.0);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 20000; ++i) check(u(gen));
  CHECK(worst <= 1e-9);
}

TEST_CASE("inv_cdf: agrees with bisection oracle and is odd") {
  for (double p : {1e-9, 1e-6, 0.001, 0.0228, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999999}) {
    CAPTURE(p);
    CHECK(std::fabs(std_normal_inv_cdf(p) - bisect_quantile(p)) <= 1e-9);
  }
  for (double p = 0.5; p < 1.0; p += 0.0173) {
    CAPTURE(p);
    CHECK(std_normal_inv_cdf(1.0 - p) == -std_normal_inv_cdf(p));
  }
  for (double p = 0.001; p < 0.5; p += 0.0131) {
    CAPTURE(p);
    CHECK(std::fabs(std_normal_inv_cdf(1.0 - p) + std_normal_inv_cdf(p)) <= 1e-9);
  }
}

TEST_CASE("inv_cdf: domain errors") {
  CHECK_THROWS_AS(std_normal_inv_cdf(0.0), DomainError);
  CHECK_THROWS_AS(std_normal_inv_cdf(1.0), DomainError);
  CHECK_THROWS_AS(std_normal_inv_cdf(-0.2), DomainError);
  CHECK_THROWS_AS(std_normal_inv_cdf(1.5), DomainError);
  CHECK_THROWS_AS(std_normal_inv_cdf(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("z_for_service_level") {
  CHECK(z_for_service_level(0.95, ZRounding::one_decimal) == 1.6);
  CHECK(z_for_service_level(0.50, ZRounding::one_decimal) == 0.0);
  CHECK(z_for_service_level(0.995, ZRounding::one_decimal) == 2.6);
  CHECK(z_for_service_level(0.975, ZRounding::exact) == std_normal_inv_cdf(0.975));
  CHECK_THROWS_AS(z_for_service_level(1.0, ZRounding::one_decimal), DomainError);
  CHECK_THROWS_AS(z_for_service_level(0.0, ZRounding::exact), DomainError);
}

TEST_CASE("round_half_away") {
  CHECK(round_half_away(1.25, 1) == doctest::Approx(1.3));
  CHECK(round_half_away(-1.25, 1) == doctest::Approx(-1.3));
  CHECK(round_half_away(1.2816, 1) == doctest::Approx(1.3));
  CHECK(round_half_away(1.6449, 1) == doctest::Approx(1.6));
}

TEST_CASE("service level table matches published z except the 100% row") {
  const auto rows = service_level_table();
  REQUIRE(rows.size() == 8);

  auto find = [&](double level) {
    for (const auto& r : rows)
      if (r.service_level == level) return r;
    FAIL("row not found");
    return rows.front();
  };
  CHECK(find(0.84).z == 1.0);
  CHECK(find(0.99).z == 2.3);
  CHECK(find(0.90).z == 1.3);

  const auto last = find(1.0);
  CHECK_FALSE(last.z.has_value());
  CHECK(last.note.find("unbounded") != std::string::npos);
  CHECK(last.published_z == 3.0);

  CHECK(table_mismatches(rows) == std::vector<double>{1.0});

  double prev = -1.0;
  for (const auto& r : rows) {
    CHECK(r.service_level + r.rupture_risk == 1.0);
    if (r.z) {
      CHECK(*r.z >= prev);
      prev = *r.z;
    }
  }
}

TEST_CASE("exact table keeps full-precision quantiles") {
  const auto rows = service_level_table(ZRounding::exact);
  CHECK(rows[4].service_level == 0.975);
  CHECK(std::fabs(*rows[4].z - 1.959964) < 5e-7);
  CHECK(table_mismatches(rows).size() == 7);  // only the 50% row is exact
}
