#include "liqsim/gaussian.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "liqsim/error.hpp"

namespace liqsim::gaussian {

namespace {

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// AS241 coefficients, lowest order first.
constexpr std::array<double, 8> kCentralNum = {
    3.387132872796366608,   133.14166789178437745, 1971.5909503065514427,
    13731.693765509461125,  45921.953931549871457, 67265.770927008700853,
    33430.575583588128105,  2509.0809287301226727};
constexpr std::array<double, 8> kCentralDen = {
    1.0,                    42.313330701600911252, 687.1870074920579083,
    5394.1960214247511077,  21213.794301586595867, 39307.89580009271061,
    28729.085735721942674,  5226.495278852545925};
constexpr std::array<double, 8> kNearNum = {
    1.42343711074968357734,  4.6303378461565452959,   5.7694972214606914055,
    3.64784832476320460504,  1.27045825245236838258,  0.24178072517745061177,
    0.0227238449892691845833, 7.7454501427834140764e-4};
constexpr std::array<double, 8> kNearDen = {
    1.0,                     2.05319162663775882187,  1.6763848301838038494,
    0.68976733498510000455,  0.14810397642748007459,  0.0151986665636164571966,
    5.475938084995344946e-4, 1.05075007164441684324e-9};
constexpr std::array<double, 8> kTailNum = {
    6.6579046435011037772,   5.4637849111641143699,   1.7848265399172913358,
    0.29656057182850489123,  0.026532189526576123093, 0.0012426609473880784386,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr std::array<double, 8> kTailDen = {
    1.0,                     0.59983220655588793769,  0.13692988092273580531,
    0.0148753612908506148525, 7.868691311456132591e-4, 1.8463183175100546818e-5,
    1.4215117583164458887e-7, 2.04426310338993978564e-15};

// Quantile for p <= 0.5.
double lower_quantile(double p) {
  const double q = p - 0.5;
  double z;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    z = q * horner(kCentralNum, r) / horner(kCentralDen, r);
  } else {
    double r = std::sqrt(-std::log(p));
    if (r <= 5.0) {
      r -= 1.6;
      z = -horner(kNearNum, r) / horner(kNearDen, r);
    } else {
      r -= 5.0;
      z = -horner(kTailNum, r) / horner(kTailDen, r);
    }
  }
  // Newton step; for p <= 0.5 the CDF is evaluated in its accurate tail.
  return z - (std_normal_cdf(z) - p) / std_normal_pdf(z);
}

}  // namespace

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw DomainError("std_normal_cdf: non-finite argument");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_inv_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_inv_cdf: p must lie in (0, 1)");
  if (p > 0.5) return -lower_quantile(1.0 - p);
  return lower_quantile(p);
}

double round_half_away(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

double z_for_service_level(double level, ZRounding rounding) {
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("z_for_service_level: level must lie in (0, 1)");
  const double z = std_normal_inv_cdf(level);
  return rounding == ZRounding::exact ? z : round_half_away(z, 1);
}

std::vector<ZRow> service_level_table(ZRounding rounding) {
  struct Published {
    double level;
    double z;
  };
  static constexpr std::array<Published, 8> kPublished = {{
      {0.50, 0.0}, {0.84, 1.0}, {0.90, 1.3}, {0.95, 1.6},
      {0.975, 2.0}, {0.99, 2.3}, {0.995, 2.6}, {1.0, 3.0},
  }};

  std::vector<ZRow> rows;
  rows.reserve(kPublished.size());
  for (const auto& pub : kPublished) {
    ZRow row;
    row.service_level = pub.level;
    row.rupture_risk = 1.0 - pub.level;
    row.published_z = pub.z;
    if (pub.level < 1.0) {
      row.z = z_for_service_level(pub.level, rounding);
    } else {
      row.note = "unbounded: the normal law has no finite quantile at 100% service";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> table_mismatches(const std::vector<ZRow>& rows) {
  std::vector<double> out;
  for (const auto& row : rows) {
    if (!row.z || *row.z != row.published_z) out.push_back(row.service_level);
  }
  return out;
}

}  // namespace liqsim::gaussian
