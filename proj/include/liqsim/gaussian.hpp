#pragma once

#include <optional>
#include <string>
#include <vector>

namespace liqsim::gaussian {

/// Standard normal CDF. Throws DomainError for non-finite input.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal quantile for 0 < p < 1.
///
/// Wichura's AS241 (PPND16) rational approximation followed by one Newton
/// step on the CDF. Upper-half probabilities are mapped through 1 - p, which
/// is exact there, so inv(p) = -inv(1 - p) holds bit-for-bit for p >= 0.5.
double std_normal_inv_cdf(double p);

enum class ZRounding { exact, one_decimal };

/// Rounds half away from zero to `decimals` places.
double round_half_away(double x, int decimals);

/// z factor for a service level in (0, 1).
double z_for_service_level(double level, ZRounding rounding);

/// One row of the service-rate / rupture-risk / z table.
struct ZRow {
  double service_level = 0.0;      // fraction in (0, 1]
  double rupture_risk = 0.0;       // 1 - service_level
  std::optional<double> z;         // computed; empty where no quantile exists
  double published_z = 0.0;        // value the reference table prints
  std::string note;                // non-empty for flagged rows
};

/// Rows for 50, 84, 90, 95, 97.5, 99, 99.5 and 100 percent service.
/// One-decimal z in table mode; exact quantiles when `rounding` is exact.
/// The 100% row carries no z and a note explaining why.
std::vector<ZRow> service_level_table(ZRounding rounding = ZRounding::one_decimal);

/// Service levels whose computed z differs from the published value.
std::vector<double> table_mismatches(const std::vector<ZRow>& rows);

}  // namespace liqsim::gaussian
