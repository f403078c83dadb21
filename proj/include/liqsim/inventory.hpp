#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace liqsim::inventory {

/// Stochastic demand per demand-calculation period, in GB.
struct DemandModel {
  double mean_per_period = 0.0;
  double std = 0.0;
  double period_length = 1.0;  // days

  void validate() const;
  double daily_mean() const { return mean_per_period / period_length; }
};

/// Stochastic replenishment delay, in days.
struct LeadTimeModel {
  double mean = 1.0;
  double std = 0.0;

  void validate() const;
};

enum class SafetyStockVariant { demand_only, leadtime_only, combined };

/// Inputs for the three safety-stock cases. Only the fields the variant
/// uses are read: `sigma_dmdt` for demand_only; `sigma_dt` and
/// `mean_demand` for leadtime_only; everything but `sigma_dmdt` for combined.
struct SafetyStockInput {
  double z = 0.0;
  SafetyStockVariant variant = SafetyStockVariant::combined;
  double sigma_dmdt = 0.0;   // GB over the lead time
  double sigma_dm = 0.0;     // GB per demand period
  double sigma_dt = 0.0;     // days
  double mean_demand = 0.0;  // GB per day
  double m = 1.0;            // lead time / demand period
};

enum class ReviewMode { reorder_point, periodic };

struct ReorderPolicy {
  double safety_stock = 0.0;   // GB
  double command_point = 0.0;  // GB
  ReviewMode review = ReviewMode::reorder_point;
  double review_interval = 0.0;  // days, periodic mode only
  double order_quantity = 0.0;   // GB

  void validate() const;
};

double safety_stock_demand_var(double z, double sigma_dmdt);
double safety_stock_leadtime_var(double z, double sigma_dt, double mean_demand);
double safety_stock_combined(double z, double sigma_dm, double sigma_dt, double mean_demand,
                             double m);
double safety_stock(const SafetyStockInput& in);

double m_ratio(double lead_time_length, double demand_period_length);

/// Command point: expected lead-time consumption plus safety stock.
double reorder_point(double mean_demand, double lead_time, double safety_stock);

/// Reorder-point policy for a service factor z using the combined formula.
/// PC uses the mean lead time. Order quantity defaults to five mean
/// lead-time demands when `order_quantity` is not given.
ReorderPolicy make_policy(double z, const DemandModel& demand, const LeadTimeModel& lead,
                          std::optional<double> order_quantity = std::nullopt);

// ---------------------------------------------------------------------------
// Published-table reproduction

enum class TableId { T2, T3, T4, T5, T6 };

/// Parses "T2".."T6"; throws UsageError otherwise.
TableId parse_table_id(std::string_view id);
std::string_view to_string(TableId id);

struct TableRow {
  double demand_per_day = 0.0;
  double service_level = 0.0;
  double z = 0.0;
  std::optional<double> demand_dev;
  std::optional<double> time_dev;
  double ss = 0.0;  // exact
  double pc = 0.0;  // exact
  int decimals = 0; // printed precision of the ss/pc cells
};

/// Rows of one published table, computed from the table's own z inputs
/// (not re-derived from the service level).
std::vector<TableRow> reproduce_table(TableId id);

/// Truncates toward zero at `decimals`, snapping values within 1e-9 of a
/// grid point first so binary representation error cannot drop a digit.
double truncate_to(double x, int decimals);

/// CSV with header demand_per_day,service_level,z,demand_dev,time_dev,ss,pc.
/// ss and pc are written at the row's printed precision.
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace liqsim::inventory
