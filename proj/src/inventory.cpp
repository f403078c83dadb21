#include "liqsim/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "liqsim/error.hpp"

namespace liqsim::inventory {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void DemandModel::validate() const {
  if (!finite_nonneg(mean_per_period)) throw ConfigError("demand.mean must be >= 0");
  if (!finite_nonneg(std)) throw ConfigError("demand.std must be >= 0");
  if (!(std::isfinite(period_length) && period_length > 0.0))
    throw ConfigError("demand.period_length must be > 0");
}

void LeadTimeModel::validate() const {
  if (!(std::isfinite(mean) && mean > 0.0)) throw ConfigError("lead_time.mean must be > 0");
  if (!finite_nonneg(std)) throw ConfigError("lead_time.std must be >= 0");
}

void ReorderPolicy::validate() const {
  if (!finite_nonneg(safety_stock)) throw ConfigError("policy.safety_stock must be >= 0");
  if (!(std::isfinite(command_point) && command_point >= safety_stock))
    throw ConfigError("policy.command_point must be >= policy.safety_stock");
  if (!(std::isfinite(order_quantity) && order_quantity > 0.0))
    throw ConfigError("policy.order_quantity must be > 0");
  if (review == ReviewMode::periodic && !(std::isfinite(review_interval) && review_interval >= 1.0))
    throw ConfigError("policy.review_interval must be >= 1 day in periodic mode");
}

double safety_stock_demand_var(double z, double sigma_dmdt) {
  require(std::isfinite(z), "safety_stock_demand_var: z must be finite");
  require(finite_nonneg(sigma_dmdt), "safety_stock_demand_var: sigma must be >= 0");
  return z * sigma_dmdt;
}

double safety_stock_leadtime_var(double z, double sigma_dt, double mean_demand) {
  require(std::isfinite(z), "safety_stock_leadtime_var: z must be finite");
  require(finite_nonneg(sigma_dt), "safety_stock_leadtime_var: sigma_dt must be >= 0");
  require(finite_nonneg(mean_demand), "safety_stock_leadtime_var: mean demand must be >= 0");
  return z * sigma_dt * mean_demand;
}

double safety_stock_combined(double z, double sigma_dm, double sigma_dt, double mean_demand,
                             double m) {
  require(std::isfinite(z), "safety_stock_combined: z must be finite");
  require(finite_nonneg(sigma_dm), "safety_stock_combined: sigma_dm must be >= 0");
  require(finite_nonneg(sigma_dt), "safety_stock_combined: sigma_dt must be >= 0");
  require(finite_nonneg(mean_demand), "safety_stock_combined: mean demand must be >= 0");
  require(std::isfinite(m) && m > 0.0, "safety_stock_combined: m must be > 0");
  const double demand_term = sigma_dm * std::sqrt(m);
  const double lead_term = mean_demand * sigma_dt;
  return z * std::hypot(demand_term, lead_term);
}

double safety_stock(const SafetyStockInput& in) {
  switch (in.variant) {
    case SafetyStockVariant::demand_only:
      return safety_stock_demand_var(in.z, in.sigma_dmdt);
    case SafetyStockVariant::leadtime_only:
      return safety_stock_leadtime_var(in.z, in.sigma_dt, in.mean_demand);
    case SafetyStockVariant::combined:
      return safety_stock_combined(in.z, in.sigma_dm, in.sigma_dt, in.mean_demand, in.m);
  }
  throw DomainError("safety_stock: unknown variant");
}

double m_ratio(double lead_time_length, double demand_period_length) {
  require(std::isfinite(lead_time_length) && lead_time_length > 0.0,
          "m_ratio: lead time length must be > 0");
  require(std::isfinite(demand_period_length) && demand_period_length > 0.0,
          "m_ratio: demand period length must be > 0");
  return lead_time_length / demand_period_length;
}

double reorder_point(double mean_demand, double lead_time, double safety_stock) {
  require(finite_nonneg(mean_demand), "reorder_point: mean demand must be >= 0");
  require(finite_nonneg(lead_time), "reorder_point: lead time must be >= 0");
  require(finite_nonneg(safety_stock), "reorder_point: safety stock must be >= 0");
  return mean_demand * lead_time + safety_stock;
}

ReorderPolicy make_policy(double z, const DemandModel& demand, const LeadTimeModel& lead,
                          std::optional<double> order_quantity) {
  demand.validate();
  lead.validate();
  const double m = m_ratio(lead.mean, demand.period_length);
  const double rate = demand.daily_mean();
  ReorderPolicy policy;
  policy.safety_stock = std::max(0.0, safety_stock_combined(z, demand.std, lead.std, rate, m));
  policy.command_point = reorder_point(rate, lead.mean, policy.safety_stock);
  policy.order_quantity = order_quantity.value_or(rate * lead.mean * 5.0);
  return policy;
}

TableId parse_table_id(std::string_view id) {
  if (id == "T2") return TableId::T2;
  if (id == "T3") return TableId::T3;
  if (id == "T4") return TableId::T4;
  if (id == "T5") return TableId::T5;
  if (id == "T6") return TableId::T6;
  throw UsageError(fmt::format("unknown table id '{}' (expected T2, T3, T4, T5 or T6)", id));
}

std::string_view to_string(TableId id) {
  switch (id) {
    case TableId::T2: return "T2";
    case TableId::T3: return "T3";
    case TableId::T4: return "T4";
    case TableId::T5: return "T5";
    case TableId::T6: return "T6";
  }
  return "?";
}

std::vector<TableRow> reproduce_table(TableId id) {
  // Every table assumes a one-day mean replenishment time with daily demand.
  constexpr double kLead = 1.0;
  const double m = m_ratio(kLead, 1.0);

  auto demand_row = [&](double level, double z, double sigma, int decimals) {
    TableRow r{100.0, level, z, sigma, std::nullopt, 0.0, 0.0, decimals};
    r.ss = safety_stock_demand_var(z, sigma);
    r.pc = reorder_point(r.demand_per_day, kLead, r.ss);
    return r;
  };
  auto lead_row = [&](double level, double z, double sigma_dt, int decimals) {
    TableRow r{100.0, level, z, std::nullopt, sigma_dt, 0.0, 0.0, decimals};
    r.ss = safety_stock_leadtime_var(z, sigma_dt, r.demand_per_day);
    r.pc = reorder_point(r.demand_per_day, kLead, r.ss);
    return r;
  };
  auto combined_row = [&](double sigma_dm, double sigma_dt) {
    TableRow r{1024.0, 0.9875, 2.2, sigma_dm, sigma_dt, 0.0, 0.0, 1};
    r.ss = safety_stock_combined(r.z, sigma_dm, sigma_dt, r.demand_per_day, m);
    r.pc = reorder_point(r.demand_per_day, kLead, r.ss);
    return r;
  };

  switch (id) {
    case TableId::T2:
      return {demand_row(0.99, 2.9, 20, 1), demand_row(0.975, 2.0, 20, 1),
              demand_row(0.95, 1.64, 20, 1)};
    case TableId::T3:
      return {demand_row(0.975, 2.0, 30, 0), demand_row(0.975, 2.0, 20, 0),
              demand_row(0.975, 2.0, 15, 0)};
    case TableId::T4:
      return {lead_row(0.99, 2.9, 0.2, 1), lead_row(0.975, 2.0, 0.2, 1),
              lead_row(0.95, 1.64, 0.2, 1)};
    case TableId::T5:
      return {lead_row(0.975, 2.0, 0.8, 0), lead_row(0.975, 2.0, 0.5, 0),
              lead_row(0.975, 2.0, 0.2, 0)};
    case TableId::T6:
      return {combined_row(50, 0.3), combined_row(30, 0.2), combined_row(10, 0.6)};
  }
  throw UsageError("reproduce_table: unknown table id");
}

double truncate_to(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double v = x * scale;
  const double nearest = std::round(v);
  if (std::fabs(v - nearest) <= 1e-9 * std::max(1.0, std::fabs(v))) return nearest / scale;
  return std::trunc(v) / scale;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "demand_per_day,service_level,z,demand_dev,time_dev,ss,pc\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : ""; };
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{}\n", r.demand_per_day, r.service_level, r.z,
                       opt(r.demand_dev), opt(r.time_dev), truncate_to(r.ss, r.decimals),
                       truncate_to(r.pc, r.decimals));
  }
}

}  // namespace liqsim::inventory
