#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "liqsim/inventory.hpp"
#include "liqsim/reservoir.hpp"
#include "liqsim/rng.hpp"

namespace liqsim::simulate {

inline constexpr double kMinLeadTime = 0.01;  // days

struct SimConfig {
  inventory::DemandModel demand;
  inventory::LeadTimeModel lead_time;
  inventory::ReorderPolicy policy;
  std::optional<reservoir::ReservoirSpec> reservoir;
  int horizon = 365;  // days
  std::uint64_t seed = 0;
  double initial_stock = 0.0;
  std::optional<double> target_service;  // Phi(z) when the policy came from a z factor

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

struct StockoutStats {
  std::uint64_t cycles = 0;
  std::uint64_t stockout_cycles = 0;
  double empirical_service = 1.0;
  std::optional<double> target_service;
  std::optional<double> fill_rate;  // served / demanded, day simulation only
};

/// Sums counts and recomputes the service ratio. Fill rates are combined
/// only when both sides carry one, weighted by cycles.
StockoutStats merge(const StockoutStats& a, const StockoutStats& b);

struct DayRecord {
  int day = 0;
  double opening = 0.0;   // stock at the start of the day
  double demand = 0.0;
  double served = 0.0;
  double receipts = 0.0;  // orders landing at the end of the day
  double closing = 0.0;
  bool order_placed = false;
  std::optional<int> order_arrival_day;
  std::optional<double> throttle_orifice;  // m^2, when a throttle event fired
};

struct SimulationTrace {
  std::vector<DayRecord> days;
  StockoutStats summary;
};

/// Normal(mean, std) per demand period, clamped below at 0.
double sample_demand(const inventory::DemandModel& model, rng::CounterStream& rng);

/// Normal(mean, std) in days, clamped below at kMinLeadTime.
double sample_lead_time(const inventory::LeadTimeModel& model, rng::CounterStream& rng);

/// Replenishment-cycle Monte Carlo. Each cycle draws a lead time L and the
/// lead-time demand from Normal(rate * L, std * sqrt(L / period)); the cycle
/// is a stockout when that demand exceeds the command point. Cycle i uses
/// counter i of two named streams, so the result does not depend on
/// `threads`.
StockoutStats run_cycle_mc(const SimConfig& config, std::uint64_t n_cycles, unsigned threads = 1);

/// Runs run_cycle_mc once per seed on up to `threads` workers and merges.
StockoutStats run_seed_batch(const SimConfig& config, std::uint64_t n_cycles,
                             std::span<const std::uint64_t> seeds, unsigned threads = 1);

/// Day-by-day simulation with lost sales.
///
/// Each day: demand is drawn and served up to the available stock (and, with
/// a reservoir, up to its outflow capacity for the day); orders due today
/// land at the end of the day; then the review rule may place an order; then,
/// if an order is outstanding, stock is at or below the safety stock and the
/// mean demand until arrival exceeds the stock, the orifice is throttled so
/// the remaining stock lasts until the arrival. An order placed on day d with
/// lead time L lands at the end of day d + ceil(L).
SimulationTrace run_day_sim(const SimConfig& config);

/// Same loop as run_day_sim without retaining per-day records.
StockoutStats day_sim_stats(const SimConfig& config);

/// Cycle accounting over a trace. A cycle closes on each day with receipts;
/// a trailing partial cycle counts only if it lost demand. Throws
/// UsageError on an empty trace.
StockoutStats summarize(const SimulationTrace& trace);

/// CSV with header day,opening,demand,served,ordered,arrival,throttle_s.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);
/// JSON array of day records with every field.
void write_trace_json(std::ostream& out, const SimulationTrace& trace);
/// JSON object {cycles, stockouts, empirical_service, target_service, seed}.
void write_stats_json(std::ostream& out, const StockoutStats& stats, std::uint64_t seed);

}  // namespace liqsim::simulate
