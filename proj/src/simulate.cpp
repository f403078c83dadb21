#include "liqsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

#include <fmt/format.h>

#include "json.hpp"
#include "liqsim/error.hpp"

namespace liqsim::simulate {

namespace {

using inventory::DemandModel;
using inventory::ReviewMode;

// Stream names are part of the reproducibility contract.
constexpr std::string_view kCycleLeadStream = "cycle.lead_time";
constexpr std::string_view kCycleDemandStream = "cycle.demand";
constexpr std::string_view kDayDemandStream = "day.demand";
constexpr std::string_view kDayLeadStream = "day.lead_time";

DemandModel per_day(const DemandModel& m) {
  return {m.daily_mean(), m.std / std::sqrt(m.period_length), 1.0};
}

double service_ratio(std::uint64_t cycles, std::uint64_t stockouts) {
  if (cycles == 0) return 1.0;
  return 1.0 - static_cast<double>(stockouts) / static_cast<double>(cycles);
}

StockoutStats cycle_range(const SimConfig& config, std::uint64_t begin, std::uint64_t end) {
  rng::CounterStream lead_rng(config.seed, kCycleLeadStream);
  rng::CounterStream demand_rng(config.seed, kCycleDemandStream);
  lead_rng.seek(begin);
  demand_rng.seek(begin);

  const double rate = config.demand.daily_mean();
  const double pc = config.policy.command_point;
  StockoutStats stats;
  for (std::uint64_t i = begin; i < end; ++i) {
    const double lead = sample_lead_time(config.lead_time, lead_rng);
    const double sd = config.demand.std * std::sqrt(lead / config.demand.period_length);
    const double lead_demand = rate * lead + sd * demand_rng.next_normal();
    ++stats.cycles;
    if (lead_demand > pc) ++stats.stockout_cycles;
  }
  stats.empirical_service = service_ratio(stats.cycles, stats.stockout_cycles);
  return stats;
}

// Folds day records into replenishment-cycle statistics.
class CycleCounter {
 public:
  void add(const DayRecord& rec) {
    demanded_ += rec.demand;
    served_ += rec.served;
    if (rec.served < rec.demand) lost_in_cycle_ = true;
    if (rec.receipts > 0.0) close_cycle();
  }

  StockoutStats finish(std::optional<double> target) {
    if (lost_in_cycle_) close_cycle();
    StockoutStats s;
    s.cycles = cycles_;
    s.stockout_cycles = stockouts_;
    s.empirical_service = service_ratio(cycles_, stockouts_);
    s.target_service = target;
    s.fill_rate = demanded_ > 0.0 ? served_ / demanded_ : 1.0;
    return s;
  }

 private:
  void close_cycle() {
    ++cycles_;
    if (lost_in_cycle_) ++stockouts_;
    lost_in_cycle_ = false;
  }

  std::uint64_t cycles_ = 0;
  std::uint64_t stockouts_ = 0;
  bool lost_in_cycle_ = false;
  double demanded_ = 0.0;
  double served_ = 0.0;
};

struct Outstanding {
  int arrival_day;
  double quantity;
};

template <typename Sink>
void day_loop(const SimConfig& config, Sink&& sink) {
  config.validate();

  const DemandModel daily = per_day(config.demand);
  const auto& policy = config.policy;
  const auto& tank = config.reservoir;
  rng::CounterStream demand_rng(config.seed, kDayDemandStream);
  rng::CounterStream lead_rng(config.seed, kDayLeadStream);

  double stock = config.initial_stock;
  std::vector<Outstanding> orders;
  double orifice = tank ? tank->orifice_section : 0.0;
  bool throttled = false;

  for (int day = 1; day <= config.horizon; ++day) {
    DayRecord rec;
    rec.day = day;
    rec.opening = stock;

    // Demand and service.
    rec.demand = sample_demand(daily, demand_rng);
    double available = stock;
    if (tank && stock > 0.0) {
      const double cap =
          reservoir::daily_capacity(*tank, orifice, reservoir::height_from_stock(*tank, stock));
      available = std::min(available, cap);
    }
    rec.served = std::min(rec.demand, available);
    stock -= rec.served;
    if (stock < 0.0) stock = 0.0;

    // Receipts at the end of the day.
    for (auto it = orders.begin(); it != orders.end();) {
      if (it->arrival_day == day) {
        rec.receipts += it->quantity;
        it = orders.erase(it);
      } else {
        ++it;
      }
    }
    if (rec.receipts > 0.0) {
      stock += rec.receipts;
      if (tank) orifice = tank->orifice_section;
      throttled = false;
    }

    // Review.
    bool place = false;
    if (policy.review == ReviewMode::reorder_point) {
      place = orders.empty() && stock <= policy.command_point;
    } else {
      place = std::floor(day / policy.review_interval) >
              std::floor((day - 1) / policy.review_interval);
    }
    if (place) {
      const double lead = sample_lead_time(config.lead_time, lead_rng);
      const int arrival = day + std::max(1, static_cast<int>(std::ceil(lead - 1e-9)));
      orders.push_back({arrival, policy.order_quantity});
      rec.order_placed = true;
      rec.order_arrival_day = arrival;
    }

    // Throttle so the remaining stock lasts until the next arrival.
    if (tank && !throttled && !orders.empty() && stock <= policy.safety_stock) {
      const int next_arrival =
          std::min_element(orders.begin(), orders.end(), [](const auto& a, const auto& b) {
            return a.arrival_day < b.arrival_day;
          })->arrival_day;
      const int days_left = next_arrival - day;
      if (daily.mean_per_period * days_left > stock) {
        const double h = reservoir::height_from_stock(*tank, stock);
        double adjusted = 0.0;
        if (h > 0.0) {
          adjusted = reservoir::throttle_orifice(stock / tank->stock_per_volume,
                                                 days_left * reservoir::kSecondsPerDay, h,
                                                 tank->gravity);
        }
        orifice = std::min(orifice, adjusted);
        throttled = true;
        rec.throttle_orifice = adjusted;
      }
    }

    rec.closing = stock;
    sink(rec);
  }
}

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

void SimConfig::validate() const {
  demand.validate();
  lead_time.validate();
  policy.validate();
  if (reservoir) reservoir->validate();
  if (horizon < 1) throw ConfigError("horizon must be >= 1 day");
  if (!(std::isfinite(initial_stock) && initial_stock >= policy.command_point))
    throw ConfigError("initial_stock must be >= policy.command_point");
  if (target_service && !(*target_service > 0.0 && *target_service < 1.0))
    throw ConfigError("target_service must lie in (0, 1)");
}

StockoutStats merge(const StockoutStats& a, const StockoutStats& b) {
  StockoutStats out;
  out.cycles = a.cycles + b.cycles;
  out.stockout_cycles = a.stockout_cycles + b.stockout_cycles;
  out.empirical_service = service_ratio(out.cycles, out.stockout_cycles);
  out.target_service = a.target_service ? a.target_service : b.target_service;
  if (a.fill_rate && b.fill_rate && out.cycles > 0) {
    out.fill_rate = (*a.fill_rate * static_cast<double>(a.cycles) +
                     *b.fill_rate * static_cast<double>(b.cycles)) /
                    static_cast<double>(out.cycles);
  }
  return out;
}

double sample_demand(const DemandModel& model, rng::CounterStream& rng) {
  const double draw = model.mean_per_period + model.std * rng.next_normal();
  return draw > 0.0 ? draw : 0.0;
}

double sample_lead_time(const inventory::LeadTimeModel& model, rng::CounterStream& rng) {
  const double draw = model.mean + model.std * rng.next_normal();
  return draw > kMinLeadTime ? draw : kMinLeadTime;
}

StockoutStats run_cycle_mc(const SimConfig& config, std::uint64_t n_cycles, unsigned threads) {
  config.validate();
  if (n_cycles == 0) throw ConfigError("cycle count must be >= 1");
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(n_cycles, 64))));

  StockoutStats total;
  if (threads == 1) {
    total = cycle_range(config, 0, n_cycles);
  } else {
    std::vector<std::future<StockoutStats>> parts;
    const std::uint64_t chunk = (n_cycles + threads - 1) / threads;
    for (std::uint64_t begin = 0; begin < n_cycles; begin += chunk) {
      const std::uint64_t end = std::min(n_cycles, begin + chunk);
      parts.push_back(std::async(std::launch::async, cycle_range, std::cref(config), begin, end));
    }
    for (auto& p : parts) total = merge(total, p.get());
  }
  total.target_service = config.target_service;
  return total;
}

StockoutStats run_seed_batch(const SimConfig& config, std::uint64_t n_cycles,
                             std::span<const std::uint64_t> seeds, unsigned threads) {
  std::vector<SimConfig> configs(seeds.size(), config);
  for (std::size_t i = 0; i < seeds.size(); ++i) configs[i].seed = seeds[i];

  std::vector<StockoutStats> results(seeds.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, seeds.size()));
  for (std::size_t base = 0; base < seeds.size(); base += workers) {
    std::vector<std::future<StockoutStats>> wave;
    for (std::size_t i = base; i < std::min(seeds.size(), base + workers); ++i)
      wave.push_back(std::async(std::launch::async, [&, i] { return run_cycle_mc(configs[i], n_cycles); }));
    for (std::size_t i = 0; i < wave.size(); ++i) results[base + i] = wave[i].get();
  }

  StockoutStats total;
  for (const auto& r : results) total = merge(total, r);
  total.target_service = config.target_service;
  return total;
}

SimulationTrace run_day_sim(const SimConfig& config) {
  SimulationTrace trace;
  trace.days.reserve(static_cast<std::size_t>(std::max(config.horizon, 0)));
  day_loop(config, [&](const DayRecord& rec) { trace.days.push_back(rec); });
  trace.summary = summarize(trace);
  trace.summary.target_service = config.target_service;
  return trace;
}

StockoutStats day_sim_stats(const SimConfig& config) {
  CycleCounter counter;
  day_loop(config, [&](const DayRecord& rec) { counter.add(rec); });
  return counter.finish(config.target_service);
}

StockoutStats summarize(const SimulationTrace& trace) {
  if (trace.days.empty()) throw UsageError("summarize: empty trace");
  CycleCounter counter;
  for (const auto& rec : trace.days) counter.add(rec);
  return counter.finish(trace.summary.target_service);
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "day,opening,demand,served,ordered,arrival,throttle_s\n";
  for (const auto& r : trace.days) {
    out << fmt::format("{},{},{},{},{},{},{}\n", r.day, num(r.opening), num(r.demand),
                       num(r.served), r.order_placed ? 1 : 0,
                       r.order_arrival_day ? std::to_string(*r.order_arrival_day) : "",
                       r.throttle_orifice ? num(*r.throttle_orifice) : "");
  }
}

void write_trace_json(std::ostream& out, const SimulationTrace& trace) {
  nlohmann::ordered_json days = nlohmann::ordered_json::array();
  for (const auto& r : trace.days) {
    nlohmann::ordered_json j;
    j["day"] = r.day;
    j["opening"] = r.opening;
    j["demand"] = r.demand;
    j["served"] = r.served;
    j["receipts"] = r.receipts;
    j["closing"] = r.closing;
    j["ordered"] = r.order_placed;
    j["arrival"] = r.order_arrival_day ? nlohmann::ordered_json(*r.order_arrival_day) : nullptr;
    j["throttle_s"] = r.throttle_orifice ? nlohmann::ordered_json(*r.throttle_orifice) : nullptr;
    days.push_back(std::move(j));
  }
  out << days.dump(2) << '\n';
}

void write_stats_json(std::ostream& out, const StockoutStats& stats, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["cycles"] = stats.cycles;
  j["stockouts"] = stats.stockout_cycles;
  j["empirical_service"] = stats.empirical_service;
  j["target_service"] =
      stats.target_service ? nlohmann::ordered_json(*stats.target_service) : nullptr;
  j["seed"] = seed;
  if (stats.fill_rate) j["fill_rate"] = *stats.fill_rate;
  out << j.dump(2) << '\n';
}

}  // namespace liqsim::simulate
