#include "liqsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "liqsim/error.hpp"
#include "liqsim/gaussian.hpp"
#include "liqsim/inventory.hpp"
#include "liqsim/reservoir.hpp"
#include "liqsim/scenario.hpp"
#include "liqsim/simulate.hpp"

namespace liqsim::cli {

namespace {

constexpr const char* kSeedEnv = "LIQSIM_SEED";

// Binary mode keeps LF line endings on every platform.
void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError(fmt::format("cannot write '{}'", path));
  f << content;
  if (!f) throw UsageError(fmt::format("failed writing '{}'", path));
}

void emit(const std::string& content, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << content;
  } else {
    write_file(out_path, content);
  }
}

std::string pct(double fraction) {
  return fmt::format("{}", gaussian::round_half_away(fraction * 100.0, 6));
}

int cmd_z_table(bool exact, std::ostream& out) {
  const auto rounding = exact ? gaussian::ZRounding::exact : gaussian::ZRounding::one_decimal;
  out << "service_rate,rupture_risk,z,published_z,flag\n";
  for (const auto& row : gaussian::service_level_table(rounding)) {
    std::string z;
    if (row.z) z = exact ? fmt::format("{:.6f}", *row.z) : fmt::format("{:.1f}", *row.z);
    out << fmt::format("{},{},{},{},{}\n", pct(row.service_level), pct(row.rupture_risk), z,
                       row.published_z, row.note);
  }
  return kExitOk;
}

int cmd_tables(const std::string& id, const std::string& out_path, std::ostream& out) {
  const auto table = inventory::parse_table_id(id);
  std::ostringstream csv;
  inventory::write_table_csv(csv, inventory::reproduce_table(table));
  emit(csv.str(), out_path, out);
  return kExitOk;
}

struct DrainArgs {
  double S = 0.0;
  double s = 0.0;
  double h0 = 0.0;
  double g = reservoir::kStandardGravity;
  double dt = 0.0;
  double kappa = 1.0;
  std::size_t stride = 1;
  std::string out_path;
};

int cmd_drain(const DrainArgs& a, std::ostream& out, std::ostream& err) {
  reservoir::ReservoirSpec spec;
  spec.cross_section = a.S;
  spec.orifice_section = a.s;
  spec.gravity = a.g;
  spec.stock_per_volume = a.kappa;
  if (!(a.h0 >= 0.0)) throw DomainError("--h0 must be >= 0");
  if (a.dt < 0.0) throw DomainError("--dt must be > 0");
  if (a.stride == 0) throw DomainError("--stride must be >= 1");

  auto trace = reservoir::drain(spec, a.h0, a.dt);
  if (a.stride > 1) {
    std::vector<reservoir::DrainSample> kept;
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
      if (i % a.stride == 0 || i + 1 == trace.samples.size()) kept.push_back(trace.samples[i]);
    trace.samples = std::move(kept);
  }

  std::ostringstream csv;
  reservoir::write_drain_csv(csv, trace);
  emit(csv.str(), a.out_path, out);
  err << fmt::format("analytic_empty_time_s={} crossing_time_s={} dt_s={} steps={}\n",
                     trace.analytic_empty_time, trace.crossing_time, trace.dt,
                     trace.crossing_time > 0.0 ? std::llround(trace.crossing_time / trace.dt) : 0);
  return kExitOk;
}

struct SimulateArgs {
  std::string scenario_path;
  std::optional<std::uint64_t> cycles;
  std::optional<double> tolerance_pp;
  std::string trace_path;
  std::string stats_path;
  unsigned threads = 1;
};

std::uint64_t parse_seed_env(const char* text) {
  std::string s(text);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!s.empty() && s.front() == '-') throw std::invalid_argument("negative");
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw UsageError(fmt::format("{} must be an unsigned 64-bit integer, got '{}'", kSeedEnv, s));
  return v;
}

std::string stats_document(const scenario::Scenario& sc, const simulate::StockoutStats& mc,
                           const simulate::StockoutStats& day) {
  nlohmann::ordered_json j;
  j["cycles"] = mc.cycles;
  j["stockouts"] = mc.stockout_cycles;
  j["empirical_service"] = mc.empirical_service;
  j["target_service"] = mc.target_service ? nlohmann::ordered_json(*mc.target_service) : nullptr;
  j["seed"] = sc.config.seed;
  j["scenario"] = sc.name;
  j["safety_stock"] = sc.config.policy.safety_stock;
  j["command_point"] = sc.config.policy.command_point;
  nlohmann::ordered_json d;
  d["days"] = sc.config.horizon;
  d["cycles"] = day.cycles;
  d["stockouts"] = day.stockout_cycles;
  d["empirical_service"] = day.empirical_service;
  d["fill_rate"] = day.fill_rate ? nlohmann::ordered_json(*day.fill_rate) : nullptr;
  j["day_sim"] = std::move(d);
  return j.dump(2) + "\n";
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  auto sc = scenario::load_scenario(a.scenario_path);
  if (const char* env = std::getenv(kSeedEnv); env != nullptr) sc.config.seed = parse_seed_env(env);
  if (a.cycles) {
    if (*a.cycles == 0) throw UsageError("--cycles must be >= 1");
    sc.cycles = *a.cycles;
  }
  if (a.tolerance_pp) {
    if (!(*a.tolerance_pp >= 0.0)) throw UsageError("--tolerance must be >= 0");
    sc.tolerance_pp = *a.tolerance_pp;
  }

  const auto mc = simulate::run_cycle_mc(sc.config, sc.cycles, a.threads);
  const auto trace = simulate::run_day_sim(sc.config);

  const std::string trace_path =
      !a.trace_path.empty() ? a.trace_path : sc.output.trace_path.value_or("").string();
  const std::string stats_path =
      !a.stats_path.empty() ? a.stats_path : sc.output.stats_path.value_or("").string();
  if (!trace_path.empty()) {
    std::ostringstream buf;
    if (sc.output.format == scenario::TraceFormat::json) {
      simulate::write_trace_json(buf, trace);
    } else {
      simulate::write_trace_csv(buf, trace);
    }
    write_file(trace_path, buf.str());
  }
  if (!stats_path.empty()) write_file(stats_path, stats_document(sc, mc, trace.summary));

  bool pass = true;
  std::string target = "none";
  if (mc.target_service) {
    pass = std::fabs(mc.empirical_service - *mc.target_service) <= sc.tolerance_pp / 100.0;
    target = fmt::format("{:.6f}", *mc.target_service);
  }
  out << fmt::format(
      "scenario={} seed={} cycles={} stockouts={} empirical_service={:.6f} target_service={} "
      "tolerance_pp={} day_cycles={} day_service={:.6f} fill_rate={:.6f} status={}\n",
      sc.name, sc.config.seed, mc.cycles, mc.stockout_cycles, mc.empirical_service, target,
      sc.tolerance_pp, trace.summary.cycles, trace.summary.empirical_service,
      trace.summary.fill_rate.value_or(1.0), pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitToleranceFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reservoir-backed capacity planning: safety stock, reorder points, drains and "
               "service-level simulation",
               "liqsim"};
  app.require_subcommand(1);

  bool exact = false;
  auto* z_table = app.add_subcommand("z-table", "Print the service-level / z-factor table");
  z_table->add_flag("--exact", exact, "Unrounded quantiles");

  std::string table_id;
  std::string table_out;
  auto* tables = app.add_subcommand("tables", "Reproduce a safety-stock / command-point table");
  tables->add_option("id", table_id, "T2, T3, T4, T5 or T6")->required();
  tables->add_option("--out", table_out, "Write CSV to FILE instead of stdout");

  DrainArgs drain_args;
  auto* drain = app.add_subcommand("drain", "Integrate a Torricelli drain to empty");
  drain->add_option("--S", drain_args.S, "Tank cross-section, m^2")->required();
  drain->add_option("--s", drain_args.s, "Orifice section, m^2")->required();
  drain->add_option("--h0", drain_args.h0, "Initial head, m")->required();
  drain->add_option("--g", drain_args.g, "Gravity, m/s^2");
  drain->add_option("--dt", drain_args.dt, "Step, s (default: empty time / 1e4)");
  drain->add_option("--kappa", drain_args.kappa, "Stock per volume, GB/m^3");
  drain->add_option("--stride", drain_args.stride, "Emit every Nth step (final row always)");
  drain->add_option("--out", drain_args.out_path, "Write CSV to FILE instead of stdout");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario: cycle Monte Carlo and day simulation");
  simulate->add_option("scenario", sim_args.scenario_path, "Scenario JSON file")->required();
  simulate->add_option("--cycles", sim_args.cycles, "Monte Carlo cycles (overrides scenario)");
  simulate->add_option("--tolerance", sim_args.tolerance_pp,
                       "Allowed |empirical - target| in percentage points");
  simulate->add_option("--trace", sim_args.trace_path, "Trace output file (overrides scenario)");
  simulate->add_option("--stats", sim_args.stats_path, "Stats JSON file (overrides scenario)");
  simulate->add_option("--threads", sim_args.threads, "Monte Carlo worker threads")
      ->check(CLI::Range(1u, 256u));

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes from the back
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*z_table) return cmd_z_table(exact, out);
    if (*tables) return cmd_tables(table_id, table_out, out);
    if (*drain) return cmd_drain(drain_args, out, err);
    if (*simulate) return cmd_simulate(sim_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    if (*tables) err << tables->help();
    return kExitUsage;
  } catch (const std::logic_error& e) {  // DomainError and friends
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace liqsim::cli
