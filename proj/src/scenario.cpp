#include "liqsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "liqsim/gaussian.hpp"

namespace liqsim::scenario {

using nlohmann::json;

ScenarioError::ScenarioError(std::string field, const std::string& message)
    : ConfigError(field.empty() ? message : fmt::format("{}: {}", field, message)),
      field_(std::move(field)) {}

namespace {

std::string join(std::string_view parent, std::string_view key) {
  return parent.empty() ? std::string(key) : fmt::format("{}.{}", parent, key);
}

// Typed access to one JSON object with dotted-path diagnostics.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ScenarioError(path_, "expected an object");
  }

  void only(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, _] : obj_.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) throw ScenarioError(join(path_, key), "unknown field");
    }
  }

  bool has(std::string_view key) const { return obj_.contains(key); }

  double number(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw ScenarioError(join(path_, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(join(path_, key), "expected a finite number");
    return d;
  }

  double number_or(std::string_view key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::optional<double> maybe_number(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::uint64_t count(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_number_unsigned())
      throw ScenarioError(join(path_, key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string text(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ScenarioError(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  Fields object(std::string_view key) const { return Fields(at(key), join(path_, key)); }

  std::string path(std::string_view key) const { return join(path_, key); }

 private:
  const json& at(std::string_view key) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) throw ScenarioError(join(path_, key), "missing required field");
    return *it;
  }

  const json& obj_;
  std::string path_;
};

inventory::DemandModel parse_demand(const Fields& f) {
  f.only({"mean", "std", "period_length"});
  inventory::DemandModel d;
  d.mean_per_period = f.number("mean");
  d.std = f.number_or("std", 0.0);
  d.period_length = f.number_or("period_length", 1.0);
  if (d.mean_per_period < 0.0) throw ScenarioError(f.path("mean"), "must be >= 0");
  if (d.std < 0.0) throw ScenarioError(f.path("std"), "must be >= 0");
  if (d.period_length <= 0.0) throw ScenarioError(f.path("period_length"), "must be > 0");
  return d;
}

inventory::LeadTimeModel parse_lead_time(const Fields& f) {
  f.only({"mean", "std"});
  inventory::LeadTimeModel l;
  l.mean = f.number("mean");
  l.std = f.number_or("std", 0.0);
  if (l.mean <= 0.0) throw ScenarioError(f.path("mean"), "must be > 0");
  if (l.std < 0.0) throw ScenarioError(f.path("std"), "must be >= 0");
  return l;
}

reservoir::ReservoirSpec parse_reservoir(const Fields& f) {
  f.only({"cross_section", "orifice_section", "gravity", "density", "stock_per_volume"});
  reservoir::ReservoirSpec r;
  r.cross_section = f.number_or("cross_section", r.cross_section);
  r.orifice_section = f.number_or("orifice_section", r.orifice_section);
  r.gravity = f.number_or("gravity", r.gravity);
  r.density = f.number_or("density", r.density);
  r.stock_per_volume = f.number_or("stock_per_volume", r.stock_per_volume);
  try {
    r.validate();
  } catch (const ConfigError& e) {
    throw ScenarioError("", e.what());
  }
  return r;
}

void parse_policy(const Fields& f, simulate::SimConfig& cfg) {
  f.only({"z", "service_level", "safety_stock", "command_point", "order_quantity", "review_mode",
          "review_interval", "target_service"});

  std::optional<double> z = f.maybe_number("z");
  if (f.has("service_level")) {
    if (z) throw ScenarioError(f.path("service_level"), "give either z or service_level, not both");
    const double level = f.number("service_level");
    if (!(level > 0.0 && level < 1.0)) throw ScenarioError(f.path("service_level"), "must lie in (0, 1)");
    z = gaussian::std_normal_inv_cdf(level);
  }

  const bool explicit_levels = f.has("safety_stock") || f.has("command_point");
  if (explicit_levels) {
    cfg.policy.safety_stock = f.number("safety_stock");
    cfg.policy.command_point = f.number("command_point");
  } else if (z) {
    const auto derived = inventory::make_policy(*z, cfg.demand, cfg.lead_time);
    cfg.policy.safety_stock = derived.safety_stock;
    cfg.policy.command_point = derived.command_point;
  } else {
    throw ScenarioError(f.path("z"), "missing: give z, service_level, or safety_stock and command_point");
  }

  cfg.policy.order_quantity =
      f.number_or("order_quantity", cfg.demand.daily_mean() * cfg.lead_time.mean * 5.0);

  const std::string mode = f.has("review_mode") ? f.text("review_mode") : "reorder_point";
  if (mode == "reorder_point") {
    cfg.policy.review = inventory::ReviewMode::reorder_point;
  } else if (mode == "periodic") {
    cfg.policy.review = inventory::ReviewMode::periodic;
    cfg.policy.review_interval = f.number("review_interval");
  } else {
    throw ScenarioError(f.path("review_mode"), "expected \"reorder_point\" or \"periodic\"");
  }

  if (f.has("target_service")) {
    cfg.target_service = f.number("target_service");
  } else if (z) {
    cfg.target_service = gaussian::std_normal_cdf(*z);
  }
}

OutputOptions parse_output(const Fields& f) {
  f.only({"format", "trace", "stats"});
  OutputOptions out;
  if (f.has("format")) {
    const auto fmt = f.text("format");
    if (fmt == "csv") out.format = TraceFormat::csv;
    else if (fmt == "json") out.format = TraceFormat::json;
    else throw ScenarioError(f.path("format"), "expected \"csv\" or \"json\"");
  }
  if (f.has("trace")) out.trace_path = f.text("trace");
  if (f.has("stats")) out.stats_path = f.text("stats");
  return out;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError("", fmt::format("malformed JSON: {}", e.what()));
  }

  const Fields root(doc, "");
  root.only({"name", "seed", "horizon", "initial_stock", "demand", "lead_time", "policy",
             "reservoir", "cycles", "tolerance_pp", "output"});

  Scenario sc;
  sc.name = root.has("name") ? root.text("name") : "scenario";
  auto& cfg = sc.config;
  cfg.seed = root.has("seed") ? root.count("seed") : 0;
  if (root.has("horizon")) {
    const auto h = root.count("horizon");
    if (h < 1 || h > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
      throw ScenarioError("horizon", "must be between 1 and 2^31 - 1 days");
    cfg.horizon = static_cast<int>(h);
  }
  cfg.demand = parse_demand(root.object("demand"));
  cfg.lead_time = parse_lead_time(root.object("lead_time"));
  parse_policy(root.object("policy"), cfg);
  if (root.has("reservoir")) cfg.reservoir = parse_reservoir(root.object("reservoir"));
  cfg.initial_stock =
      root.number_or("initial_stock", cfg.policy.command_point + cfg.policy.order_quantity);

  if (root.has("cycles")) {
    sc.cycles = root.count("cycles");
    if (sc.cycles == 0) throw ScenarioError("cycles", "must be >= 1");
  }
  sc.tolerance_pp = root.number_or("tolerance_pp", sc.tolerance_pp);
  if (sc.tolerance_pp < 0.0) throw ScenarioError("tolerance_pp", "must be >= 0");
  if (root.has("output")) sc.output = parse_output(root.object("output"));

  try {
    cfg.validate();
  } catch (const ScenarioError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ScenarioError("", e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("", fmt::format("cannot read scenario file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace liqsim::scenario
