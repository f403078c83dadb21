#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "liqsim/error.hpp"
#include "liqsim/simulate.hpp"

namespace liqsim::scenario {

/// Scenario validation failure; `field` is the dotted path of the offending
/// key (empty for document-level errors such as malformed JSON).
class ScenarioError : public ConfigError {
 public:
  ScenarioError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class TraceFormat { csv, json };

struct OutputOptions {
  TraceFormat format = TraceFormat::csv;
  std::optional<std::filesystem::path> trace_path;
  std::optional<std::filesystem::path> stats_path;
};

/// A named simulation configuration plus run and output options.
struct Scenario {
  std::string name;
  simulate::SimConfig config;
  std::uint64_t cycles = 20000;
  double tolerance_pp = 1.5;  // percentage points
  OutputOptions output;
};

/// Parses a scenario document. Field names mirror SimConfig:
///
///   {
///     "name": "...", "seed": 42, "horizon": 365, "initial_stock": 700,
///     "demand": {"mean": 100, "std": 20, "period_length": 1},
///     "lead_time": {"mean": 1, "std": 0},
///     "policy": {"z": 1.645, "order_quantity": 500,
///                "review_mode": "reorder_point", "review_interval": 7},
///     "reservoir": {"cross_section": 1, "orifice_section": 0.01,
///                   "gravity": 9.81, "density": 1000, "stock_per_volume": 1},
///     "cycles": 20000, "tolerance_pp": 1.5,
///     "output": {"format": "csv", "trace": "trace.csv", "stats": "stats.json"}
///   }
///
/// The policy takes either a service factor (`z` or `service_level`) or an
/// explicit `safety_stock` and `command_point`; `target_service` overrides
/// the target derived from z. Unknown keys are rejected.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace liqsim::scenario
