#include "liqsim/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "liqsim/error.hpp"

namespace liqsim::reservoir {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void ReservoirSpec::validate() const {
  if (!positive(cross_section)) throw ConfigError("reservoir.cross_section must be > 0");
  if (!positive(orifice_section)) throw ConfigError("reservoir.orifice_section must be > 0");
  if (!(orifice_section < cross_section))
    throw ConfigError("reservoir.orifice_section must be smaller than cross_section");
  if (!positive(gravity)) throw ConfigError("reservoir.gravity must be > 0");
  if (!positive(density)) throw ConfigError("reservoir.density must be > 0");
  if (!positive(stock_per_volume)) throw ConfigError("reservoir.stock_per_volume must be > 0");
}

double bernoulli_head(const FlowPoint& pt, double rho, double g) {
  require(positive(rho), "bernoulli_head: density must be > 0");
  require(positive(g), "bernoulli_head: gravity must be > 0");
  return 0.5 * rho * pt.v * pt.v + rho * g * pt.z + pt.p;
}

double torricelli_velocity(double h, double g) {
  require(std::isfinite(h) && h >= 0.0, "torricelli_velocity: head must be >= 0");
  require(positive(g), "torricelli_velocity: gravity must be > 0");
  return std::sqrt(2.0 * g * h);
}

double outflow_rate(const ReservoirSpec& spec, double h) {
  return spec.orifice_section * torricelli_velocity(h, spec.gravity);
}

ReservoirState drain_step(const ReservoirSpec& spec, const ReservoirState& state, double dt) {
  require(positive(dt), "drain_step: dt must be > 0");
  require(std::isfinite(state.h) && state.h >= 0.0, "drain_step: head must be >= 0");
  if (state.h == 0.0) return {0.0, state.t + dt};

  const double ratio = spec.orifice_section / spec.cross_section;
  const double two_g = 2.0 * spec.gravity;
  // sqrt(2 g h) is not Lipschitz at 0; stages that undershoot contribute no flow.
  auto rate = [&](double h) { return -ratio * std::sqrt(two_g * std::max(h, 0.0)); };

  const double h = state.h;
  const double k1 = rate(h);
  const double k2 = rate(h + 0.5 * dt * k1);
  const double k3 = rate(h + 0.5 * dt * k2);
  const double k4 = rate(h + dt * k3);
  const double next = h + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return {next > 0.0 ? next : 0.0, state.t + dt};
}

double analytic_empty_time(const ReservoirSpec& spec, double h0) {
  require(std::isfinite(h0) && h0 >= 0.0, "analytic_empty_time: head must be >= 0");
  return spec.cross_section / spec.orifice_section * std::sqrt(2.0 * h0 / spec.gravity);
}

double throttle_orifice(double volume_remaining, double time_to_arrival, double h, double g) {
  require(std::isfinite(volume_remaining) && volume_remaining >= 0.0,
          "throttle_orifice: remaining volume must be >= 0");
  require(positive(time_to_arrival), "throttle_orifice: time to arrival must be > 0");
  require(positive(h), "throttle_orifice: head must be > 0");
  return volume_remaining / time_to_arrival / torricelli_velocity(h, g);
}

double stock_from_height(const ReservoirSpec& spec, double h) {
  return spec.stock_per_volume * spec.cross_section * h;
}

double height_from_stock(const ReservoirSpec& spec, double stock_gb) {
  return stock_gb / (spec.stock_per_volume * spec.cross_section);
}

double daily_capacity(const ReservoirSpec& spec, double orifice, double h) {
  return spec.stock_per_volume * orifice * torricelli_velocity(h, spec.gravity) * kSecondsPerDay;
}

double default_drain_step(const ReservoirSpec& spec, double h0) {
  return analytic_empty_time(spec, h0) / 1e4;
}

DrainTrace drain(const ReservoirSpec& spec, double h0, double dt) {
  spec.validate();
  require(std::isfinite(h0) && h0 >= 0.0, "drain: initial head must be >= 0");

  DrainTrace trace;
  trace.analytic_empty_time = analytic_empty_time(spec, h0);
  trace.dt = dt > 0.0 ? dt : default_drain_step(spec, h0);

  auto sample = [&](const ReservoirState& s) {
    trace.samples.push_back({s.t, s.h, outflow_rate(spec, s.h), stock_from_height(spec, s.h)});
  };

  ReservoirState state{h0, 0.0};
  sample(state);
  if (h0 == 0.0) return trace;

  // The drain finishes in about T/dt steps; the cap only guards absurd inputs.
  const auto max_steps = static_cast<std::size_t>(std::ceil(2.0 * trace.analytic_empty_time / trace.dt)) + 16;
  for (std::size_t i = 0; i < max_steps && state.h > 0.0; ++i) {
    // t is rebuilt from the step count so long drains do not accumulate round-off.
    state = drain_step(spec, state, trace.dt);
    state.t = static_cast<double>(i + 1) * trace.dt;
    sample(state);
  }
  if (state.h > 0.0) throw DomainError("drain: integration did not reach an empty tank");
  trace.crossing_time = state.t;
  return trace;
}

void write_drain_csv(std::ostream& out, const DrainTrace& trace) {
  out << "t_s,h_m,outflow_m3s,stock_gb\n";
  for (const auto& s : trace.samples)
    out << fmt::format("{},{},{},{}\n", s.t, s.h, s.outflow, s.stock);
}

}  // namespace liqsim::reservoir
