#pragma once

#include <iosfwd>
#include <vector>

namespace liqsim::reservoir {

inline constexpr double kStandardGravity = 9.81;       // m/s^2
inline constexpr double kWaterDensity = 1000.0;        // kg/m^3
inline constexpr double kAtmosphericPressure = 101325.0;  // Pa
inline constexpr double kSecondsPerDay = 86400.0;

/// Tank with a small orifice at its base. Stock and liquid volume are
/// related by stock_gb = stock_per_volume * cross_section * h.
struct ReservoirSpec {
  double cross_section = 1.0;    // S, m^2
  double orifice_section = 0.01; // s, m^2; must stay below S
  double gravity = kStandardGravity;
  double density = kWaterDensity;
  double stock_per_volume = 1.0; // GB per m^3

  void validate() const;
};

struct ReservoirState {
  double h = 0.0;  // m
  double t = 0.0;  // s
};

/// A point on a streamline.
struct FlowPoint {
  double v = 0.0;  // m/s
  double z = 0.0;  // m
  double p = 0.0;  // Pa
};

/// rho v^2 / 2 + rho g z + p, conserved along a streamline of a perfect,
/// incompressible, steady flow.
double bernoulli_head(const FlowPoint& pt, double rho, double g);

/// Efflux speed sqrt(2 g h). Independent of density.
double torricelli_velocity(double h, double g);

/// Volumetric outflow s * sqrt(2 g h), m^3/s.
double outflow_rate(const ReservoirSpec& spec, double h);

/// One RK4 step of dh/dt = -(s/S) sqrt(2 g h). The state is absorbing at
/// h = 0: a step that would overshoot lands exactly on zero.
ReservoirState drain_step(const ReservoirSpec& spec, const ReservoirState& state, double dt);

/// (S/s) sqrt(2 h0 / g).
double analytic_empty_time(const ReservoirSpec& spec, double h0);

/// Largest orifice whose outflow at head h drains exactly `volume_remaining`
/// over `time_to_arrival` seconds. Since the head only falls while draining,
/// holding this orifice fixed never releases more than `volume_remaining`.
double throttle_orifice(double volume_remaining, double time_to_arrival, double h, double g);

double stock_from_height(const ReservoirSpec& spec, double h);
double height_from_stock(const ReservoirSpec& spec, double stock_gb);

/// Outflow capacity over one day at head h, in GB.
double daily_capacity(const ReservoirSpec& spec, double orifice, double h);

struct DrainSample {
  double t = 0.0;
  double h = 0.0;
  double outflow = 0.0;  // m^3/s
  double stock = 0.0;    // GB
};

struct DrainTrace {
  std::vector<DrainSample> samples;
  double analytic_empty_time = 0.0;
  double crossing_time = 0.0;  // first t at which the integrator reached h = 0
  double dt = 0.0;
};

/// Step size used when the caller does not choose one: T_empty / 10^4.
double default_drain_step(const ReservoirSpec& spec, double h0);

/// Integrates from h0 until the tank is empty. dt <= 0 selects
/// default_drain_step. A zero initial head yields a single sample.
DrainTrace drain(const ReservoirSpec& spec, double h0, double dt = 0.0);

/// CSV with header t_s,h_m,outflow_m3s,stock_gb.
void write_drain_csv(std::ostream& out, const DrainTrace& trace);

}  // namespace liqsim::reservoir
