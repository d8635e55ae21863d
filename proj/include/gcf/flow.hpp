#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gcf/geometry.hpp"
#include "gcf/speedlaw.hpp"

namespace gcf {

struct FourierMode {
  int k = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

enum class InitialShape {
  Round,        // circle (n=1) or sphere (n=2) of radius R0
  Fourier,      // h = R0 + sum amplitude * cos(k * angle + phase)
  SelfSimilar,  // round radius R0 placed at the time its self-similar solution reaches R0
};

struct InitialSpec {
  InitialShape type = InitialShape::Round;
  double R0 = 1.0;
  std::vector<FourierMode> modes;
};

/// Everything needed to integrate dh/dt = -f(K) from a given initial shape.
struct FlowConfig {
  int n = 1;
  std::size_t grid_size = 256;
  SpeedLaw law = SpeedLaw::expanding(0.5);
  InitialSpec initial;
  double t0 = 0.0;
  double t_end = 1.0;
  double safety = 0.5;
  /// Store every stride-th step (ignored when output_interval > 0).
  std::size_t stride = 1;
  /// When > 0, steps are clipped so that states land exactly on
  /// start_time() + k * output_interval, and only those are stored.
  double output_interval = 0.0;

  /// Throws InvalidConfig naming the violated constraint.
  void validate() const;
  /// Flow time of the initial state: t0, or R0^(1-nb)/(1-nb) for SelfSimilar.
  double start_time() const;
  SupportGrid initial_grid() const;
};

struct FlowSample {
  double t = 0.0;
  SupportGrid grid;
};

struct StepDiagnostics {
  double t = 0.0;  // time at the start of the step
  double dt = 0.0;
  double min_radius = 0.0;
  double max_speed = 0.0;
};

enum class Termination { Completed, NonConvex, DtUnderflow };

const char* to_string(Termination t) noexcept;

struct FlowTrace {
  int n = 1;
  std::vector<FlowSample> samples;
  std::vector<StepDiagnostics> steps;
  Termination reason = Termination::Completed;
  std::string message;
};

/// One classical RK4 step of dh/dt = -f(K). dt == 0 returns the input.
/// Throws NonConvex (or OriginOutside) if any stage loses convexity.
SupportGrid step(const SupportGrid& grid, const SpeedLaw& law, double dt);

/// Bound on the linearized sensitivity of the speed to the support values:
/// c * max_nodes f'(K) K sum_i(1/r_i), with c the spectral radius of the
/// second-difference stencil (times spacing^2) over the RK4 real-axis limit.
double speed_sensitivity(const SupportGrid& grid, const SpeedLaw& law);

/// safety * spacing^2 / speed_sensitivity. Throws NonConvex or InvalidSpeedLaw.
double stable_dt(const SupportGrid& grid, const SpeedLaw& law, double safety = 1.0);

/// Integrates from config.start_time() to config.t_end. Loss of convexity or
/// dt underflow ends the run early with the partial trace.
FlowTrace run(const FlowConfig& config);

}  // namespace gcf
