#include "gcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gcf/error.hpp"

namespace gcf {

namespace {

// Spectral radius of the fourth-order second difference is 16/3 (at the
// Nyquist mode); classical RK4 is stable on the negative real axis up to ~2.785.
constexpr double kStencilRadius = 16.0 / 3.0;
constexpr double kRk4RealLimit = 2.785;
constexpr double kDtUnderflow = 1e-12;

std::vector<double> speed_values(const SupportGrid& grid, const SpeedLaw& law) {
  const auto K = gauss_curvature(grid);
  std::vector<double> v(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) v[i] = -law.eval(K[i]).f;
  return v;
}

SupportGrid axpy(const SupportGrid& base, double scale, const std::vector<double>& k) {
  SupportGrid out = base;
  auto& v = out.mutable_values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += scale * k[i];
  return out;
}

struct Sensitivity {
  double lambda = 0.0;
  double min_radius = 0.0;
  double max_speed = 0.0;
};

Sensitivity sensitivity(const SupportGrid& grid, const SpeedLaw& law) {
  double rmin = 0.0;
  const auto K = gauss_curvature(grid, &rmin);
  std::vector<double> inv_radius_sum(K);
  if (grid.n() == 2) {
    const auto h = grid.values();
    const auto hd = diff1(h, grid.spacing(), grid.topology());
    const auto hdd = diff2(h, grid.spacing(), grid.topology());
    for (std::size_t i = 0; i < K.size(); ++i) {
      const double phi = grid.angle(i);
      inv_radius_sum[i] = 1.0 / (hdd[i] + h[i]) + 1.0 / (hd[i] * std::cos(phi) / std::sin(phi) + h[i]);
    }
  }
  Sensitivity s;
  s.min_radius = rmin;
  for (std::size_t i = 0; i < K.size(); ++i) {
    const SpeedDerivs d = law.eval(K[i]);
    if (!(d.d1 > 0.0)) {
      std::ostringstream os;
      os << "f'(K)=" << d.d1 << " <= 0 at K=" << K[i];
      throw Error(ErrorKind::InvalidSpeedLaw, os.str());
    }
    s.lambda = std::max(s.lambda, d.d1 * K[i] * inv_radius_sum[i]);
    s.max_speed = std::max(s.max_speed, std::abs(d.f));
  }
  s.lambda *= kStencilRadius / kRk4RealLimit;
  return s;
}

}  // namespace

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::NonConvex: return "non_convex";
    case Termination::DtUnderflow: return "dt_underflow";
  }
  return "unknown";
}

double FlowConfig::start_time() const {
  if (initial.type != InitialShape::SelfSimilar) return t0;
  const double nb = n * law.expanding_exponent();
  return std::pow(initial.R0, 1.0 - nb) / (1.0 - nb);
}

SupportGrid FlowConfig::initial_grid() const {
  const double R0 = initial.R0;
  if (initial.type != InitialShape::Fourier) {
    return SupportGrid(n, std::vector<double>(grid_size, R0));
  }
  const auto modes = initial.modes;
  return SupportGrid::from_function(n, grid_size, [&](double angle) {
    double h = R0;
    for (const auto& m : modes) h += m.amplitude * std::cos(m.k * angle + m.phase);
    return h;
  });
}

void FlowConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
  std::ostringstream os;
  if (n != 1 && n != 2) {
    os << "n must be 1 or 2, got " << n;
    fail(os.str());
  }
  if (law.kind() == SpeedKind::PowerLaw && law.a() < 0.0) {
    const double b = law.expanding_exponent();
    if (!(b > 0.0 && b * n < 1.0)) {
      os << "expanding exponent must satisfy 0 < b < 1/n, got b=" << b << " (beta=" << law.beta()
         << ") with n=" << n << "; violated bound: b < 1/n";
      fail(os.str());
    }
  }
  if (!(initial.R0 > 0.0) || !std::isfinite(initial.R0)) {
    os << "initial R0 must be > 0, got " << initial.R0;
    fail(os.str());
  }
  if (initial.type == InitialShape::SelfSimilar && !law.is_expanding_form()) {
    fail("self_similar initial data needs an expanding law (a = -1, beta < 0)");
  }
  if (initial.type != InitialShape::Fourier && !initial.modes.empty()) {
    fail("modes are only allowed for fourier initial data");
  }
  for (const auto& m : initial.modes) {
    if (m.k < 0 || !std::isfinite(m.amplitude) || !std::isfinite(m.phase)) {
      os << "invalid mode k=" << m.k << " amplitude=" << m.amplitude;
      fail(os.str());
    }
    // Axisymmetric profiles must be even about both poles.
    if (n == 2 && std::abs(std::sin(m.phase)) > 1e-12) {
      os << "n=2 modes must have phase 0 or pi, got " << m.phase << " for k=" << m.k;
      fail(os.str());
    }
  }
  if (!(t0 >= 0.0)) {
    os << "t0 must be >= 0, got " << t0;
    fail(os.str());
  }
  const double start = start_time();
  if (!(t_end > start) || !std::isfinite(t_end)) {
    os << "t_end must exceed the start time " << start << ", got " << t_end;
    fail(os.str());
  }
  if (!(safety > 0.0 && safety <= 1.0)) {
    os << "safety must lie in (0, 1], got " << safety;
    fail(os.str());
  }
  if (stride < 1) fail("output stride must be >= 1");
  if (!(output_interval >= 0.0) || !std::isfinite(output_interval)) {
    os << "output interval must be >= 0, got " << output_interval;
    fail(os.str());
  }
  try {
    (void)derive_state(initial_grid());
  } catch (const Error& e) {
    fail(std::string("initial shape rejected: ") + e.what());
  }
}

SupportGrid step(const SupportGrid& grid, const SpeedLaw& law, double dt) {
  if (dt == 0.0) return grid;
  if (!(dt > 0.0)) {
    std::ostringstream os;
    os << "time step must be > 0, got " << dt;
    throw Error(ErrorKind::NonPositiveArgument, os.str());
  }
  const auto k1 = speed_values(grid, law);
  const auto k2 = speed_values(axpy(grid, 0.5 * dt, k1), law);
  const auto k3 = speed_values(axpy(grid, 0.5 * dt, k2), law);
  const auto k4 = speed_values(axpy(grid, dt, k3), law);
  SupportGrid out = grid;
  auto& v = out.mutable_values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  // The new state must itself be admissible.
  (void)gauss_curvature(out);
  return out;
}

double speed_sensitivity(const SupportGrid& grid, const SpeedLaw& law) {
  return sensitivity(grid, law).lambda;
}

double stable_dt(const SupportGrid& grid, const SpeedLaw& law, double safety) {
  const double dx = grid.spacing();
  return safety * dx * dx / speed_sensitivity(grid, law);
}

FlowTrace run(const FlowConfig& config) {
  config.validate();
  FlowTrace trace;
  trace.n = config.n;
  double t = config.start_time();
  const double start = t;
  SupportGrid grid = config.initial_grid();
  trace.samples.push_back({t, grid});

  const bool timed_output = config.output_interval > 0.0;
  std::size_t output_count = 0;
  std::size_t step_count = 0;
  bool last_stored = true;
  const double dx2 = grid.spacing() * grid.spacing();

  while (t < config.t_end) {
    Sensitivity sens;
    try {
      sens = sensitivity(grid, config.law);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonConvex && e.kind() != ErrorKind::OriginOutside) throw;
      trace.reason = Termination::NonConvex;
      trace.message = e.what();
      break;
    }
    double dt = config.safety * dx2 / sens.lambda;
    if (!(dt >= kDtUnderflow)) {
      trace.reason = Termination::DtUnderflow;
      std::ostringstream os;
      os << "stable dt " << dt << " < " << kDtUnderflow << " at t=" << t;
      trace.message = os.str();
      break;
    }
    double target = config.t_end;
    if (timed_output) {
      const double next = start + static_cast<double>(output_count + 1) * config.output_interval;
      // An output time within rounding of t_end is t_end itself.
      if (next < config.t_end - 1e-12 * std::max(1.0, std::abs(config.t_end))) target = next;
    }
    bool landed = false;
    if (t + dt >= target) {
      dt = target - t;
      landed = true;
    }
    trace.steps.push_back({t, dt, sens.min_radius, sens.max_speed});
    try {
      grid = step(grid, config.law, dt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonConvex && e.kind() != ErrorKind::OriginOutside) throw;
      trace.reason = Termination::NonConvex;
      trace.message = e.what();
      break;
    }
    t = landed ? target : t + dt;
    ++step_count;
    last_stored = false;
    if (timed_output ? landed : step_count % config.stride == 0) {
      if (timed_output) ++output_count;
      trace.samples.push_back({t, grid});
      last_stored = true;
    }
  }
  if (!last_stored) trace.samples.push_back({t, grid});
  return trace;
}

}  // namespace gcf
