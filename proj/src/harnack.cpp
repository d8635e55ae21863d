#include "gcf/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gcf/error.hpp"

namespace gcf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double min_of(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) m = std::min(m, x);
  return m;
}

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> dt_f_spatial(const GeometryState& state, const SpeedLaw& law) {
  const SpeedField sf = speed_field(state, law);
  const auto box = box_op(state, sf.f);
  std::vector<double> out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    out[i] = sf.fp[i] * state.K[i] * (box[i] + state.H[i] * sf.f.v[i]);
  }
  return out;
}

std::vector<double> harnack_lhs(const GeometryState& state, const SpeedLaw& law, double t) {
  if (!law.satisfies_expanding_hypotheses(state.n)) {
    std::ostringstream os;
    os << "Harnack LHS needs a = -1 and -1/n < beta < 0, got " << law.describe()
       << " with n=" << state.n;
    throw Error(ErrorKind::WrongLawForm, os.str());
  }
  if (!(t > 0.0)) {
    std::ostringstream os;
    os << "Harnack time must be > 0, got " << t;
    throw Error(ErrorKind::NonPositiveTime, os.str());
  }
  const SpeedField sf = speed_field(state, law);
  const auto dtf = dt_f_spatial(state, law);
  const auto grad = grad_norm_sq_h(state, sf.f);
  const double nb = state.n * law.expanding_exponent();
  const double coef = nb / ((1.0 - nb) * t);
  std::vector<double> out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double u = -sf.f.v[i];
    out[i] = -dtf[i] + grad[i] - coef * u;
  }
  return out;
}

PTensor P_tensor(const GeometryState& state, const SpeedLaw& law) {
  const SpeedField sf = speed_field(state, law);
  const CoordHessian hess = covariant_hessian_coords(state, sf.f);
  const SffGradient dh = sff_gradient(state);
  const std::size_t count = state.size();
  PTensor p;
  p.p11.resize(count);
  p.hessian11 = hess.c11;
  p.connection11.resize(count);
  p.curvature11.resize(count);
  if (state.n == 2) {
    p.p22.resize(count);
    p.hessian22 = hess.c22;
    p.connection22.resize(count);
    p.curvature22.resize(count);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double f = sf.f.v[i];
    const double f1 = sf.f.d1[i];
    // Only the first coordinate carries gradients, so h^{kl} reduces to h^{11}.
    p.connection11[i] = -dh.d1_h11[i] * f1 / state.h11[i];
    p.curvature11[i] = f * state.h11[i] * state.h11[i] / state.g11[i];
    p.p11[i] = p.hessian11[i] + p.connection11[i] + p.curvature11[i];
    if (state.n == 2) {
      p.connection22[i] = -dh.d1_h22[i] * f1 / state.h11[i];
      p.curvature22[i] = f * state.h22[i] * state.h22[i] / state.g22[i];
      p.p22[i] = p.hessian22[i] + p.connection22[i] + p.curvature22[i];
    }
  }
  return p;
}

std::vector<double> P_tensor_trace(const GeometryState& state, const PTensor& p) {
  std::vector<double> out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    out[i] = p.p11[i] / state.h11[i];
    if (state.n == 2) out[i] += p.p22[i] / state.h22[i];
  }
  return out;
}

std::vector<double> P_tensor_norm_sq_h(const GeometryState& state, const PTensor& p) {
  std::vector<double> out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double a = p.p11[i] / state.h11[i];
    out[i] = a * a;
    if (state.n == 2) {
      const double b = p.p22[i] / state.h22[i];
      out[i] += b * b;
    }
  }
  return out;
}

std::vector<double> P_trace(const GeometryState& state, const SpeedLaw& law) {
  const SpeedField sf = speed_field(state, law);
  const auto box = box_op(state, sf.f);
  const auto grad = grad_norm_sq_h(state, sf.f);
  std::vector<double> out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    out[i] = box[i] + sf.f.v[i] * state.H[i] - grad[i] / (sf.fp[i] * state.K[i]);
  }
  return out;
}

std::vector<double> tangential_velocity(const GeometryState& state, const SpeedField& speed) {
  std::vector<double> w(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) w[i] = -speed.f.d1[i] / state.r1.v[i];
  return w;
}

double three_point_derivative(double t0, double t1, double t2, double q0, double q1, double q2) {
  const double a = t1 - t0;
  const double b = t2 - t1;
  return -b / (a * (a + b)) * q0 + (b - a) / (a * b) * q1 + a / (b * (a + b)) * q2;
}

std::vector<HarnackSample> monitor(const FlowTrace& trace, const SpeedLaw& law, double t0) {
  if (trace.samples.size() < 3) {
    std::ostringstream os;
    os << "monitor needs >= 3 stored states, got " << trace.samples.size();
    throw Error(ErrorKind::InsufficientTrace, os.str());
  }
  const int n = trace.n;
  const bool hyp = law.satisfies_harnack_hypotheses(n);
  const bool expanding = law.is_expanding_form() && n * law.expanding_exponent() < 1.0;
  const double bound_denominator = law.kind() == SpeedKind::PowerLaw ? 1.0 / n + law.beta() : kNaN;

  auto u_values = [&](const SupportGrid& g) {
    const auto K = gauss_curvature(g);
    std::vector<double> u(K.size());
    for (std::size_t i = 0; i < K.size(); ++i) u[i] = -law.eval(K[i]).f;
    return u;
  };

  std::vector<HarnackSample> out;
  std::vector<double> u_prev = u_values(trace.samples[0].grid);
  std::vector<double> u_mid = u_values(trace.samples[1].grid);
  for (std::size_t k = 1; k + 1 < trace.samples.size(); ++k) {
    std::vector<double> u_next = u_values(trace.samples[k + 1].grid);
    const double tm = trace.samples[k - 1].t;
    const double tc = trace.samples[k].t;
    const double tp = trace.samples[k + 1].t;
    const double tau = tc - t0;
    if (tau > 0.0) {
      const GeometryState state = derive_state(trace.samples[k].grid);
      const SpeedField sf = speed_field(state, law);
      const auto dtf = dt_f_spatial(state, law);
      const auto grad_h = grad_norm_sq_h(state, sf.f);
      const auto grad_g = grad_norm_sq_g(state, sf.f);
      const auto ptr = P_trace(state, law);
      const auto w = tangential_velocity(state, sf);
      const std::size_t count = state.size();

      HarnackSample s;
      s.t = tc;
      s.tau = tau;
      s.hypotheses_hold = hyp;
      s.u.resize(count);
      s.dt_u_spatial.resize(count);
      s.dt_u_fd.resize(count);
      s.grad_sq_h = grad_h;
      s.grad_sq_g = grad_g;
      s.lhs.resize(count);
      s.f_form.resize(count);
      s.P_trace = ptr;
      s.bound.resize(count);
      s.margin.resize(count);
      const double nb = n * law.expanding_exponent();
      const double lhs_coef = expanding ? nb / ((1.0 - nb) * tau) : kNaN;
      const double bound = -1.0 / (bound_denominator * tau);
      for (std::size_t i = 0; i < count; ++i) {
        const double u = -sf.f.v[i];
        const double u1 = -sf.f.d1[i];
        s.u[i] = u;
        s.dt_u_spatial[i] = -dtf[i];
        const double at_fixed_angle =
            three_point_derivative(tm, tc, tp, u_prev[i], u_mid[i], u_next[i]);
        s.dt_u_fd[i] = at_fixed_angle - w[i] * u1;
        s.lhs[i] = s.dt_u_spatial[i] + grad_h[i] - lhs_coef * u;
        s.f_form[i] = dtf[i] - grad_h[i] + sf.fp[i] * state.K[i] / (bound_denominator * tau);
        s.bound[i] = bound;
        s.margin[i] = ptr[i] - bound;
      }
      s.min_margin = min_of(s.margin);
      s.max_lhs = max_of(s.lhs);
      s.min_f_form = min_of(s.f_form);
      s.max_abs_P = max_abs_of(s.P_trace);
      s.max_abs_dt_u = max_abs_of(s.dt_u_spatial);
      out.push_back(std::move(s));
    }
    u_prev = std::move(u_mid);
    u_mid = std::move(u_next);
  }
  return out;
}

}  // namespace gcf
