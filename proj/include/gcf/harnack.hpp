#pragma once

#include <span>
#include <vector>

#include "gcf/flow.hpp"
#include "gcf/geometry.hpp"
#include "gcf/speedlaw.hpp"

namespace gcf {

/// Per-node Harnack diagnostics at one stored time.
///
/// u = -f(K) (= K^{-b} for the expanding law). dt_u_spatial comes from the
/// evolution equation of f; dt_u_fd from central differences of stored
/// states. Both are derivatives at a fixed point of the evolving
/// hypersurface, so dt_u_fd has the tangential drift of the
/// normal-angle parameterization removed.
struct HarnackSample {
  double t = 0.0;    // flow time
  double tau = 0.0;  // time since the Harnack origin t0
  std::vector<double> u;
  std::vector<double> dt_u_spatial;
  std::vector<double> dt_u_fd;
  std::vector<double> grad_sq_h;
  std::vector<double> grad_sq_g;
  std::vector<double> lhs;     // dt u + |grad u|_h^2 - nb/((1-nb) tau) u  (<= 0)
  std::vector<double> f_form;  // dt f - |grad f|_h^2 + f'K/((1/n+beta) tau)  (>= 0)
  std::vector<double> P_trace;
  std::vector<double> bound;        // -1/((1/n+beta) tau)
  std::vector<double> margin;       // P_trace - bound

  bool hypotheses_hold = false;
  double min_margin = 0.0;
  double max_lhs = 0.0;
  double min_f_form = 0.0;
  double max_abs_P = 0.0;
  double max_abs_dt_u = 0.0;
};

/// d/dt f(K) at fixed points of the hypersurface: f'K (box f + H f).
std::vector<double> dt_f_spatial(const GeometryState& state, const SpeedLaw& law);

/// dt(K^{-b}) + |grad K^{-b}|_h^2 - nb/((1-nb) t) K^{-b}.
/// Throws WrongLawForm unless a = -1 and -1/n < beta < 0, NonPositiveTime if t <= 0.
std::vector<double> harnack_lhs(const GeometryState& state, const SpeedLaw& law, double t);

/// Coordinate components of the Harnack tensor
///   P_ij = nabla_i nabla_j f - h^{kl} nabla_k h_ij nabla_l f + f g^{kl} h_ik h_lj
/// (11 and 22 only; the tensor is diagonal). Each term is kept separately.
struct PTensor {
  std::vector<double> p11;
  std::vector<double> p22;
  std::vector<double> hessian11, connection11, curvature11;
  std::vector<double> hessian22, connection22, curvature22;
};

PTensor P_tensor(const GeometryState& state, const SpeedLaw& law);

/// h^{-1} contraction of P_tensor.
std::vector<double> P_tensor_trace(const GeometryState& state, const PTensor& p);

/// |P|_h^2 = h^{ik} h^{jl} P_ij P_kl.
std::vector<double> P_tensor_norm_sq_h(const GeometryState& state, const PTensor& p);

/// box f + f H - |grad f|_h^2 / (f' K).
std::vector<double> P_trace(const GeometryState& state, const SpeedLaw& law);

/// Tangential velocity component W^1 = -f_1 / r1 of the normal-angle
/// parameterization: d/dt at fixed angle = d/dt at fixed point + W(.).
std::vector<double> tangential_velocity(const GeometryState& state, const SpeedField& speed);

/// Second-order derivative at t1 from three possibly non-uniform samples.
double three_point_derivative(double t0, double t1, double t2, double q0, double q1, double q2);

/// Builds a HarnackSample for every interior stored state with t - t0 > 0.
/// Throws InsufficientTrace for fewer than 3 stored states.
std::vector<HarnackSample> monitor(const FlowTrace& trace, const SpeedLaw& law, double t0);

}  // namespace gcf
