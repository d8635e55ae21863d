#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gcf/speedlaw.hpp"
#include "gcf/stencil.hpp"

namespace gcf {

/// Support function h sampled over normal directions.
///
/// n = 1: N equally spaced normal angles theta_i = 2 pi i / N (N even, >= 16).
/// n = 2: axisymmetric h(phi) at cell-centered polar angles
///        phi_j = (j + 1/2) pi / M (M >= 16).
class SupportGrid {
 public:
  /// Throws InvalidGrid on a bad dimension or size. Positivity of the values
  /// is checked by derive_state, not here.
  SupportGrid(int n, std::vector<double> values);

  static SupportGrid from_function(int n, std::size_t size,
                                   const std::function<double(double)>& h_of_angle);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return values_.size(); }
  double spacing() const noexcept;
  double angle(std::size_t i) const noexcept;
  Topology topology() const noexcept {
    return n_ == 1 ? Topology::Periodic : Topology::PolarReflect;
  }

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  int n_;
  std::vector<double> values_;
};

/// A scalar field together with its first and second angular derivatives.
struct Jet {
  std::vector<double> v;
  std::vector<double> d1;
  std::vector<double> d2;

  std::size_t size() const noexcept { return v.size(); }
};

/// Per-node geometry derived from a support grid.
///
/// Coordinates are the normal angle (theta for n=1, (phi, lambda) for n=2).
/// Principal radii: n=1 r1 = h'' + h; n=2 r1 = h_phiphi + h (meridian),
/// r2 = h_phi cot(phi) + h (parallel). For n=1 the r2 arrays are empty.
/// g11 = r1^2, h11 = r1; n=2 adds g22 = (r2 sin phi)^2, h22 = r2 sin^2 phi.
/// Positions and normals are in the plane (n=1) or the meridian half-plane
/// lambda = 0 as (rho, z) with rho the distance from the axis (n=2).
struct GeometryState {
  int n = 1;
  double spacing = 0.0;
  Topology topology = Topology::Periodic;
  std::vector<double> angle;
  std::vector<double> sin_angle;
  std::vector<double> cos_angle;

  std::vector<double> support;
  std::vector<double> support_d1;

  Jet r1;
  Jet r2;

  std::vector<double> K;
  std::vector<double> H;

  std::vector<double> g11;
  std::vector<double> g22;
  std::vector<double> h11;
  std::vector<double> h22;

  std::vector<std::array<double, 2>> position;
  std::vector<std::array<double, 2>> normal;

  std::size_t size() const noexcept { return angle.size(); }
};

/// Derives every per-node quantity. Throws OriginOutside if some h <= 0 and
/// NonConvex if some curvature radius <= 1e-12.
GeometryState derive_state(const SupportGrid& grid);

/// Only the Gauss curvature; cheap path used inside time stepping.
/// min_radius receives the smallest principal radius. Throws like derive_state.
std::vector<double> gauss_curvature(const SupportGrid& grid, double* min_radius = nullptr);

struct Embedding {
  std::vector<std::array<double, 2>> position;
  std::vector<std::array<double, 2>> normal;
};

/// F = h nu + h' tau for n=1; the (rho, z) meridian profile for n=2.
Embedding embed(const SupportGrid& grid);

/// Jet of a sampled field by fourth-order differences (even parity at poles).
Jet field_jet(const GeometryState& state, std::span<const double> values,
              Parity parity = Parity::Even);

/// Jet of K built from the radii jets by the chain rule.
Jet curvature_jet(const GeometryState& state);

/// f(K) over the nodes, with its jet from the chain rule and the
/// per-node derivatives f', f'', f''' at K.
struct SpeedField {
  Jet f;
  std::vector<double> fp;
  std::vector<double> fpp;
  std::vector<double> fppp;
};

SpeedField speed_field(const GeometryState& state, const SpeedLaw& law);

/// Covariant Hessian in the orthonormal principal frame (e1 along the
/// meridian or curve, e2 along the parallel; e22 is empty for n=1).
struct FrameHessian {
  std::vector<double> e11;
  std::vector<double> e22;
};

/// Coordinate components of the covariant Hessian nabla_i nabla_j u
/// (11 = theta/phi, 22 = lambda).
struct CoordHessian {
  std::vector<double> c11;
  std::vector<double> c22;
};

CoordHessian covariant_hessian_coords(const GeometryState& state, const Jet& u);
FrameHessian covariant_hessian(const GeometryState& state, const Jet& u);
FrameHessian covariant_hessian(const GeometryState& state, std::span<const double> u);

/// h^{ij} u_i u_j.
std::vector<double> grad_norm_sq_h(const GeometryState& state, const Jet& u);
std::vector<double> grad_norm_sq_h(const GeometryState& state, std::span<const double> u);

/// g^{ij} u_i u_j.
std::vector<double> grad_norm_sq_g(const GeometryState& state, const Jet& u);
std::vector<double> grad_norm_sq_g(const GeometryState& state, std::span<const double> u);

/// h^{ij} nabla_i u nabla_j w.
std::vector<double> grad_dot_h(const GeometryState& state, const Jet& u, const Jet& w);

/// Box operator h^{ij} nabla_i nabla_j u.
std::vector<double> box_op(const GeometryState& state, const Jet& u);
std::vector<double> box_op(const GeometryState& state, std::span<const double> u);

/// Laplace-Beltrami g^{ij} nabla_i nabla_j u.
std::vector<double> laplace_beltrami(const GeometryState& state, const Jet& u);
std::vector<double> laplace_beltrami(const GeometryState& state, std::span<const double> u);

/// |h|^2_g: sum of squared principal curvatures.
std::vector<double> sff_norm_sq(const GeometryState& state);

/// Christoffel-based covariant derivatives of the second fundamental form
/// along the first coordinate: nabla_1 h_11 and nabla_1 h_22 (n=2 only).
struct SffGradient {
  std::vector<double> d1_h11;
  std::vector<double> d1_h22;
};

SffGradient sff_gradient(const GeometryState& state);

/// First-coordinate derivatives of the metric and second fundamental form
/// components, from the radii jets.
struct ComponentDerivs {
  std::vector<double> g11;
  std::vector<double> g22;
  std::vector<double> h11;
  std::vector<double> h22;
};

ComponentDerivs component_derivs(const GeometryState& state);

}  // namespace gcf
