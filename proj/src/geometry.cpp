#include "gcf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gcf/error.hpp"

namespace gcf {

namespace {

constexpr double kMinRadius = 1e-12;

void check_origin_inside(const SupportGrid& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) {
      std::ostringstream os;
      os << "support value h[" << i << "]=" << grid[i] << " <= 0";
      throw Error(ErrorKind::OriginOutside, os.str());
    }
  }
}

void check_radius(double r, std::size_t i, const char* which) {
  if (!(r > kMinRadius)) {
    std::ostringstream os;
    os << "curvature radius " << which << "[" << i << "]=" << r << " <= " << kMinRadius;
    throw Error(ErrorKind::NonConvex, os.str());
  }
}

Jet jet_of(std::vector<double> v, double spacing, Topology topo, Parity parity) {
  Jet j;
  j.d1 = diff1(v, spacing, topo, parity);
  j.d2 = diff2(v, spacing, topo, parity);
  j.v = std::move(v);
  return j;
}

// dB/dphi for B = r2 sin(phi), the radius of the parallel circle.
inline double parallel_radius_d1(const GeometryState& s, std::size_t i) {
  return s.r2.d1[i] * s.sin_angle[i] + s.r2.v[i] * s.cos_angle[i];
}

}  // namespace

SupportGrid::SupportGrid(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  std::ostringstream os;
  if (n_ != 1 && n_ != 2) {
    os << "dimension must be 1 or 2, got " << n_;
    throw Error(ErrorKind::InvalidGrid, os.str());
  }
  if (n_ == 1 && (values_.size() < 16 || values_.size() % 2 != 0)) {
    os << "n=1 grid needs an even size >= 16, got " << values_.size();
    throw Error(ErrorKind::InvalidGrid, os.str());
  }
  if (n_ == 2 && values_.size() < 16) {
    os << "n=2 grid needs size >= 16, got " << values_.size();
    throw Error(ErrorKind::InvalidGrid, os.str());
  }
}

SupportGrid SupportGrid::from_function(int n, std::size_t size,
                                       const std::function<double(double)>& h_of_angle) {
  SupportGrid grid(n, std::vector<double>(size, 1.0));
  for (std::size_t i = 0; i < size; ++i) grid.values_[i] = h_of_angle(grid.angle(i));
  return grid;
}

double SupportGrid::spacing() const noexcept {
  const double count = static_cast<double>(values_.size());
  return n_ == 1 ? 2.0 * std::numbers::pi / count : std::numbers::pi / count;
}

double SupportGrid::angle(std::size_t i) const noexcept {
  const double di = static_cast<double>(i);
  return n_ == 1 ? di * spacing() : (di + 0.5) * spacing();
}

std::vector<double> gauss_curvature(const SupportGrid& grid, double* min_radius) {
  check_origin_inside(grid);
  const auto h = grid.values();
  const double dx = grid.spacing();
  const auto topo = grid.topology();
  const auto hdd = diff2(h, dx, topo);
  std::vector<double> K(grid.size());
  double rmin = std::numeric_limits<double>::infinity();
  if (grid.n() == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = hdd[i] + h[i];
      check_radius(r, i, "r");
      rmin = std::min(rmin, r);
      K[i] = 1.0 / r;
    }
  } else {
    const auto hd = diff1(h, dx, topo);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double phi = grid.angle(i);
      const double r1 = hdd[i] + h[i];
      const double r2 = hd[i] * std::cos(phi) / std::sin(phi) + h[i];
      check_radius(r1, i, "r1");
      check_radius(r2, i, "r2");
      rmin = std::min({rmin, r1, r2});
      K[i] = 1.0 / (r1 * r2);
    }
  }
  if (min_radius) *min_radius = rmin;
  return K;
}

GeometryState derive_state(const SupportGrid& grid) {
  check_origin_inside(grid);
  GeometryState s;
  const std::size_t count = grid.size();
  s.n = grid.n();
  s.spacing = grid.spacing();
  s.topology = grid.topology();
  s.angle.resize(count);
  s.sin_angle.resize(count);
  s.cos_angle.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    s.angle[i] = grid.angle(i);
    s.sin_angle[i] = std::sin(s.angle[i]);
    s.cos_angle[i] = std::cos(s.angle[i]);
  }
  s.support.assign(grid.values().begin(), grid.values().end());
  s.support_d1 = diff1(s.support, s.spacing, s.topology);
  const auto hdd = diff2(s.support, s.spacing, s.topology);

  std::vector<double> r1(count);
  for (std::size_t i = 0; i < count; ++i) {
    r1[i] = hdd[i] + s.support[i];
    check_radius(r1[i], i, "r1");
  }
  s.r1 = jet_of(std::move(r1), s.spacing, s.topology, Parity::Even);

  if (s.n == 2) {
    std::vector<double> r2(count);
    for (std::size_t i = 0; i < count; ++i) {
      r2[i] = s.support_d1[i] * s.cos_angle[i] / s.sin_angle[i] + s.support[i];
      check_radius(r2[i], i, "r2");
    }
    s.r2 = jet_of(std::move(r2), s.spacing, s.topology, Parity::Even);
  }

  s.K.resize(count);
  s.H.resize(count);
  s.g11.resize(count);
  s.h11.resize(count);
  s.position.resize(count);
  s.normal.resize(count);
  if (s.n == 2) {
    s.g22.resize(count);
    s.h22.resize(count);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double a = s.r1.v[i];
    const double h = s.support[i];
    const double hd = s.support_d1[i];
    const double c = s.cos_angle[i];
    const double sn = s.sin_angle[i];
    s.g11[i] = a * a;
    s.h11[i] = a;
    if (s.n == 1) {
      s.K[i] = 1.0 / a;
      s.H[i] = 1.0 / a;
      s.position[i] = {h * c - hd * sn, h * sn + hd * c};
      s.normal[i] = {c, sn};
    } else {
      const double b = s.r2.v[i];
      s.K[i] = 1.0 / (a * b);
      s.H[i] = 1.0 / a + 1.0 / b;
      s.g22[i] = (b * sn) * (b * sn);
      s.h22[i] = b * sn * sn;
      s.position[i] = {h * sn + hd * c, h * c - hd * sn};
      s.normal[i] = {sn, c};
    }
  }
  return s;
}

Embedding embed(const SupportGrid& grid) {
  check_origin_inside(grid);
  const auto h = grid.values();
  const auto hd = diff1(h, grid.spacing(), grid.topology());
  Embedding e;
  e.position.resize(grid.size());
  e.normal.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double c = std::cos(grid.angle(i));
    const double sn = std::sin(grid.angle(i));
    if (grid.n() == 1) {
      e.position[i] = {h[i] * c - hd[i] * sn, h[i] * sn + hd[i] * c};
      e.normal[i] = {c, sn};
    } else {
      e.position[i] = {h[i] * sn + hd[i] * c, h[i] * c - hd[i] * sn};
      e.normal[i] = {sn, c};
    }
  }
  return e;
}

Jet field_jet(const GeometryState& state, std::span<const double> values, Parity parity) {
  return jet_of(std::vector<double>(values.begin(), values.end()), state.spacing,
                state.topology, parity);
}

Jet curvature_jet(const GeometryState& s) {
  const std::size_t count = s.size();
  Jet k;
  k.v = s.K;
  k.d1.resize(count);
  k.d2.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    // log K = -sum log r_i
    const double a = s.r1.v[i];
    double l1 = -s.r1.d1[i] / a;
    double l2 = -(s.r1.d2[i] / a - (s.r1.d1[i] / a) * (s.r1.d1[i] / a));
    if (s.n == 2) {
      const double b = s.r2.v[i];
      l1 -= s.r2.d1[i] / b;
      l2 -= s.r2.d2[i] / b - (s.r2.d1[i] / b) * (s.r2.d1[i] / b);
    }
    k.d1[i] = s.K[i] * l1;
    k.d2[i] = s.K[i] * (l2 + l1 * l1);
  }
  return k;
}

SpeedField speed_field(const GeometryState& state, const SpeedLaw& law) {
  const Jet k = curvature_jet(state);
  const std::size_t count = state.size();
  SpeedField sf;
  sf.f.v.resize(count);
  sf.f.d1.resize(count);
  sf.f.d2.resize(count);
  sf.fp.resize(count);
  sf.fpp.resize(count);
  sf.fppp.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const SpeedDerivs d = law.eval(k.v[i]);
    sf.f.v[i] = d.f;
    sf.f.d1[i] = d.d1 * k.d1[i];
    sf.f.d2[i] = d.d2 * k.d1[i] * k.d1[i] + d.d1 * k.d2[i];
    sf.fp[i] = d.d1;
    sf.fpp[i] = d.d2;
    sf.fppp[i] = d.d3;
  }
  return sf;
}

CoordHessian covariant_hessian_coords(const GeometryState& s, const Jet& u) {
  const std::size_t count = s.size();
  CoordHessian out;
  out.c11.resize(count);
  if (s.n == 2) out.c22.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = s.r1.v[i];
    // Gamma^1_11 = g11'/(2 g11) = r1'/r1
    out.c11[i] = u.d2[i] - (s.r1.d1[i] / a) * u.d1[i];
    if (s.n == 2) {
      // Gamma^1_22 = -B B'/A^2 with A = r1, B = r2 sin(phi)
      const double b = s.r2.v[i] * s.sin_angle[i];
      out.c22[i] = b * parallel_radius_d1(s, i) * u.d1[i] / (a * a);
    }
  }
  return out;
}

FrameHessian covariant_hessian(const GeometryState& s, const Jet& u) {
  const CoordHessian c = covariant_hessian_coords(s, u);
  FrameHessian out;
  out.e11.resize(s.size());
  if (s.n == 2) out.e22.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.e11[i] = c.c11[i] / s.g11[i];
    if (s.n == 2) {
      const double a = s.r1.v[i];
      const double log_b_d1 = s.r2.d1[i] / s.r2.v[i] + s.cos_angle[i] / s.sin_angle[i];
      out.e22[i] = log_b_d1 * u.d1[i] / (a * a);
    }
  }
  return out;
}

FrameHessian covariant_hessian(const GeometryState& state, std::span<const double> u) {
  return covariant_hessian(state, field_jet(state, u));
}

std::vector<double> grad_norm_sq_h(const GeometryState& s, const Jet& u) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = u.d1[i] * u.d1[i] / s.h11[i];
  return out;
}

std::vector<double> grad_norm_sq_h(const GeometryState& state, std::span<const double> u) {
  return grad_norm_sq_h(state, field_jet(state, u));
}

std::vector<double> grad_norm_sq_g(const GeometryState& s, const Jet& u) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = u.d1[i] * u.d1[i] / s.g11[i];
  return out;
}

std::vector<double> grad_norm_sq_g(const GeometryState& state, std::span<const double> u) {
  return grad_norm_sq_g(state, field_jet(state, u));
}

std::vector<double> grad_dot_h(const GeometryState& s, const Jet& u, const Jet& w) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = u.d1[i] * w.d1[i] / s.h11[i];
  return out;
}

std::vector<double> box_op(const GeometryState& s, const Jet& u) {
  const CoordHessian c = covariant_hessian_coords(s, u);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = c.c11[i] / s.h11[i];
    if (s.n == 2) {
      // c22 / h22 with h22 = r2 sin^2, written without dividing by sin^2.
      const double a = s.r1.v[i];
      out[i] += (s.r2.d1[i] + s.r2.v[i] * s.cos_angle[i] / s.sin_angle[i]) * u.d1[i] / (a * a);
    }
  }
  return out;
}

std::vector<double> box_op(const GeometryState& state, std::span<const double> u) {
  return box_op(state, field_jet(state, u));
}

std::vector<double> laplace_beltrami(const GeometryState& s, const Jet& u) {
  const FrameHessian e = covariant_hessian(s, u);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = e.e11[i];
    if (s.n == 2) out[i] += e.e22[i];
  }
  return out;
}

std::vector<double> laplace_beltrami(const GeometryState& state, std::span<const double> u) {
  return laplace_beltrami(state, field_jet(state, u));
}

std::vector<double> sff_norm_sq(const GeometryState& s) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double k1 = 1.0 / s.r1.v[i];
    out[i] = k1 * k1;
    if (s.n == 2) {
      const double k2 = 1.0 / s.r2.v[i];
      out[i] += k2 * k2;
    }
  }
  return out;
}

ComponentDerivs component_derivs(const GeometryState& s) {
  ComponentDerivs d;
  const std::size_t count = s.size();
  d.g11.resize(count);
  d.h11.resize(count);
  if (s.n == 2) {
    d.g22.resize(count);
    d.h22.resize(count);
  }
  for (std::size_t i = 0; i < count; ++i) {
    d.g11[i] = 2.0 * s.r1.v[i] * s.r1.d1[i];
    d.h11[i] = s.r1.d1[i];
    if (s.n == 2) {
      const double sn = s.sin_angle[i];
      const double b = s.r2.v[i] * sn;
      d.g22[i] = 2.0 * b * parallel_radius_d1(s, i);
      d.h22[i] = s.r2.d1[i] * sn * sn + 2.0 * s.r2.v[i] * sn * s.cos_angle[i];
    }
  }
  return d;
}

SffGradient sff_gradient(const GeometryState& s) {
  const ComponentDerivs d = component_derivs(s);
  SffGradient out;
  out.d1_h11.resize(s.size());
  if (s.n == 2) out.d1_h22.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double gamma111 = d.g11[i] / (2.0 * s.g11[i]);
    out.d1_h11[i] = d.h11[i] - 2.0 * gamma111 * s.h11[i];
    if (s.n == 2) {
      // Gamma^2_12 = B'/B
      const double gamma212 = parallel_radius_d1(s, i) / (s.r2.v[i] * s.sin_angle[i]);
      out.d1_h22[i] = d.h22[i] - 2.0 * gamma212 * s.h22[i];
    }
  }
  return out;
}

}  // namespace gcf
