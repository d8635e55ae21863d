#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gcf/error.hpp"
#include "gcf/geometry.hpp"
#include "gcf/stencil.hpp"

using namespace gcf;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected gcf::Error";
  return ErrorKind::InvalidConfig;
}

// Ellipse with semi-axes a, b: h = sqrt(a^2 cos^2 + b^2 sin^2), r = a^2 b^2 / h^3.
SupportGrid ellipse(std::size_t n, double a, double b) {
  return SupportGrid::from_function(1, n, [=](double t) {
    return std::sqrt(a * a * std::cos(t) * std::cos(t) + b * b * std::sin(t) * std::sin(t));
  });
}

// Spheroid with equatorial radius a and polar radius c, by normal polar angle.
// Meridian radius a^2 c^2 / h^3, parallel radius a^2 / h.
SupportGrid spheroid(std::size_t m, double a, double c) {
  return SupportGrid::from_function(2, m, [=](double p) {
    return std::sqrt(a * a * std::sin(p) * std::sin(p) + c * c * std::cos(p) * std::cos(p));
  });
}

double max_err(const std::vector<double>& v, const std::function<double(std::size_t)>& exact) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i] - exact(i)));
  return m;
}

}  // namespace

TEST(SupportGrid, RejectsBadShapes) {
  EXPECT_EQ(kind_of([] { SupportGrid(3, std::vector<double>(32, 1.0)); }), ErrorKind::InvalidGrid);
  EXPECT_EQ(kind_of([] { SupportGrid(1, std::vector<double>(8, 1.0)); }), ErrorKind::InvalidGrid);
  EXPECT_EQ(kind_of([] { SupportGrid(1, std::vector<double>(33, 1.0)); }), ErrorKind::InvalidGrid);
  EXPECT_EQ(kind_of([] { SupportGrid(2, std::vector<double>(15, 1.0)); }), ErrorKind::InvalidGrid);
  EXPECT_NO_THROW(SupportGrid(2, std::vector<double>(17, 1.0)));
}

TEST(SupportGrid, AnglesAndSpacing) {
  const SupportGrid c(1, std::vector<double>(64, 1.0));
  EXPECT_DOUBLE_EQ(c.spacing(), 2 * kPi / 64);
  EXPECT_DOUBLE_EQ(c.angle(0), 0.0);
  const SupportGrid s(2, std::vector<double>(32, 1.0));
  EXPECT_DOUBLE_EQ(s.spacing(), kPi / 32);
  EXPECT_DOUBLE_EQ(s.angle(0), 0.5 * kPi / 32);
  EXPECT_NEAR(s.angle(31), kPi - 0.5 * kPi / 32, 1e-15);
}

TEST(Stencil, PeriodicDerivativesAreFourthOrder) {
  double prev1 = 0, prev2 = 0;
  for (std::size_t n : {32u, 64u}) {
    const double dx = 2 * kPi / n;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(3 * i * dx);
    const auto d1 = diff1(v, dx, Topology::Periodic);
    const auto d2 = diff2(v, dx, Topology::Periodic);
    const double e1 = max_err(d1, [&](std::size_t i) { return 3 * std::cos(3 * i * dx); });
    const double e2 = max_err(d2, [&](std::size_t i) { return -9 * std::sin(3 * i * dx); });
    if (prev1 > 0) {
      EXPECT_NEAR(std::log2(prev1 / e1), 4.0, 0.2);
      EXPECT_NEAR(std::log2(prev2 / e2), 4.0, 0.2);
    }
    prev1 = e1;
    prev2 = e2;
  }
}

TEST(Stencil, PolarReflectionParity) {
  const std::size_t m = 64;
  const double dx = kPi / m;
  std::vector<double> even(m), odd(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = (i + 0.5) * dx;
    even[i] = std::cos(2 * p);
    odd[i] = std::sin(p);
  }
  const auto de = diff1(even, dx, Topology::PolarReflect, Parity::Even);
  const auto dde = diff2(even, dx, Topology::PolarReflect, Parity::Even);
  const auto dodd = diff1(odd, dx, Topology::PolarReflect, Parity::Odd);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = (i + 0.5) * dx;
    EXPECT_NEAR(de[i], -2 * std::sin(2 * p), 1e-5);
    EXPECT_NEAR(dde[i], -4 * std::cos(2 * p), 1e-5);
    EXPECT_NEAR(dodd[i], std::cos(p), 1e-6);
  }
}

TEST(Stencil, ConstantFieldHasZeroDerivatives) {
  const std::vector<double> v(40, 2.5);
  for (double x : diff1(v, 0.1, Topology::Periodic)) EXPECT_EQ(x, 0.0);
  for (double x : diff2(v, 0.1, Topology::PolarReflect)) EXPECT_EQ(x, 0.0);
}

TEST(Geometry, CircleIsExact) {
  const double R = 1.7;
  const GeometryState s = derive_state(SupportGrid(1, std::vector<double>(64, R)));
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_DOUBLE_EQ(s.r1.v[i], R);
    EXPECT_DOUBLE_EQ(s.K[i], 1 / R);
    EXPECT_DOUBLE_EQ(s.H[i], 1 / R);
    EXPECT_DOUBLE_EQ(s.g11[i], R * R);
    EXPECT_NEAR(std::hypot(s.position[i][0], s.position[i][1]), R, 1e-14);
  }
}

TEST(Geometry, EllipseRadiusMatchesClosedForm) {
  const double a = 1.3, b = 0.8;
  const GeometryState s = derive_state(ellipse(512, a, b));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double h = s.support[i];
    EXPECT_NEAR(s.r1.v[i], a * a * b * b / (h * h * h), 1e-7);
    const double x = s.position[i][0], y = s.position[i][1];
    EXPECT_NEAR(x * x / (a * a) + y * y / (b * b), 1.0, 1e-8);
  }
}

TEST(Geometry, SpheroidRadiiMatchClosedForm) {
  const double a = 1.2, c = 0.9;
  const GeometryState s = derive_state(spheroid(256, a, c));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double h = s.support[i];
    EXPECT_NEAR(s.r1.v[i], a * a * c * c / (h * h * h), 1e-6) << i;
    EXPECT_NEAR(s.r2.v[i], a * a / h, 1e-6) << i;
    EXPECT_NEAR(s.K[i], 1.0 / (s.r1.v[i] * s.r2.v[i]), 1e-14);
    const double rho = s.position[i][0], z = s.position[i][1];
    EXPECT_NEAR(rho * rho / (a * a) + z * z / (c * c), 1.0, 1e-8);
    EXPECT_GT(rho, 0.0);
  }
}

TEST(Geometry, RejectsOriginOutsideAndNonConvex) {
  std::vector<double> v(32, 1.0);
  v[3] = -0.1;
  EXPECT_EQ(kind_of([&] { derive_state(SupportGrid(1, v)); }), ErrorKind::OriginOutside);
  const SupportGrid wavy = SupportGrid::from_function(1, 64, [](double t) { return 1 + 0.2 * std::cos(3 * t); });
  EXPECT_EQ(kind_of([&] { derive_state(wavy); }), ErrorKind::NonConvex);
  EXPECT_EQ(kind_of([&] { gauss_curvature(wavy); }), ErrorKind::NonConvex);
}

TEST(Geometry, GaussCurvatureFastPathMatchesState) {
  const SupportGrid g = spheroid(64, 1.1, 0.95);
  double rmin = 0;
  const auto K = gauss_curvature(g, &rmin);
  const GeometryState s = derive_state(g);
  double expected_min = 1e300;
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(K[i], s.K[i], 1e-14);
    expected_min = std::min({expected_min, s.r1.v[i], s.r2.v[i]});
  }
  EXPECT_DOUBLE_EQ(rmin, expected_min);
}

TEST(Geometry, CircleOperatorsOnTrigFields) {
  // On a circle of radius R with arc length s = R theta: u = cos theta has
  // u_ss = -cos/R^2, |grad u|_g^2 = sin^2/R^2, and box u = R * u_ss.
  const double R = 2.0;
  const GeometryState s = derive_state(SupportGrid(1, std::vector<double>(256, R)));
  std::vector<double> u(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) u[i] = std::cos(s.angle[i]);
  const FrameHessian hess = covariant_hessian(s, u);
  const auto box = box_op(s, u);
  const auto lap = laplace_beltrami(s, u);
  const auto gg = grad_norm_sq_g(s, u);
  const auto gh = grad_norm_sq_h(s, u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = std::cos(s.angle[i]), sn = std::sin(s.angle[i]);
    EXPECT_NEAR(hess.e11[i], -c / (R * R), 1e-7);
    EXPECT_NEAR(lap[i], -c / (R * R), 1e-7);
    EXPECT_NEAR(box[i], -c / R, 1e-7);
    EXPECT_NEAR(gg[i], sn * sn / (R * R), 1e-7);
    EXPECT_NEAR(gh[i], sn * sn / R, 1e-7);
  }
}

TEST(Geometry, SphereOperatorsOnZonalField) {
  // u = cos(phi) is z / R on a sphere of radius R: Laplacian -2u/R^2,
  // frame Hessian -u/R^2 in both directions, box = R * Laplacian.
  const double R = 1.5;
  const GeometryState s = derive_state(SupportGrid(2, std::vector<double>(128, R)));
  std::vector<double> u(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) u[i] = std::cos(s.angle[i]);
  const FrameHessian hess = covariant_hessian(s, u);
  const auto lap = laplace_beltrami(s, u);
  const auto box = box_op(s, u);
  const auto sff = sff_norm_sq(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = std::cos(s.angle[i]);
    EXPECT_NEAR(hess.e11[i], -c / (R * R), 1e-7) << i;
    EXPECT_NEAR(hess.e22[i], -c / (R * R), 1e-7) << i;
    EXPECT_NEAR(lap[i], -2 * c / (R * R), 1e-7) << i;
    EXPECT_NEAR(box[i], -2 * c / R, 1e-7) << i;
    EXPECT_NEAR(sff[i], 2 / (R * R), 1e-14);
  }
}

TEST(Geometry, CurvatureJetMatchesDifferencedCurvature) {
  const GeometryState s = derive_state(ellipse(512, 1.2, 0.9));
  const Jet k = curvature_jet(s);
  const Jet fd = field_jet(s, s.K);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(k.d1[i], fd.d1[i], 1e-6);
    EXPECT_NEAR(k.d2[i], fd.d2[i], 1e-5);
  }
}

TEST(Geometry, SpeedFieldChainRule) {
  const GeometryState s = derive_state(ellipse(256, 1.1, 0.9));
  const SpeedLaw law = SpeedLaw::expanding(0.5);
  const SpeedField sf = speed_field(s, law);
  const Jet k = curvature_jet(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double K = s.K[i];
    EXPECT_NEAR(sf.f.v[i], -1 / std::sqrt(K), 1e-14);
    EXPECT_NEAR(sf.f.d1[i], 0.5 * std::pow(K, -1.5) * k.d1[i], 1e-12);
  }
}

TEST(Geometry, LaplacianIsFrameTrace) {
  const GeometryState s = derive_state(spheroid(64, 1.1, 0.9));
  std::vector<double> u(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) u[i] = std::cos(2 * s.angle[i]) + 0.3 * std::cos(s.angle[i]);
  const FrameHessian hess = covariant_hessian(s, u);
  const auto lap = laplace_beltrami(s, u);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(lap[i], hess.e11[i] + hess.e22[i], 1e-12);
}

TEST(Geometry, ComponentDerivativesMatchDifferences) {
  const GeometryState s = derive_state(spheroid(256, 1.1, 0.9));
  const ComponentDerivs d = component_derivs(s);
  const Jet g22 = field_jet(s, s.g22, Parity::Even);
  const Jet h22 = field_jet(s, s.h22, Parity::Even);
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    EXPECT_NEAR(d.g22[i], g22.d1[i], 1e-6);
    EXPECT_NEAR(d.h22[i], h22.d1[i], 1e-6);
  }
}

TEST(Geometry, EmbedMatchesState) {
  const SupportGrid g = ellipse(64, 1.2, 0.8);
  const Embedding e = embed(g);
  const GeometryState s = derive_state(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_DOUBLE_EQ(e.position[i][0], s.position[i][0]);
    EXPECT_DOUBLE_EQ(e.normal[i][1], s.normal[i][1]);
  }
}
