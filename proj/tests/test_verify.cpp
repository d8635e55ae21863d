#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gcf/error.hpp"
#include "gcf/verify.hpp"

using namespace gcf;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected gcf::Error";
  return ErrorKind::InvalidConfig;
}

FlowConfig stored(int n, double b, std::size_t size, double interval, double t_end) {
  FlowConfig c;
  c.n = n;
  c.grid_size = size;
  c.law = SpeedLaw::expanding(b);
  c.output_interval = interval;
  c.t_end = t_end;
  return c;
}

std::vector<double> random_field(const GeometryState& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  double c[4], p[4];
  for (int k = 0; k < 4; ++k) {
    c[k] = coef(rng);
    p[k] = s.n == 1 ? phase(rng) : 0.0;
  }
  std::vector<double> u(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int k = 0; k < 4; ++k) u[i] += c[k] * std::cos(k * s.angle[i] + p[k]);
  }
  return u;
}

}  // namespace

TEST(SphereRadiusExact, ClosedForms) {
  EXPECT_NEAR(sphere_radius_exact(1.0, 2.0, 1, 0.5), 4.0, 1e-14);
  for (double t : {0.5, 1.0, 3.0}) EXPECT_NEAR(sphere_radius_exact(0.0, t, 1, 0.5), t * t / 4, 1e-14);
  EXPECT_EQ(sphere_radius_exact(1.7, 0.0, 2, 0.3), 1.7);
  EXPECT_EQ(kind_of([] { sphere_radius_exact(1.0, 1.0, 2, 0.5); }), ErrorKind::BadExponent);
  EXPECT_EQ(kind_of([] { sphere_radius_exact(1.0, 1.0, 1, 0.0); }), ErrorKind::BadExponent);
  EXPECT_EQ(kind_of([] { sphere_radius_exact(-1.0, 1.0, 1, 0.5); }), ErrorKind::NonPositiveArgument);
}

TEST(ConvergenceOrder, SlopeOfSyntheticLevels) {
  std::vector<ResidualLevel> levels = {{0.4, 0, 3 * 0.16}, {0.2, 0, 3 * 0.04}, {0.1, 0, 3 * 0.01}};
  EXPECT_NEAR(convergence_order(levels), 2.0, 1e-12);
  levels.pop_back();
  EXPECT_TRUE(std::isnan(convergence_order(levels)));
}

TEST(CheckEvolution, RoundMetricCheck) {
  FlowConfig c = stored(1, 0.5, 64, 1e-4, 0.002);
  const FlowTrace tr = run(c);
  const EvolutionQuantity q[] = {EvolutionQuantity::Metric};
  const auto reps = check_evolution(tr, c.law, q, {0, {1}, 1e-8, 1.7, 2.3});
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_LE(reps[0].finest_residual(), 1e-8);
  EXPECT_FALSE(reps[0].has_order());
  EXPECT_TRUE(reps[0].pass);
}

TEST(CheckEvolution, HalvingSpacingQuartersResidual) {
  const FlowConfig c = evolution_config(1);
  const FlowTrace tr = run(c);
  const std::size_t m = tr.samples.size() / 2;
  for (EvolutionQuantity q : {EvolutionQuantity::Metric, EvolutionQuantity::SecondFundamentalForm,
                              EvolutionQuantity::Speed, EvolutionQuantity::MeanCurvature}) {
    const double ratio = evolution_residual(tr, c.law, q, m, 4) / evolution_residual(tr, c.law, q, m, 2);
    EXPECT_GE(ratio, 3.4) << identity_id(q);
    EXPECT_LE(ratio, 4.6) << identity_id(q);
  }
}

TEST(CheckEvolution, PerturbedShapesPassAllChecks) {
  const EvolutionQuantity all[] = {EvolutionQuantity::Metric, EvolutionQuantity::SecondFundamentalForm,
                                   EvolutionQuantity::Speed, EvolutionQuantity::MeanCurvature};
  for (int n : {1, 2}) {
    const FlowConfig c = evolution_config(n);
    for (const auto& r : check_evolution(run(c), c.law, all)) {
      EXPECT_TRUE(r.pass) << r.id << " n=" << n << " " << r.note;
      EXPECT_GE(r.order, 1.7);
      EXPECT_LE(r.order, 2.3);
    }
  }
}

TEST(CheckEvolution, NeedsEnoughStates) {
  FlowConfig c = stored(1, 0.5, 32, 0.05, 0.1);
  const FlowTrace tr = run(c);
  const EvolutionQuantity q[] = {EvolutionQuantity::Metric};
  EXPECT_EQ(kind_of([&] { check_evolution(tr, c.law, q); }), ErrorKind::InsufficientTrace);
}

TEST(CheckIdentities, RoundCircleResidualsVanishUnderRefinement) {
  // Both sides come from differences of the embedding, so only the
  // truncation error is left on a circle.
  const IdentityResiduals coarse = identity_residuals(SupportGrid(1, std::vector<double>(64, 1.3)));
  const IdentityResiduals fine = identity_residuals(SupportGrid(1, std::vector<double>(128, 1.3)));
  EXPECT_LE(coarse.gauss_formula, 1e-5);
  EXPECT_LE(coarse.weingarten, 1e-5);
  EXPECT_GT(coarse.gauss_formula / fine.gauss_formula, 3.4);
  EXPECT_LE(fine.weingarten, std::max(coarse.weingarten / 3.4, 1e-12));
}

TEST(CheckIdentities, ConvergeOnPerturbedShapes) {
  for (int n : {1, 2}) {
    std::vector<SupportGrid> ladder;
    for (std::size_t size : {32u, 64u, 128u}) ladder.push_back(identity_grid(n, size));
    const auto reps = check_identities(ladder);
    ASSERT_EQ(reps.size(), 3u);
    for (const auto& r : reps) {
      EXPECT_TRUE(r.pass) << r.id << " n=" << n;
      EXPECT_GE(r.order, 2.0) << r.id << " n=" << n;
    }
    EXPECT_EQ(reps[2].degenerate, n == 1);
  }
}

TEST(CheckPExpansion, RoundAndPerturbed) {
  const SpeedLaw law = SpeedLaw::expanding(0.5);
  for (const auto& r : check_P_expansion(derive_state(SupportGrid(1, std::vector<double>(64, 2.0))), law)) {
    EXPECT_LE(r.levels[0].residual, 1e-12) << r.id;
  }
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    FlowConfig c;
    c.grid_size = 256;
    c.initial = random_convex_initial(rng, 1);
    for (const auto& r : check_P_expansion(derive_state(c.initial_grid()), law)) {
      EXPECT_TRUE(r.pass) << r.id << " " << r.levels[0].residual;
    }
  }
}

TEST(CheckPEvolution, RoundCircleClosedForm) {
  // P = fH = -1/(1 + t/2) for the circle from R0 = 1, so dP/dt = 1/(2 (1 + t/2)^2).
  FlowConfig c = stored(1, 0.5, 64, 1e-3, 0.5);
  const FlowTrace tr = run(c);
  const std::size_t m = tr.samples.size() / 2;
  const PEvolutionSides sides = P_evolution_sides(tr, c.law, m, 1);
  const double exact = 0.5 / std::pow(1 + sides.t / 2, 2);
  for (std::size_t i = 0; i < sides.lhs.size(); ++i) {
    EXPECT_NEAR(sides.lhs[i], exact, 1e-6);
    EXPECT_NEAR(sides.rhs[i], exact, 1e-6);
    EXPECT_EQ(sides.beta_group[i], 0.0);
  }
}

TEST(CheckPEvolution, SelfSimilarBothSides) {
  FlowConfig c = stored(1, 0.5, 64, 0.002, 3.0);
  c.initial.type = InitialShape::SelfSimilar;
  c.initial.R0 = 0.25;
  const FlowTrace tr = run(c);
  const PEvolutionSides sides = P_evolution_sides(tr, c.law, tr.samples.size() / 2, 1);
  const double exact = 2 / (sides.t * sides.t);
  for (std::size_t i = 0; i < sides.lhs.size(); ++i) {
    EXPECT_NEAR(sides.lhs[i], exact, 1e-5);
    EXPECT_NEAR(sides.rhs[i], exact, 1e-5);
  }
}

TEST(CheckPEvolution, PerturbedConvergesAtSecondOrder) {
  const FlowConfig c = pevol_config();
  const IdentityReport r = check_P_evolution(run(c), c.law);
  EXPECT_TRUE(r.pass) << r.note;
  EXPECT_GE(r.order, 1.7);
  EXPECT_LE(r.order, 2.3);
  EXPECT_LE(r.finest_residual(), 1e-4);
}

TEST(CheckPEvolution, ExponentialLawKeepsBetaGroup) {
  FlowConfig c = stored(1, 0.5, 64, 1e-3, 0.004);
  c.law = SpeedLaw::exponential();
  const FlowTrace tr = run(c);
  const PEvolutionSides sides = P_evolution_sides(tr, c.law, 2, 1);
  EXPECT_GT(std::abs(sides.beta_group[0]), 1e-3);
  for (std::size_t i = 0; i < sides.lhs.size(); ++i) EXPECT_NEAR(sides.lhs[i], sides.rhs[i], 1e-4 * std::abs(sides.rhs[i]));
}

TEST(HessianOracle, ConstantFieldHasZeroHessian) {
  for (int n : {1, 2}) {
    const SupportGrid g = identity_grid(n, 64);
    const OracleHessian h = hessian_oracle(g, std::vector<double>(64, 3.0));
    for (double v : h.e11) EXPECT_NEAR(v, 0.0, 1e-9);
    for (double v : h.e22) EXPECT_NEAR(v, 0.0, 1e-9);
  }
}

TEST(HessianOracle, CircleCosine) {
  const double R = 2.0;
  const SupportGrid g(1, std::vector<double>(256, R));
  std::vector<double> u(256);
  for (std::size_t i = 0; i < 256; ++i) u[i] = std::cos(g.angle(i));
  const OracleHessian h = hessian_oracle(g, u);
  for (std::size_t i = 0; i < 256; ++i) {
    EXPECT_NEAR(h.e11[i], -std::cos(g.angle(i)) / (R * R), 5e-4);
    EXPECT_NEAR(h.grad1[i], -std::sin(g.angle(i)) / R, 5e-4);
  }
}

TEST(HessianOracle, AgreesWithChristoffelHessianAtSecondOrder) {
  for (int n : {1, 2}) {
    std::mt19937_64 rng(11 + n);
    for (int trial = 0; trial < 10; ++trial) {
      const auto seed = rng();
      double err[2];
      int k = 0;
      for (std::size_t size : {64u, 128u}) {
        std::mt19937_64 field_rng(seed);
        const SupportGrid g = identity_grid(n, size);
        const GeometryState s = derive_state(g);
        const auto u = random_field(s, field_rng);
        const OracleHessian o = hessian_oracle(g, u);
        const FrameHessian c = covariant_hessian(s, u);
        double e = 0, scale = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          e = std::max(e, std::abs(o.e11[i] - c.e11[i]));
          scale = std::max(scale, std::abs(c.e11[i]));
          if (n == 2) {
            e = std::max(e, std::abs(o.e22[i] - c.e22[i]));
            scale = std::max(scale, std::abs(c.e22[i]));
          }
        }
        err[k++] = e / scale;
      }
      EXPECT_GT(err[0] / err[1], 3.0) << "n=" << n << " trial " << trial;
      EXPECT_LT(err[1], 0.03) << "n=" << n << " trial " << trial;
    }
  }
}

TEST(RandomConvexInitial, IsConvexAndSeeded) {
  std::mt19937_64 a(3), b(3);
  for (int k = 0; k < 50; ++k) {
    for (int n : {1, 2}) {
      const InitialSpec sa = random_convex_initial(a, n);
      const InitialSpec sb = random_convex_initial(b, n);
      ASSERT_EQ(sa.modes.size(), sb.modes.size());
      for (std::size_t i = 0; i < sa.modes.size(); ++i) {
        EXPECT_EQ(sa.modes[i].amplitude, sb.modes[i].amplitude);
        EXPECT_LE(sa.modes[i].k, 5);
        EXPECT_LE(std::abs(sa.modes[i].amplitude), 0.05);
      }
      FlowConfig c;
      c.n = n;
      c.grid_size = 128;
      c.law = SpeedLaw::expanding(0.25);
      c.initial = sa;
      EXPECT_NO_THROW(c.validate());
    }
  }
}

TEST(Suites, FastSuitesPass) {
  for (const char* name : {"speedlaw", "identity", "pexpand"}) {
    for (const auto& r : run_suite(name)) EXPECT_TRUE(r.pass) << name << ": " << r.id << " " << r.note;
  }
  EXPECT_EQ(kind_of([] { run_suite("nope"); }), ErrorKind::InvalidConfig);
}
