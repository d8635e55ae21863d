#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "gcf/error.hpp"
#include "gcf/verify.hpp"

namespace gcf {

namespace {

IdentityReport named(std::string id) {
  IdentityReport r;
  r.id = std::move(id);
  return r;
}

std::string fmt_b(double b) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", b);
  return buf;
}

IdentityReport round_oracle(int n, double b, std::size_t size) {
  FlowConfig cfg;
  cfg.n = n;
  cfg.grid_size = size;
  cfg.law = SpeedLaw::expanding(b);
  cfg.initial.R0 = 1.0;
  cfg.t_end = 2.0;
  cfg.stride = 50;
  const FlowTrace trace = run(cfg);
  double res = 0.0;
  for (const auto& s : trace.samples) {
    const double R = sphere_radius_exact(1.0, s.t - cfg.t0, n, b);
    for (std::size_t i = 0; i < s.grid.size(); ++i) res = std::max(res, std::abs(s.grid[i] / R - 1.0));
  }
  IdentityReport r;
  r.id = "round_n" + std::to_string(n) + "_b" + fmt_b(b);
  r.levels.push_back({cfg.initial_grid().spacing(), size, res});
  r.tolerance = 1e-6;
  r.pass = trace.reason == Termination::Completed && trace.samples.back().t == cfg.t_end && res <= r.tolerance;
  if (!r.pass) r.note = std::string("termination ") + to_string(trace.reason);
  return r;
}

std::vector<IdentityReport> oracle_suite() {
  std::vector<IdentityReport> out;
  for (double b : {0.2, 0.5, 0.8}) out.push_back(round_oracle(1, b, 256));
  for (double b : {0.2, 0.4}) out.push_back(round_oracle(2, b, 128));
  return out;
}

std::vector<IdentityReport> evolution_suite() {
  std::vector<IdentityReport> out;
  const EvolutionQuantity all[] = {EvolutionQuantity::Metric, EvolutionQuantity::SecondFundamentalForm,
                                   EvolutionQuantity::Speed, EvolutionQuantity::MeanCurvature};
  {
    const FlowConfig cfg = evolution_config(1);
    auto reports = check_evolution(run(cfg), cfg.law, all);
    for (auto& r : reports) r.id += "_n1";
    out.insert(out.end(), reports.begin(), reports.end());
  }
  {
    const FlowConfig cfg = evolution_config(2);
    auto reports = check_evolution(run(cfg), cfg.law, all);
    for (auto& r : reports) r.id += "_n2";
    out.insert(out.end(), reports.begin(), reports.end());
  }
  return out;
}

std::vector<IdentityReport> identity_suite() {
  std::vector<IdentityReport> out;
  for (int n : {1, 2}) {
    std::vector<SupportGrid> ladder;
    for (std::size_t size : {32u, 64u, 128u}) ladder.push_back(identity_grid(n, size));
    auto reports = check_identities(ladder);
    for (auto& r : reports) r.id += "_n" + std::to_string(n);
    out.insert(out.end(), reports.begin(), reports.end());
  }
  return out;
}

std::vector<IdentityReport> pexpand_suite() {
  std::vector<IdentityReport> out;
  std::mt19937_64 rng(20240611);
  for (int n : {1, 2}) {
    const SpeedLaw law = SpeedLaw::expanding(n == 1 ? 0.5 : 0.25);
    for (int k = 0; k < 10; ++k) {
      FlowConfig cfg;
      cfg.n = n;
      cfg.grid_size = n == 1 ? 256 : 128;
      cfg.initial = random_convex_initial(rng, n);
      const GeometryState state = derive_state(cfg.initial_grid());
      auto reports = check_P_expansion(state, law);
      for (auto& r : reports) r.id += "_n" + std::to_string(n) + "_" + std::to_string(k);
      out.insert(out.end(), reports.begin(), reports.end());
    }
  }
  return out;
}

std::vector<IdentityReport> pevol_suite() {
  std::vector<IdentityReport> out;
  {
    const FlowConfig cfg = pevol_config();
    out.push_back(check_P_evolution(run(cfg), cfg.law));
  }
  {
    // Self-similar circle: dP/dt = 2/t^2 on both sides.
    FlowConfig cfg;
    cfg.n = 1;
    cfg.grid_size = 64;
    cfg.law = SpeedLaw::expanding(0.5);
    cfg.initial.type = InitialShape::SelfSimilar;
    cfg.initial.R0 = 0.25;
    cfg.t_end = 3.0;
    cfg.output_interval = 0.002;
    const FlowTrace trace = run(cfg);
    const std::size_t anchor = trace.samples.size() / 2;
    const PEvolutionSides sides = P_evolution_sides(trace, cfg.law, anchor, 1);
    const double exact = 2.0 / (sides.t * sides.t);
    double res = 0.0;
    for (std::size_t i = 0; i < sides.lhs.size(); ++i) {
      res = std::max({res, std::abs(sides.lhs[i] - exact) / exact, std::abs(sides.rhs[i] - exact) / exact});
    }
    IdentityReport r;
    r.id = "harnack_evolution_self_similar";
    r.levels.push_back({cfg.output_interval, cfg.grid_size, res});
    r.tolerance = 1e-5;
    r.pass = res <= r.tolerance;
    out.push_back(r);
  }
  return out;
}

std::vector<IdentityReport> speedlaw_suite() {
  std::vector<IdentityReport> out;
  const double xs[] = {0.5, 1.0, 2.0, 4.0};
  const std::pair<const char*, SpeedLaw> powers[] = {
      {"expanding_b0.1", SpeedLaw::expanding(0.1)}, {"expanding_b0.5", SpeedLaw::expanding(0.5)},
      {"expanding_b0.9", SpeedLaw::expanding(0.9)}, {"power_a1_beta2", SpeedLaw::power(1.0, 2.0)},
      {"power_a2_beta0.5", SpeedLaw::power(2.0, 0.5)}, {"power_a-3_beta-1.5", SpeedLaw::power(-3.0, -1.5)},
  };
  for (const auto& [name, law] : powers) {
    const PowerLawIdentityReport rep = check_power_law_identities(law, xs);
    const double values[] = {rep.max_abs_alpha, rep.max_abs_beta, rep.max_abs_gamma};
    const char* ids[] = {"alpha_vanishes_", "beta_vanishes_", "gamma_vanishes_"};
    for (int k = 0; k < 3; ++k) {
      IdentityReport r;
      r.id = std::string(ids[k]) + name;
      r.levels.push_back({0.0, 4, values[k]});
      r.tolerance = 1e-12;
      r.pass = values[k] <= r.tolerance;
      out.push_back(r);
    }
  }
  const PowerLawIdentityReport rep = check_power_law_identities(SpeedLaw::exponential(), xs);
  IdentityReport gamma = named("gamma_beta_relation_exponential");
  gamma.levels.push_back({0.0, 4, rep.max_gamma_residual});
  gamma.tolerance = 1e-8;
  gamma.pass = rep.max_gamma_residual <= gamma.tolerance;
  IdentityReport beta = named("beta_prime_relation_exponential");
  beta.levels.push_back({0.0, 4, rep.max_beta_prime_residual});
  beta.tolerance = 1e-8;
  beta.pass = rep.max_beta_prime_residual <= beta.tolerance;
  IdentityReport nonzero = named("alpha_nonzero_exponential");
  nonzero.levels.push_back({0.0, 4, rep.max_abs_alpha});
  nonzero.tolerance = 1e-3;
  nonzero.pass = rep.max_abs_alpha > nonzero.tolerance;
  nonzero.note = "control law: alpha must not vanish";
  out.push_back(gamma);
  out.push_back(beta);
  out.push_back(nonzero);
  return out;
}

}  // namespace

FlowConfig evolution_config(int n) {
  FlowConfig cfg;
  cfg.n = n;
  cfg.law = SpeedLaw::expanding(n == 1 ? 0.5 : 0.25);
  cfg.initial.type = InitialShape::Fourier;
  cfg.initial.R0 = 1.0;
  if (n == 1) {
    cfg.grid_size = 256;
    cfg.initial.modes = {{2, 0.03, 0.0}, {3, 0.01, 0.4}};
  } else {
    cfg.grid_size = 256;
    cfg.initial.modes = {{2, 0.03, 0.0}, {3, 0.01, 0.0}};
  }
  cfg.output_interval = 0.0005;
  cfg.t_end = 0.05;
  return cfg;
}

FlowConfig pevol_config() {
  FlowConfig cfg;
  cfg.n = 1;
  cfg.grid_size = 128;
  cfg.law = SpeedLaw::expanding(0.5);
  cfg.initial.type = InitialShape::Fourier;
  cfg.initial.modes = {{2, 0.03, 0.0}};
  cfg.output_interval = 0.005;
  cfg.t_end = 0.4;
  return cfg;
}

SupportGrid identity_grid(int n, std::size_t size) {
  if (n == 1) {
    return SupportGrid::from_function(1, size, [](double t) {
      return 1.0 + 0.05 * std::cos(2.0 * t) + 0.02 * std::sin(3.0 * t + 0.3);
    });
  }
  return SupportGrid::from_function(2, size, [](double p) { return 1.0 + 0.1 * std::cos(2.0 * p); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"oracle", "evolution", "identity", "pexpand", "pevol", "speedlaw"};
  return names;
}

std::vector<IdentityReport> run_suite(const std::string& name) {
  if (name == "oracle") return oracle_suite();
  if (name == "evolution") return evolution_suite();
  if (name == "identity") return identity_suite();
  if (name == "pexpand") return pexpand_suite();
  if (name == "pevol") return pevol_suite();
  if (name == "speedlaw") return speedlaw_suite();
  throw Error(ErrorKind::InvalidConfig, "unknown suite '" + name + "'");
}

}  // namespace gcf
