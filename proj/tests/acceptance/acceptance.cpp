// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "gcf/cli.hpp"
#include "gcf/error.hpp"
#include "gcf/harnack.hpp"
#include "gcf/verify.hpp"

namespace fs = std::filesystem;
using namespace gcf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome suite_outcome(const std::string& name, const std::function<bool(const IdentityReport&)>& select = {}) {
  Outcome o{true, ""};
  std::size_t counted = 0;
  double worst = 0.0;
  for (const auto& r : run_suite(name)) {
    if (select && !select(r)) continue;
    ++counted;
    worst = std::max(worst, r.finest_residual());
    if (!r.pass) {
      o.pass = false;
      o.detail += " failed:" + r.id;
    }
  }
  if (counted == 0) o.pass = false;
  o.detail = fmt("%g reports, worst finest residual %.3g", static_cast<double>(counted), worst) + o.detail;
  return o;
}

Outcome sphere_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o = suite_outcome("oracle");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.pass = o.pass && secs <= 30.0;
  o.detail += fmt(", %.1f s", secs);
  return o;
}

Outcome equality_case() {
  Outcome o{true, ""};
  for (auto [n, b] : {std::pair{1, 0.5}, std::pair{2, 0.25}}) {
    FlowConfig c;
    c.n = n;
    c.grid_size = n == 1 ? 64 : 32;
    c.law = SpeedLaw::expanding(b);
    c.initial.type = InitialShape::SelfSimilar;
    c.initial.R0 = 1e-3;
    c.t_end = 1.0;
    c.output_interval = 0.01;
    const auto samples = monitor(run(c), c.law, 0.0);
    double lhs_rel = 0.0, P_rel = 0.0;
    for (const auto& s : samples) {
      for (std::size_t i = 0; i < s.u.size(); ++i) {
        lhs_rel = std::max(lhs_rel, std::abs(s.lhs[i]) / s.max_abs_dt_u);
        P_rel = std::max(P_rel, std::abs(s.P_trace[i] - s.bound[i]) / std::abs(s.P_trace[i]));
      }
    }
    o.pass = o.pass && lhs_rel <= 1e-4 && P_rel <= 1e-4 && !samples.empty();
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += fmt("n=%g: |lhs|/max|dt u| %.2g, |P - bound|/|P| %.2g", n, lhs_rel, P_rel);
  }
  return o;
}

Outcome inequality_property() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  Outcome o{true, ""};
  double worst_margin = INFINITY, worst_lhs = -INFINITY;
  for (int k = 0; k < 20; ++k) {
    FlowConfig c;
    c.n = 1;
    c.grid_size = 256;
    c.law = SpeedLaw::expanding(0.5);
    c.initial = random_convex_initial(rng, 1);
    c.t_end = 2.0;
    c.output_interval = 0.02;
    const FlowTrace tr = run(c);
    if (tr.reason != Termination::Completed) {
      o.pass = false;
      o.detail += " run " + std::to_string(k) + " stopped: " + tr.message;
      continue;
    }
    double max_P = 0.0, max_dt_u = 0.0, min_margin = INFINITY, max_lhs = -INFINITY;
    for (const auto& s : monitor(tr, c.law, 0.0)) {
      max_P = std::max(max_P, s.max_abs_P);
      max_dt_u = std::max(max_dt_u, s.max_abs_dt_u);
      min_margin = std::min(min_margin, s.min_margin);
      max_lhs = std::max(max_lhs, s.max_lhs);
    }
    worst_margin = std::min(worst_margin, min_margin / max_P);
    worst_lhs = std::max(worst_lhs, max_lhs / max_dt_u);
    if (min_margin < -1e-3 * max_P || max_lhs > 1e-3 * max_dt_u) o.pass = false;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.pass = o.pass && secs <= 300.0;
  o.detail = fmt("20 shapes: min margin/max|P| %.3g, max lhs/max|dt u| %.3g, %.1f s", worst_margin, worst_lhs, secs) +
             o.detail;
  return o;
}

// The nonzero control for the exponential law is a value, not a residual.
Outcome speed_law_identities() {
  return suite_outcome("speedlaw", [](const IdentityReport& r) { return r.id.find("nonzero") == std::string::npos; });
}

Outcome algebraic_expansion() {
  return suite_outcome("pexpand", [](const IdentityReport& r) {
    return r.id.starts_with("square_expansion") || r.id.starts_with("tensor_norm");
  });
}

Outcome p_evolution() {
  Outcome o = suite_outcome("pevol", [](const IdentityReport& r) { return r.has_order(); });
  return o;
}

Outcome geometric_identities() {
  Outcome o = suite_outcome("identity", [](const IdentityReport& r) { return !r.degenerate; });
  for (const auto& r : run_suite("identity")) {
    if (!r.degenerate && !(r.order >= 2.0)) {
      o.pass = false;
      o.detail += " order:" + r.id;
    }
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("gcf_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(root);
  const nlohmann::json cfg = {{"n", 1},
                              {"speed", {{"a", -1}, {"beta", -0.5}}},
                              {"grid", {{"N", 128}}},
                              {"initial", {{"type", "fourier"}, {"R0", 1}, {"modes", {{2, 0.03}, {5, 0.005, 1.0}}}}},
                              {"time", {{"t_end", 0.5}}},
                              {"output", {{"interval", 0.05}}}};
  std::ofstream(root / "config.json") << cfg.dump(2);
  std::ostringstream out, err;
  Outcome o{true, ""};
  for (const char* run_dir : {"a", "b"}) {
    if (cmd_harnack(root / "config.json", root / run_dir, false, out, err) != exit_code::ok) {
      o.pass = false;
      o.detail = "harnack failed: " + err.str();
    }
  }
  for (const char* f : {"trace.csv", "harnack.csv", "harnack_extra.csv"}) {
    const std::string a = slurp(root / "a" / f);
    if (a.empty() || a != slurp(root / "b" / f)) {
      o.pass = false;
      o.detail += std::string(" differs:") + f;
    }
  }
  if (o.pass) o.detail = "trace.csv, harnack.csv, harnack_extra.csv identical";
  std::error_code ec;
  fs::remove_all(root, ec);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"sphere oracle", sphere_oracle},
      {"Harnack equality on self-similar solutions", equality_case},
      {"Harnack inequality on perturbed circles", inequality_property},
      {"evolution equation residuals", [] { return suite_outcome("evolution"); }},
      {"speed law identities", speed_law_identities},
      {"algebraic expansion of the Harnack trace", algebraic_expansion},
      {"evolution of the Harnack trace", p_evolution},
      {"geometric identities", geometric_identities},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
