#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gcf/artifacts.hpp"

namespace gcf {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verify_failed = 1;
inline constexpr int config = 2;
inline constexpr int non_convex = 3;
inline constexpr int hypothesis = 4;
}  // namespace exit_code

/// Outcome of one run or harnack invocation.
struct CommandResult {
  int exit_code = exit_code::ok;
  std::string message;
  RunArtifacts artifacts;
  double min_margin = std::numeric_limits<double>::quiet_NaN();
  double max_lhs = std::numeric_limits<double>::quiet_NaN();
  double max_abs_P = std::numeric_limits<double>::quiet_NaN();
  bool hypotheses_hold = false;
};

/// Flow only: trace.csv and meta.json.
CommandResult run_flow(const nlohmann::json& config, const std::filesystem::path& out_dir);

/// Flow plus Harnack monitor: trace.csv, harnack.csv, harnack_extra.csv, meta.json.
/// With enforce_hypotheses, a law outside the theorem's hypotheses exits 4
/// before any other validation.
CommandResult run_harnack(const nlohmann::json& config, const std::filesystem::path& out_dir,
                          bool enforce_hypotheses);

int cmd_run(const std::filesystem::path& config, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);
int cmd_harnack(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                bool enforce_hypotheses, std::ostream& out, std::ostream& err);
/// suite is one of suite_names() or "all"; writes report.csv.
int cmd_verify(const std::string& suite, const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err);
/// {"base": {config}, "tuples": [{"n": 1, "b": 0.5, "shape": "fourier"}, ...]}.
/// Each tuple runs in out_dir/tuple_<i>; GCF_THREADS caps the worker count.
int cmd_sweep(const std::filesystem::path& config, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);

/// gcf run|harnack|verify|sweep
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gcf
