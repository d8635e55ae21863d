#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gcf/flow.hpp"
#include "gcf/harnack.hpp"
#include "gcf/verify.hpp"

namespace gcf {

/// Paths of everything a command wrote into its output directory.
struct RunArtifacts {
  std::filesystem::path out_dir;
  std::filesystem::path trace_file;
  std::filesystem::path harnack_file;
  std::filesystem::path report_file;
  std::filesystem::path meta_file;
  nlohmann::json meta;
};

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// RFC-4180 field quoting (only when needed).
std::string csv_field(std::string_view s);

/// Writes to a temporary sibling and renames it over path.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string trace_csv(const FlowTrace& trace);

/// t, node_index, u, dt_u_spatial, dt_u_fd, grad_sq_h, lhs_eq12, P_trace, bound_eq316, margin
std::string harnack_csv(std::span<const HarnackSample> samples);

/// Diagnostics outside the fixed harnack.csv layout: g-norm gradient and the
/// speed form of the inequality.
std::string harnack_extra_csv(std::span<const HarnackSample> samples);

/// identity, resolution, residual, order, pass (plus size, tolerance, degenerate, note).
std::string report_csv(std::span<const IdentityReport> reports);

}  // namespace gcf
