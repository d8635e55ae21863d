#include "gcf/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gcf/error.hpp"

namespace gcf {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::InvalidConfig, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string trace_csv(const FlowTrace& trace) {
  std::string out = trace.n == 1 ? "t,node_index,angle,h,r,K,H\n" : "t,node_index,angle,h,r1,r2,K,H\n";
  for (const auto& s : trace.samples) {
    const GeometryState g = derive_state(s.grid);
    const std::string t = format_number(s.t);
    for (std::size_t i = 0; i < g.size(); ++i) {
      out += t;
      out += ',' + std::to_string(i);
      out += ',' + format_number(g.angle[i]);
      out += ',' + format_number(g.support[i]);
      out += ',' + format_number(g.r1.v[i]);
      if (trace.n == 2) out += ',' + format_number(g.r2.v[i]);
      out += ',' + format_number(g.K[i]);
      out += ',' + format_number(g.H[i]);
      out += '\n';
    }
  }
  return out;
}

std::string harnack_csv(std::span<const HarnackSample> samples) {
  std::string out = "t,node_index,u,dt_u_spatial,dt_u_fd,grad_sq_h,lhs_eq12,P_trace,bound_eq316,margin\n";
  for (const auto& s : samples) {
    const std::string t = format_number(s.t);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      out += t;
      out += ',' + std::to_string(i);
      for (double v : {s.u[i], s.dt_u_spatial[i], s.dt_u_fd[i], s.grad_sq_h[i], s.lhs[i], s.P_trace[i],
                       s.bound[i], s.margin[i]}) {
        out += ',' + format_number(v);
      }
      out += '\n';
    }
  }
  return out;
}

std::string harnack_extra_csv(std::span<const HarnackSample> samples) {
  std::string out = "t,tau,node_index,grad_sq_g,speed_form\n";
  for (const auto& s : samples) {
    const std::string t = format_number(s.t) + ',' + format_number(s.tau);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      out += t + ',' + std::to_string(i) + ',' + format_number(s.grad_sq_g[i]) + ',' +
             format_number(s.f_form[i]) + '\n';
    }
  }
  return out;
}

std::string report_csv(std::span<const IdentityReport> reports) {
  std::string out = "identity,resolution,residual,order,pass,size,tolerance,degenerate,note\n";
  for (const auto& r : reports) {
    for (const auto& l : r.levels) {
      out += csv_field(r.id);
      out += ',' + format_number(l.step);
      out += ',' + format_number(l.residual);
      out += ',' + format_number(r.order);
      out += r.pass ? ",true" : ",false";
      out += ',' + std::to_string(l.size);
      out += ',' + format_number(r.tolerance);
      out += r.degenerate ? ",true" : ",false";
      out += ',' + csv_field(r.note);
      out += '\n';
    }
  }
  return out;
}

}  // namespace gcf
