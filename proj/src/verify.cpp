#include "gcf/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gcf/error.hpp"
#include "gcf/stencil.hpp"

namespace gcf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

IdentityReport named(std::string id) {
  IdentityReport r;
  r.id = std::move(id);
  return r;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Solves min |A c - b| through the normal equations with partial pivoting.
// Callers scale their coordinates so A^T A stays well conditioned.
std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                  const std::vector<double>& rhs) {
  const std::size_t m = rows.front().size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) a[i][j] += rows[r][i] * rows[r][j];
      a[i][m] += rows[r][i] * rhs[r];
    }
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> x(m);
  for (std::size_t i = m; i-- > 0;) {
    double s = a[i][m];
    for (std::size_t j = i + 1; j < m; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

void require_stride(const FlowTrace& trace, std::size_t index, std::size_t stride) {
  if (trace.samples.size() < 3 || stride == 0 || index < stride ||
      index + stride >= trace.samples.size()) {
    std::ostringstream os;
    os << "need stored states at " << index << " +- " << stride << ", trace has "
       << trace.samples.size();
    throw Error(ErrorKind::InsufficientTrace, os.str());
  }
}

std::size_t anchor_index(const FlowTrace& trace, const TimeLadder& ladder) {
  if (trace.samples.size() < 3) {
    std::ostringstream os;
    os << "need >= 3 stored states, got " << trace.samples.size();
    throw Error(ErrorKind::InsufficientTrace, os.str());
  }
  return ladder.anchor == 0 ? trace.samples.size() / 2 : ladder.anchor;
}

double central(const FlowTrace& trace, std::size_t index, std::size_t stride, double qm, double qc,
               double qp) {
  return three_point_derivative(trace.samples[index - stride].t, trace.samples[index].t,
                                trace.samples[index + stride].t, qm, qc, qp);
}

double half_span(const FlowTrace& trace, std::size_t index, std::size_t stride) {
  return 0.5 * (trace.samples[index + stride].t - trace.samples[index - stride].t);
}

void finish_time_report(IdentityReport& r, const TimeLadder& ladder) {
  r.order = convergence_order(r.levels);
  r.tolerance = ladder.tolerance;
  const bool small = r.finest_residual() <= ladder.tolerance;
  if (r.has_order()) {
    r.pass = small && r.order >= ladder.min_order && r.order <= ladder.max_order;
  } else {
    r.pass = small;
  }
  if (!r.pass) {
    std::ostringstream os;
    os << "finest residual " << r.finest_residual() << " (tol " << ladder.tolerance << "), order "
       << r.order;
    r.note = os.str();
  }
}

// Values of u at the nodes of a state, as a plain field.
std::vector<double> speed_values(const GeometryState& s, const SpeedLaw& law) {
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f[i] = law.eval(s.K[i]).f;
  return f;
}

std::vector<double> mean_curvature_d1(const GeometryState& s) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = -s.r1.d1[i] / (s.r1.v[i] * s.r1.v[i]);
    if (s.n == 2) out[i] -= s.r2.d1[i] / (s.r2.v[i] * s.r2.v[i]);
  }
  return out;
}

}  // namespace

double sphere_radius_exact(double R0, double t, int n, double b) {
  if (!(b > 0.0) || !(n * b < 1.0)) {
    std::ostringstream os;
    os << "need 0 < b < 1/n, got b=" << b << " n=" << n;
    throw Error(ErrorKind::BadExponent, os.str());
  }
  if (!(R0 >= 0.0) || !(t >= 0.0)) {
    std::ostringstream os;
    os << "need R0 >= 0 and t >= 0, got R0=" << R0 << " t=" << t;
    throw Error(ErrorKind::NonPositiveArgument, os.str());
  }
  if (t == 0.0) return R0;
  const double e = 1.0 - n * b;
  return std::pow(std::pow(R0, e) + e * t, 1.0 / e);
}

double IdentityReport::finest_residual() const noexcept {
  if (levels.empty()) return kNaN;
  auto it = std::min_element(levels.begin(), levels.end(),
                             [](const ResidualLevel& a, const ResidualLevel& b) { return a.step < b.step; });
  return it->residual;
}

double convergence_order(std::span<const ResidualLevel> levels) {
  if (levels.size() < 3) return kNaN;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& l : levels) {
    if (!(l.residual > 0.0) || !(l.step > 0.0)) return kNaN;
    const double x = std::log(l.step);
    const double y = std::log(l.residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(levels.size());
  const double denom = k * sxx - sx * sx;
  if (!(std::abs(denom) > 1e-14)) return kNaN;
  return (k * sxy - sx * sy) / denom;
}

const char* identity_id(EvolutionQuantity q) noexcept {
  switch (q) {
    case EvolutionQuantity::Metric: return "metric_evolution";
    case EvolutionQuantity::SecondFundamentalForm: return "sff_evolution";
    case EvolutionQuantity::Speed: return "speed_evolution";
    case EvolutionQuantity::MeanCurvature: return "mean_curvature_evolution";
  }
  return "unknown";
}

double evolution_residual(const FlowTrace& trace, const SpeedLaw& law, EvolutionQuantity which,
                          std::size_t index, std::size_t stride) {
  require_stride(trace, index, stride);
  const GeometryState sm = derive_state(trace.samples[index - stride].grid);
  const GeometryState sc = derive_state(trace.samples[index].grid);
  const GeometryState sp = derive_state(trace.samples[index + stride].grid);
  const SpeedField sf = speed_field(sc, law);
  const ComponentDerivs cd = component_derivs(sc);
  const std::size_t count = sc.size();
  const bool two = sc.n == 2;
  auto dt = [&](const std::vector<double>& m, const std::vector<double>& c,
                const std::vector<double>& p, std::size_t i) {
    return central(trace, index, stride, m[i], c[i], p[i]);
  };

  // Grid points drift along the hypersurface with W = -f_1 / r1; the
  // derivative at a fixed angle is the material one plus the Lie derivative.
  std::vector<double> w(count), w1(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = sc.r1.v[i];
    w[i] = -sf.f.d1[i] / a;
    w1[i] = -(sf.f.d2[i] / a - sf.f.d1[i] * sc.r1.d1[i] / (a * a));
  }

  double res = 0.0;
  switch (which) {
    case EvolutionQuantity::Metric: {
      for (std::size_t i = 0; i < count; ++i) {
        const double f = sf.f.v[i];
        const double lie11 = w[i] * cd.g11[i] + 2.0 * sc.g11[i] * w1[i];
        res = std::max(res, std::abs(dt(sm.g11, sc.g11, sp.g11, i) - lie11 + 2.0 * f * sc.h11[i]));
        if (two) {
          const double lie22 = w[i] * cd.g22[i];
          res = std::max(res, std::abs(dt(sm.g22, sc.g22, sp.g22, i) - lie22 + 2.0 * f * sc.h22[i]));
        }
      }
      break;
    }
    case EvolutionQuantity::SecondFundamentalForm: {
      const CoordHessian hess = covariant_hessian_coords(sc, sf.f);
      for (std::size_t i = 0; i < count; ++i) {
        const double f = sf.f.v[i];
        const double lie11 = w[i] * cd.h11[i] + 2.0 * sc.h11[i] * w1[i];
        const double rhs11 = hess.c11[i] - f * sc.h11[i] * sc.h11[i] / sc.g11[i];
        res = std::max(res, std::abs(dt(sm.h11, sc.h11, sp.h11, i) - lie11 - rhs11));
        if (two) {
          const double lie22 = w[i] * cd.h22[i];
          const double rhs22 = hess.c22[i] - f * sc.h22[i] * sc.h22[i] / sc.g22[i];
          res = std::max(res, std::abs(dt(sm.h22, sc.h22, sp.h22, i) - lie22 - rhs22));
        }
      }
      break;
    }
    case EvolutionQuantity::Speed: {
      const auto fm = speed_values(sm, law);
      const auto fc = speed_values(sc, law);
      const auto fp = speed_values(sp, law);
      const auto rhs = dt_f_spatial(sc, law);
      for (std::size_t i = 0; i < count; ++i) {
        res = std::max(res, std::abs(dt(fm, fc, fp, i) - w[i] * sf.f.d1[i] - rhs[i]));
      }
      break;
    }
    case EvolutionQuantity::MeanCurvature: {
      const auto lap = laplace_beltrami(sc, sf.f);
      const auto sff = sff_norm_sq(sc);
      const auto dH = mean_curvature_d1(sc);
      for (std::size_t i = 0; i < count; ++i) {
        const double rhs = lap[i] + sf.f.v[i] * sff[i];
        res = std::max(res, std::abs(dt(sm.H, sc.H, sp.H, i) - w[i] * dH[i] - rhs));
      }
      break;
    }
  }
  return res;
}

std::vector<IdentityReport> check_evolution(const FlowTrace& trace, const SpeedLaw& law,
                                            std::span<const EvolutionQuantity> which,
                                            const TimeLadder& ladder) {
  const std::size_t anchor = anchor_index(trace, ladder);
  std::vector<IdentityReport> out;
  for (EvolutionQuantity q : which) {
    IdentityReport r;
    r.id = identity_id(q);
    for (std::size_t stride : ladder.strides) {
      ResidualLevel l;
      l.step = (require_stride(trace, anchor, stride), half_span(trace, anchor, stride));
      l.size = trace.samples[anchor].grid.size();
      l.residual = evolution_residual(trace, law, q, anchor, stride);
      r.levels.push_back(l);
    }
    finish_time_report(r, ladder);
    out.push_back(std::move(r));
  }
  return out;
}

IdentityResiduals identity_residuals(const SupportGrid& grid) {
  const GeometryState s = derive_state(grid);
  const std::size_t count = s.size();
  const double dx = s.spacing;
  const Topology topo = s.topology;
  IdentityResiduals out;

  // Embedding coordinates: (x, y) for n=1, (rho, z) for n=2. Across a pole
  // rho changes sign and z does not.
  std::vector<double> x(count), y(count), nx(count), ny(count);
  for (std::size_t i = 0; i < count; ++i) {
    x[i] = s.position[i][0];
    y[i] = s.position[i][1];
    nx[i] = s.normal[i][0];
    ny[i] = s.normal[i][1];
  }
  const Parity px = s.n == 1 ? Parity::Even : Parity::Odd;
  const auto x1 = diff1(x, dx, topo, px);
  const auto x2 = diff2(x, dx, topo, px);
  const auto y1 = diff1(y, dx, topo);
  const auto y2 = diff2(y, dx, topo);
  const auto nx1 = diff1(nx, dx, topo, px);
  const auto ny1 = diff1(ny, dx, topo);

  std::vector<double> g11e(count);
  for (std::size_t i = 0; i < count; ++i) g11e[i] = x1[i] * x1[i] + y1[i] * y1[i];
  const auto g11e_d1 = diff1(g11e, dx, topo);

  std::vector<double> div_field(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double gamma111 = (x1[i] * x2[i] + y1[i] * y2[i]) / g11e[i];
    // nabla_1 nabla_1 F + h_11 nu
    const double gx = x2[i] - gamma111 * x1[i] + s.h11[i] * nx[i];
    const double gy = y2[i] - gamma111 * y1[i] + s.h11[i] * ny[i];
    out.gauss_formula = std::max(out.gauss_formula, std::hypot(gx, gy));
    // nu_1 - h_11 g^11 F_1
    const double k11 = s.h11[i] / s.g11[i];
    out.weingarten = std::max(out.weingarten, std::hypot(nx1[i] - k11 * x1[i], ny1[i] - k11 * y1[i]));
    if (s.n == 2) {
      const double rho = x[i];
      // nabla_2 nabla_2 F + h_22 nu, with F_22 = (-rho, 0, 0) and Gamma^1_22 = -rho rho' / g11.
      const double gamma122 = -rho * x1[i] / g11e[i];
      const double g2x = -rho - gamma122 * x1[i] + s.h22[i] * nx[i];
      const double g2z = -gamma122 * y1[i] + s.h22[i] * ny[i];
      out.gauss_formula = std::max(out.gauss_formula, std::hypot(g2x, g2z));
      // nu_2 = (0, nu_rho, 0) against h_22 g^22 F_2 = h_22 g^22 (0, rho, 0).
      out.weingarten = std::max(out.weingarten, std::abs(nx[i] - s.h22[i] / s.g22[i] * rho));
    }
  }

  // Divergence of K h^{-1}, with metric and second fundamental form taken
  // from the embedding rather than the support function.
  std::vector<double> v11(count), v22(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double h11e = -(x2[i] * nx[i] + y2[i] * ny[i]);
    if (s.n == 1) {
      const double K = h11e / g11e[i];
      v11[i] = K / h11e;
    } else {
      const double rho = x[i];
      const double h22e = rho * nx[i];
      const double K = h11e * h22e / (g11e[i] * rho * rho);
      v11[i] = K / h11e;
      v22[i] = K / h22e;
    }
  }
  const auto v11_d1 = diff1(v11, dx, topo);
  for (std::size_t i = 0; i < count; ++i) {
    const double gamma111 = g11e_d1[i] / (2.0 * g11e[i]);
    double div = v11_d1[i] + 2.0 * gamma111 * v11[i];
    if (s.n == 2) {
      const double rho = x[i];
      const double gamma212 = x1[i] / rho;
      const double gamma122 = -rho * x1[i] / g11e[i];
      div += gamma212 * v11[i] + gamma122 * v22[i];
    }
    out.divergence = std::max(out.divergence, std::abs(div));
  }
  return out;
}

std::vector<IdentityReport> check_identities(std::span<const SupportGrid> ladder, double min_order,
                                             double round_off_floor) {
  if (ladder.empty()) throw Error(ErrorKind::InvalidGrid, "empty identity ladder");
  const int n = ladder.front().n();
  IdentityReport gauss = named("gauss_formula");
  IdentityReport wein = named("weingarten");
  IdentityReport div = named("divergence");
  for (const SupportGrid& g : ladder) {
    const IdentityResiduals r = identity_residuals(g);
    gauss.levels.push_back({g.spacing(), g.size(), r.gauss_formula});
    wein.levels.push_back({g.spacing(), g.size(), r.weingarten});
    div.levels.push_back({g.spacing(), g.size(), r.divergence});
  }
  std::vector<IdentityReport> out{gauss, wein, div};
  for (auto& r : out) {
    r.order = convergence_order(r.levels);
    r.tolerance = round_off_floor;
    const bool at_floor = std::all_of(r.levels.begin(), r.levels.end(),
                                      [&](const ResidualLevel& l) { return l.residual <= round_off_floor; });
    if (at_floor) {
      r.pass = true;
      r.note = "exact to rounding";
    } else {
      r.pass = r.has_order() && r.order >= min_order;
      if (!r.pass) {
        std::ostringstream os;
        os << "order " << r.order << " < " << min_order;
        r.note = os.str();
      }
    }
  }
  if (n == 1) {
    out[2].degenerate = true;
    out[2].note = "one-dimensional: K h^{-1} = r^-2 is divergence free by the metric alone";
  }
  return out;
}

std::vector<IdentityReport> check_P_expansion(const GeometryState& state, const SpeedLaw& law,
                                              double tolerance) {
  const SpeedField sf = speed_field(state, law);
  const auto box = box_op(state, sf.f);
  const auto grad = grad_norm_sq_h(state, sf.f);
  const auto ptrace = P_trace(state, law);
  const std::size_t count = state.size();

  double scale = 1.0;
  for (double p : ptrace) scale = std::max(scale, p * p);

  IdentityReport square = named("square_expansion");
  double res = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double f = sf.f.v[i];
    const double H = state.H[i];
    const double q = grad[i] / (sf.fp[i] * state.K[i]);
    const double expansion = box[i] * box[i] + q * q + f * f * H * H - 2.0 * box[i] * q +
                             2.0 * H * f * box[i] - 2.0 * H * f * q;
    res = std::max(res, std::abs(expansion - ptrace[i] * ptrace[i]) / scale);
  }
  square.levels.push_back({state.spacing, count, res});
  square.tolerance = tolerance;
  square.pass = res <= tolerance;
  std::vector<IdentityReport> out{square};

  // Contracting the tensor must reproduce the directly computed trace.
  {
    const auto contracted = P_tensor_trace(state, P_tensor(state, law));
    double trace_scale = 1.0;
    for (double p : ptrace) trace_scale = std::max(trace_scale, std::abs(p));
    double res_contract = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      res_contract = std::max(res_contract, std::abs(contracted[i] - ptrace[i]) / trace_scale);
    }
    IdentityReport contract = named("tensor_trace");
    contract.levels.push_back({state.spacing, count, res_contract});
    contract.tolerance = tolerance;
    contract.pass = res_contract <= tolerance;
    out.push_back(contract);
  }

  if (state.n == 1) {
    const PTensor pt = P_tensor(state, law);
    const auto norm = P_tensor_norm_sq_h(state, pt);
    const CoordHessian hess = covariant_hessian_coords(state, sf.f);
    const auto lap = laplace_beltrami(state, sf.f);
    const auto sff = sff_norm_sq(state);
    const SffGradient dh = sff_gradient(state);
    const auto dH = mean_curvature_d1(state);
    double res_terms = 0.0;
    double res_trace = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double f = sf.f.v[i];
      const double f1 = sf.f.d1[i];
      const double h = state.h11[i];
      const double hess_h = hess.c11[i] / h;
      const double terms = hess_h * hess_h + (f1 * dh.d1_h11[i]) * (f1 * dh.d1_h11[i]) / (h * h * h * h) +
                           f * f * sff[i] - 2.0 * dh.d1_h11[i] * f1 * hess.c11[i] / (h * h * h) +
                           2.0 * f * lap[i] - 2.0 * f * dH[i] * f1 / h;
      res_terms = std::max(res_terms, std::abs(terms - norm[i]) / scale);
      res_trace = std::max(res_trace, std::abs(norm[i] - ptrace[i] * ptrace[i]) / scale);
    }
    IdentityReport terms = named("tensor_norm_terms");
    terms.levels.push_back({state.spacing, count, res_terms});
    terms.tolerance = tolerance;
    terms.pass = res_terms <= tolerance;
    IdentityReport tr = named("tensor_norm_trace");
    tr.levels.push_back({state.spacing, count, res_trace});
    tr.tolerance = tolerance;
    tr.pass = res_trace <= tolerance;
    out.push_back(terms);
    out.push_back(tr);
  }
  for (auto& r : out) {
    if (!r.pass) {
      std::ostringstream os;
      os << "relative residual " << r.levels.front().residual << " > " << tolerance;
      r.note = os.str();
    }
  }
  return out;
}

PEvolutionSides P_evolution_sides(const FlowTrace& trace, const SpeedLaw& law, std::size_t index,
                                  std::size_t stride) {
  require_stride(trace, index, stride);
  const GeometryState sm = derive_state(trace.samples[index - stride].grid);
  const GeometryState sc = derive_state(trace.samples[index].grid);
  const GeometryState sp = derive_state(trace.samples[index + stride].grid);
  const auto pm = P_trace(sm, law);
  const auto pc = P_trace(sc, law);
  const auto pp = P_trace(sp, law);
  const Jet pj = field_jet(sc, pc);
  const SpeedField sf = speed_field(sc, law);
  const auto box_p = box_op(sc, pj);
  const auto dot = grad_dot_h(sc, sf.f, pj);
  const auto norm = P_tensor_norm_sq_h(sc, P_tensor(sc, law));
  const auto grad = grad_norm_sq_h(sc, sf.f);
  // beta vanishes identically for power laws, so the last group is zero there.
  const bool power = law.kind() == SpeedKind::PowerLaw;

  PEvolutionSides out;
  out.t = trace.samples[index].t;
  const std::size_t count = sc.size();
  out.lhs.resize(count);
  out.rhs.resize(count);
  out.beta_group.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double w = -sf.f.d1[i] / sc.r1.v[i];
    out.lhs[i] = central(trace, index, stride, pm[i], pc[i], pp[i]) - w * pj.d1[i];
    const double K = sc.K[i];
    const double f = sf.f.v[i];
    const double fp = sf.fp[i];
    const double c = 1.0 + sf.fpp[i] * K / fp;
    if (!power) {
      out.beta_group[i] =
          (sc.H[i] * beta_fn(law, K) - beta_prime_fn(law, K) / (f * fp) * grad[i]) * pc[i];
    }
    out.rhs[i] = fp * K * box_p[i] + 2.0 * c * dot[i] + norm[i] + c * pc[i] * pc[i] + out.beta_group[i];
  }
  return out;
}

IdentityReport check_P_evolution(const FlowTrace& trace, const SpeedLaw& law, const TimeLadder& ladder) {
  const std::size_t anchor = anchor_index(trace, ladder);
  IdentityReport r;
  r.id = "harnack_evolution";
  for (std::size_t stride : ladder.strides) {
    const PEvolutionSides sides = P_evolution_sides(trace, law, anchor, stride);
    const double scale = std::max(max_abs(sides.rhs), 1e-300);
    double res = 0.0;
    for (std::size_t i = 0; i < sides.lhs.size(); ++i) {
      res = std::max(res, std::abs(sides.lhs[i] - sides.rhs[i]) / scale);
    }
    r.levels.push_back({half_span(trace, anchor, stride), sides.lhs.size(), res});
  }
  finish_time_report(r, ladder);
  return r;
}

namespace {

struct NodePoint {
  std::array<double, 3> p;
  std::size_t node;
};

// Axisymmetric surface point of node k (possibly beyond a pole) at longitude lambda.
NodePoint surface_point(const GeometryState& s, long k, double lambda) {
  const long m = static_cast<long>(s.size());
  std::size_t node;
  if (k < 0) {
    node = static_cast<std::size_t>(-k - 1);
    lambda += std::numbers::pi;
  } else if (k >= m) {
    node = static_cast<std::size_t>(2 * m - 1 - k);
    lambda += std::numbers::pi;
  } else {
    node = static_cast<std::size_t>(k);
  }
  const double rho = s.position[node][0];
  const double z = s.position[node][1];
  return {{rho * std::cos(lambda), rho * std::sin(lambda), z}, node};
}

}  // namespace

OracleHessian hessian_oracle(const SupportGrid& grid, std::span<const double> u) {
  const GeometryState s = derive_state(grid);
  const std::size_t count = s.size();
  if (u.size() != count) throw Error(ErrorKind::InvalidGrid, "field size does not match the grid");
  OracleHessian out;
  out.e11.resize(count);
  out.grad1.resize(count);
  if (s.n == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      const double tx = -s.normal[i][1];
      const double ty = s.normal[i][0];
      const double scale = s.r1.v[i] * s.spacing;
      std::vector<std::vector<double>> rows;
      std::vector<double> rhs;
      for (long d = -2; d <= 2; ++d) {
        const std::size_t j = static_cast<std::size_t>((static_cast<long>(i) + d + static_cast<long>(count)) %
                                                       static_cast<long>(count));
        const double dxp = s.position[j][0] - s.position[i][0];
        const double dyp = s.position[j][1] - s.position[i][1];
        const double q = (dxp * tx + dyp * ty) / scale;
        rows.push_back({1.0, q, 0.5 * q * q});
        rhs.push_back(u[j]);
      }
      const auto c = least_squares(rows, rhs);
      out.grad1[i] = c[1] / scale;
      out.e11[i] = c[2] / (scale * scale);
    }
    return out;
  }

  out.e22.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double phi = s.angle[i];
    const std::array<double, 3> e1{std::cos(phi), 0.0, -std::sin(phi)};
    const std::array<double, 3> e2{0.0, 1.0, 0.0};
    const double rho = s.position[i][0];
    const double scale = s.r1.v[i] * s.spacing;
    const double dlambda = std::min(std::numbers::pi / 2.0, std::asin(std::min(1.0, scale / rho)));
    const NodePoint origin = surface_point(s, static_cast<long>(i), 0.0);
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (long d = -1; d <= 1; ++d) {
      for (double lam : {-dlambda, 0.0, dlambda}) {
        const NodePoint q = surface_point(s, static_cast<long>(i) + d, lam);
        std::array<double, 3> v{q.p[0] - origin.p[0], q.p[1] - origin.p[1], q.p[2] - origin.p[2]};
        const double a = (v[0] * e1[0] + v[1] * e1[1] + v[2] * e1[2]) / scale;
        const double b = (v[0] * e2[0] + v[1] * e2[1] + v[2] * e2[2]) / scale;
        rows.push_back({1.0, a, b, 0.5 * a * a, a * b, 0.5 * b * b});
        rhs.push_back(u[q.node]);
      }
    }
    const auto c = least_squares(rows, rhs);
    out.grad1[i] = c[1] / scale;
    out.e11[i] = c[3] / (scale * scale);
    out.e22[i] = c[5] / (scale * scale);
  }
  return out;
}

PTensorOracle P_tensor_oracle(const SupportGrid& grid, const SpeedLaw& law) {
  if (grid.n() != 1) throw Error(ErrorKind::InvalidGrid, "P tensor oracle is implemented for curves only");
  const GeometryState s = derive_state(grid);
  const std::size_t count = s.size();
  PTensorOracle out;
  out.kappa.resize(count);
  // Curvature from the height of neighbours over the tangent line.
  for (std::size_t i = 0; i < count; ++i) {
    const double tx = -s.normal[i][1];
    const double ty = s.normal[i][0];
    const double scale = s.r1.v[i] * s.spacing;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (long d = -2; d <= 2; ++d) {
      if (d == 0) continue;
      const std::size_t j = static_cast<std::size_t>((static_cast<long>(i) + d + static_cast<long>(count)) %
                                                     static_cast<long>(count));
      const double dxp = s.position[j][0] - s.position[i][0];
      const double dyp = s.position[j][1] - s.position[i][1];
      const double q = (dxp * tx + dyp * ty) / scale;
      const double w = (dxp * s.normal[i][0] + dyp * s.normal[i][1]) / scale;
      rows.push_back({q * q, q * q * q, q * q * q * q});
      rhs.push_back(w);
    }
    const auto c = least_squares(rows, rhs);
    out.kappa[i] = -2.0 * c[0] / scale;
  }
  std::vector<double> f(count);
  for (std::size_t i = 0; i < count; ++i) f[i] = law.eval(out.kappa[i]).f;
  const OracleHessian hf = hessian_oracle(grid, f);
  const OracleHessian hk = hessian_oracle(grid, out.kappa);
  out.kappa_s = hk.grad1;
  out.p_frame.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double k = out.kappa[i];
    out.p_frame[i] = hf.e11[i] - out.kappa_s[i] / k * hf.grad1[i] + f[i] * k * k;
  }
  return out;
}

InitialSpec random_convex_initial(std::mt19937_64& rng, int n, double R0, int max_mode,
                                  double max_amplitude) {
  std::uniform_int_distribution<int> mode_count(1, 3);
  std::uniform_int_distribution<int> mode(2, std::max(2, max_mode));
  std::uniform_real_distribution<double> amp(-max_amplitude * R0, max_amplitude * R0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  InitialSpec spec;
  spec.type = InitialShape::Fourier;
  spec.R0 = R0;
  const int count = mode_count(rng);
  double weight = 0.0;
  for (int i = 0; i < count; ++i) {
    FourierMode m;
    m.k = mode(rng);
    m.amplitude = amp(rng);
    m.phase = n == 1 ? phase(rng) : 0.0;
    // Bound on the change of each curvature radius caused by this mode.
    const double k = m.k;
    weight += (n == 1 ? k * k - 1.0 : k * k + k) * std::abs(m.amplitude);
    spec.modes.push_back(m);
  }
  if (weight > 0.5 * R0) {
    for (auto& m : spec.modes) m.amplitude *= 0.5 * R0 / weight;
  }
  return spec;
}

}  // namespace gcf
