#include "gcf/speedlaw.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcf/error.hpp"

namespace gcf {

namespace {

void require_positive(double x) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "speed law argument must be > 0, got " << x;
    throw Error(ErrorKind::NonPositiveArgument, os.str());
  }
}

}  // namespace

SpeedLaw SpeedLaw::power(double a, double beta) {
  if (!std::isfinite(a) || !std::isfinite(beta) || !(a * beta > 0.0)) {
    std::ostringstream os;
    os << "power law a*x^beta needs a*beta > 0 (f' > 0), got a=" << a << " beta=" << beta;
    throw Error(ErrorKind::InvalidSpeedLaw, os.str());
  }
  return SpeedLaw(SpeedKind::PowerLaw, a, beta);
}

SpeedLaw SpeedLaw::exponential() { return SpeedLaw(SpeedKind::Exponential, 1.0, 1.0); }

bool SpeedLaw::is_expanding_form() const noexcept {
  return kind_ == SpeedKind::PowerLaw && a_ == -1.0 && beta_ < 0.0;
}

bool SpeedLaw::satisfies_harnack_hypotheses(int n) const noexcept {
  if (kind_ != SpeedKind::PowerLaw || n < 1) return false;
  if (a_ > 0.0 && beta_ > 0.0) return true;
  return a_ < 0.0 && beta_ < 0.0 && beta_ > -1.0 / n;
}

bool SpeedLaw::satisfies_expanding_hypotheses(int n) const noexcept {
  return is_expanding_form() && n >= 1 && beta_ > -1.0 / n;
}

SpeedDerivs SpeedLaw::eval(double x) const {
  require_positive(x);
  if (kind_ == SpeedKind::Exponential) {
    const double e = std::exp(x);
    return {e, e, e, e};
  }
  const double p = a_ * std::pow(x, beta_ - 3.0);
  // Powers share one pow call so that f, f', f'' and f''' are consistent.
  const double d3 = p * beta_ * (beta_ - 1.0) * (beta_ - 2.0);
  const double d2 = p * x * beta_ * (beta_ - 1.0);
  const double d1 = p * x * x * beta_;
  const double f = p * x * x * x;
  return {f, d1, d2, d3};
}

std::string SpeedLaw::describe() const {
  std::ostringstream os;
  if (kind_ == SpeedKind::Exponential) {
    os << "f(K)=exp(K)";
  } else {
    os << "f(K)=" << a_ << "*K^" << beta_;
  }
  return os.str();
}

SpeedDerivs eval_derivs(const SpeedLaw& law, double x) { return law.eval(x); }

double alpha_fn(const SpeedLaw& law, double x) {
  const SpeedDerivs d = law.eval(x);
  const double s = x * d.d2 / d.d1;
  return s * s - s - x * x * d.d3 / d.d1;
}

double beta_fn(const SpeedLaw& law, double x) {
  const SpeedDerivs d = law.eval(x);
  return x * d.d1 - x * d.f * d.d2 / d.d1 - d.f;
}

double gamma_fn(const SpeedLaw& law, double x) {
  const SpeedDerivs d = law.eval(x);
  return (1.0 + x * d.d2 / d.d1) * d.f / (x * d.d1) - 1.0;
}

double beta_prime_fn(const SpeedLaw& law, double x) {
  const SpeedDerivs d = law.eval(x);
  return d.f * alpha_fn(law, x) / x;
}

double beta_prime_fd(const SpeedLaw& law, double x, double step) {
  require_positive(x);
  require_positive(x - step);
  return (beta_fn(law, x + step) - beta_fn(law, x - step)) / (2.0 * step);
}

PowerLawIdentityReport check_power_law_identities(const SpeedLaw& law,
                                                  std::span<const double> sample_points) {
  PowerLawIdentityReport report;
  for (double x : sample_points) {
    require_positive(x);
    PowerLawIdentityPoint p;
    p.x = x;
    p.alpha = alpha_fn(law, x);
    p.beta = beta_fn(law, x);
    p.gamma = gamma_fn(law, x);
    const SpeedDerivs d = law.eval(x);
    p.gamma_residual = std::abs(p.gamma + p.beta / (x * d.d1));
    const double rhs = d.f * p.alpha / x;
    const double fd = beta_prime_fd(law, x, beta_fd_step(x));
    p.beta_prime_residual = std::abs(fd - rhs) / std::max(1.0, std::abs(rhs));

    report.max_abs_alpha = std::max(report.max_abs_alpha, std::abs(p.alpha));
    report.max_abs_beta = std::max(report.max_abs_beta, std::abs(p.beta));
    report.max_abs_gamma = std::max(report.max_abs_gamma, std::abs(p.gamma));
    report.max_gamma_residual = std::max(report.max_gamma_residual, p.gamma_residual);
    report.max_beta_prime_residual =
        std::max(report.max_beta_prime_residual, p.beta_prime_residual);
    report.points.push_back(p);
  }
  return report;
}

}  // namespace gcf
