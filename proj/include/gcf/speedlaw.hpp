#pragma once

#include <span>
#include <string>
#include <vector>

namespace gcf {

enum class SpeedKind { PowerLaw, Exponential };

/// f and its first three derivatives at one point.
struct SpeedDerivs {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Speed function f(K) of the flow dF/dt = -f(K) nu.
///
/// PowerLaw is f(x) = a x^beta with a*beta > 0 so that f' > 0 on (0, inf).
/// The expanding flow dF/dt = K^{-b} nu is the PowerLaw with a = -1 and
/// beta = -b. Exponential is f(x) = e^x, kept as a law for which the
/// auxiliary functions alpha, beta, gamma do not vanish.
class SpeedLaw {
 public:
  /// Throws InvalidSpeedLaw unless a*beta > 0 and both are finite.
  static SpeedLaw power(double a, double beta);
  static SpeedLaw exponential();
  /// a = -1, beta = -b.
  static SpeedLaw expanding(double b) { return power(-1.0, -b); }

  SpeedKind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double beta() const noexcept { return beta_; }

  /// Exponent b of dF/dt = K^{-b} nu when the law has that form (a = -1).
  double expanding_exponent() const noexcept { return -beta_; }
  bool is_expanding_form() const noexcept;

  /// Theorem-level hypotheses for the lower bound on the Harnack trace:
  /// a > 0, beta > 0, or a < 0, -1/n < beta < 0.
  bool satisfies_harnack_hypotheses(int n) const noexcept;
  /// a = -1 and 0 < b < 1/n with b = -beta.
  bool satisfies_expanding_hypotheses(int n) const noexcept;

  SpeedDerivs eval(double x) const;

  std::string describe() const;

 private:
  SpeedLaw(SpeedKind kind, double a, double beta) : kind_(kind), a_(a), beta_(beta) {}

  SpeedKind kind_;
  double a_;
  double beta_;
};

/// Exact derivatives (f, f', f'', f''') at x > 0. Throws NonPositiveArgument.
SpeedDerivs eval_derivs(const SpeedLaw& law, double x);

// alpha(x) = (x f''/f')^2 - x f''/f' - x^2 f'''/f'
double alpha_fn(const SpeedLaw& law, double x);
// beta(x) = x f' - x f f''/f' - f
double beta_fn(const SpeedLaw& law, double x);
// gamma(x) = (1 + x f''/f') f/(x f') - 1
double gamma_fn(const SpeedLaw& law, double x);

/// Derivative of beta(x) via the closed-form relation beta' = f alpha / x.
double beta_prime_fn(const SpeedLaw& law, double x);

struct PowerLawIdentityPoint {
  double x = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  /// |gamma + beta/(x f')|
  double gamma_residual = 0.0;
  /// |beta'_fd - f alpha/x| / max(1, |f alpha/x|)
  double beta_prime_residual = 0.0;
};

struct PowerLawIdentityReport {
  std::vector<PowerLawIdentityPoint> points;
  double max_abs_alpha = 0.0;
  double max_abs_beta = 0.0;
  double max_abs_gamma = 0.0;
  double max_gamma_residual = 0.0;
  double max_beta_prime_residual = 0.0;
};

/// Step used for the central difference of beta at x.
inline double beta_fd_step(double x) { return 1e-5 * (x > 1.0 ? x : 1.0); }

/// Central difference of beta(x) with an explicit step.
double beta_prime_fd(const SpeedLaw& law, double x, double step);

/// Evaluates the gamma/beta and beta'/alpha cross-identities at each point.
PowerLawIdentityReport check_power_law_identities(const SpeedLaw& law,
                                                  std::span<const double> sample_points);

}  // namespace gcf
