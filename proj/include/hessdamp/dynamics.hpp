#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hessdamp/problem.hpp"

namespace hessdamp {

/// Time-dependent coefficient with optional analytic derivatives. Missing
/// derivatives fall back to central differences with step 1e-6 (1 + |t|).
struct ScalarSchedule {
  std::function<double(double)> value;
  std::function<double(double)> d1;  // may be empty
  std::function<double(double)> d2;  // may be empty
  bool is_constant = false;

  double operator()(double t) const { return value(t); }
  double deriv(double t) const;
  double deriv2(double t) const;
  bool analytic() const { return static_cast<bool>(d1) && static_cast<bool>(d2); }

  static ScalarSchedule constant(double c);
  /// coef * t^p
  static ScalarSchedule power(double coef, double p);
  /// c0 + c1 / t
  static ScalarSchedule affine_inverse(double c0, double c1);
};

/// x'' + gamma(t) x' + beta(t) Hess f(x) x' + b(t) grad f(x) = 0 with
/// gamma(t) = alpha/t, or a constant gamma when gamma_const is set.
struct DampedSystemSpec {
  double alpha = 0.0;
  ScalarSchedule beta = ScalarSchedule::constant(0.0);
  ScalarSchedule b = ScalarSchedule::constant(1.0);
  SmoothConvexProblem problem;
  double t0 = 1.0;
  std::optional<double> gamma_const;

  double viscous(double t) const { return gamma_const ? *gamma_const : (alpha == 0.0 ? 0.0 : alpha / t); }
};

/// t0 > 0 unless the viscous term is regular at 0; beta, b >= 0 on 1000 samples of [t0, T].
void validate(const DampedSystemSpec& spec, double T);

struct TrajectorySample {
  double t = 0.0;
  Vec x;
  Vec v;
  double f_gap = 0.0;
  double grad_norm = 0.0;
  double energy = 0.0;  // E(t), or the strongly convex energy when gamma_const is set; NaN without x*
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  long max_steps = 50'000'000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  double min_step = 0.0;
};

/// Dormand-Prince 5(4) with step control on max_i |err_i| / (atol + rtol max(|y_i|, |y_new_i|)) and
/// cubic Hermite dense output at the requested times (ascending, first >= t0).
std::vector<TrajectorySample> integrate(const DampedSystemSpec& spec, const Vec& x0, const Vec& v0,
                                        const std::vector<double>& times, const IntegratorOptions& opts = {},
                                        IntegratorStats* stats = nullptr);

/// Samples on geometric_grid(t0, T); rtol = tol, atol = 1e-3 tol.
std::vector<TrajectorySample> integrate(const DampedSystemSpec& spec, const Vec& x0, const Vec& v0, double T,
                                        double tol);

/// Gradient-only first-order form for constant beta:
///   x' = -beta grad f(x) - y,   y' = (b(t) - gamma(t) beta) grad f(x) - gamma(t) y.
/// Samples report v = x'.
std::vector<TrajectorySample> integrate_first_order(const DampedSystemSpec& spec, const Vec& x0, const Vec& v0,
                                                    const std::vector<double>& times,
                                                    const IntegratorOptions& opts = {});

/// t0, t0 r, t0 r^2, ... with T appended.
std::vector<double> geometric_grid(double t0, double T, double ratio = 1.02);
std::vector<double> uniform_grid(double t0, double T, double dt);

struct WDelta {
  double w = 0.0;
  double delta = 0.0;
};

/// w = b - beta' - beta/t,  delta = t^2 w.
WDelta w_and_delta(const DampedSystemSpec& spec, double t);

struct ContinuousGrowth {
  bool G2 = false;
  bool G3 = false;
};

/// G2: b > beta' + beta/t.  G3: t w' <= (alpha - 3) w, with a relative
/// tolerance (1e-9 analytic, 1e-5 finite differences) so equality cases hold.
ContinuousGrowth check_growth_continuous(const DampedSystemSpec& spec, double t);

/// E(t) = delta (f(x) - f(x*)) + 1/2 |(alpha-1)(x-x*) + t(v + beta grad f(x))|^2.
double energy_continuous(const DampedSystemSpec& spec, const TrajectorySample& s, const Vec& xstar);

/// f(x) - f(x*) + 1/2 |sqrt(mu)(x-x*) + v + beta grad f(x)|^2 with mu the problem's modulus.
double sc_energy_continuous(const SmoothConvexProblem& problem, double beta, const TrajectorySample& s,
                            const Vec& xstar);

}  // namespace hessdamp
