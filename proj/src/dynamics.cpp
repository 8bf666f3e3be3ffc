#include "hessdamp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hessdamp {

namespace {

constexpr double kNaNd = std::numeric_limits<double>::quiet_NaN();

double fd_step(double t) { return 1e-6 * (1.0 + std::abs(t)); }

}  // namespace

double ScalarSchedule::deriv(double t) const {
  if (d1) return d1(t);
  if (is_constant) return 0.0;
  const double h = fd_step(t);
  return (value(t + h) - value(t - h)) / (2.0 * h);
}

double ScalarSchedule::deriv2(double t) const {
  if (d2) return d2(t);
  if (is_constant) return 0.0;
  if (d1) {
    const double h = fd_step(t);
    return (d1(t + h) - d1(t - h)) / (2.0 * h);
  }
  const double h = 1e-4 * (1.0 + std::abs(t));
  return (value(t + h) - 2.0 * value(t) + value(t - h)) / (h * h);
}

ScalarSchedule ScalarSchedule::constant(double c) {
  ScalarSchedule s;
  s.value = [c](double) { return c; };
  s.d1 = [](double) { return 0.0; };
  s.d2 = [](double) { return 0.0; };
  s.is_constant = true;
  return s;
}

namespace {

// t^k by squaring; the schedules are evaluated six times per integrator step
double ipow(double t, int k) {
  if (k < 0) return 1.0 / ipow(t, -k);
  double r = 1.0;
  while (k) {
    if (k & 1) r *= t;
    t *= t;
    k >>= 1;
  }
  return r;
}

}  // namespace

ScalarSchedule ScalarSchedule::power(double coef, double p) {
  if (p == 0.0) return constant(coef);
  ScalarSchedule s;
  if (p == std::round(p) && std::abs(p) <= 64) {
    const int k = static_cast<int>(p);
    s.value = [coef, k](double t) { return coef * ipow(t, k); };
    s.d1 = [coef, k](double t) { return coef * k * ipow(t, k - 1); };
    s.d2 = [coef, k](double t) { return coef * k * (k - 1) * ipow(t, k - 2); };
    return s;
  }
  s.value = [coef, p](double t) { return coef * std::pow(t, p); };
  s.d1 = [coef, p](double t) { return coef * p * std::pow(t, p - 1.0); };
  s.d2 = [coef, p](double t) { return coef * p * (p - 1.0) * std::pow(t, p - 2.0); };
  return s;
}

ScalarSchedule ScalarSchedule::affine_inverse(double c0, double c1) {
  if (c1 == 0.0) return constant(c0);
  ScalarSchedule s;
  s.value = [c0, c1](double t) { return c0 + c1 / t; };
  s.d1 = [c1](double t) { return -c1 / (t * t); };
  s.d2 = [c1](double t) { return 2.0 * c1 / (t * t * t); };
  return s;
}

void validate(const DampedSystemSpec& spec, double T) {
  if (!spec.problem.gradient || !spec.problem.value) throw ConfigError("DampedSystemSpec: problem incomplete");
  if (!(spec.alpha >= 0.0)) throw ConfigError("DampedSystemSpec: alpha must be >= 0");
  const bool regular_at_zero = spec.gamma_const.has_value() || spec.alpha == 0.0;
  if (regular_at_zero ? !(spec.t0 >= 0.0) : !(spec.t0 > 0.0))
    throw ConfigError("DampedSystemSpec: t0 must be > 0 (>= 0 only without the alpha/t term)");
  if (!(T > spec.t0)) throw ConfigError("DampedSystemSpec: T must exceed t0");
  if (!spec.beta.value || !spec.b.value) throw ConfigError("DampedSystemSpec: missing beta or b schedule");
  for (int i = 0; i < 1000; ++i) {
    const double t = spec.t0 + (T - spec.t0) * i / 999.0;
    const double bt = spec.beta(t), b = spec.b(t);
    if (!(bt >= 0.0) || !(b >= 0.0)) {
      std::ostringstream os;
      os << "DampedSystemSpec: beta(t) and b(t) must be >= 0; at t = " << t << " beta = " << bt << ", b = " << b;
      throw ConfigError(os.str());
    }
  }
}

namespace {

using Rhs = std::function<void(double, const Vec&, Vec&)>;
using Sink = std::function<void(double, const Vec&)>;

double err_norm(const Vec& err, const Vec& y0, const Vec& y1, const IntegratorOptions& o) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    m = std::max(m, std::abs(err[i]) / sc);
  }
  return m;
}

double initial_step(const Rhs& f, double t0, const Vec& y0, const Vec& f0, const IntegratorOptions& o) {
  // floor the scale so components starting at zero do not force a vanishing first step
  const double floor_sc = std::max(o.atol, 1e-3 * o.rtol * y0.lpNorm<Eigen::Infinity>());
  Vec sc = (floor_sc + o.rtol * y0.array().abs()).matrix();
  const double n = std::sqrt(static_cast<double>(y0.size()));
  const double d0 = y0.cwiseQuotient(sc).norm() / n;
  const double d1 = f0.cwiseQuotient(sc).norm() / n;
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  Vec y1 = y0 + h0 * f0, f1(y0.size());
  f(t0 + h0, y1, f1);
  const double d2 = (f1 - f0).cwiseQuotient(sc).norm() / n / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min(100.0 * h0, h1);
}

// Dormand-Prince 5(4), FSAL, cubic Hermite output at `times`.
void dopri(const Rhs& f, double t0, const Vec& y_init, const std::vector<double>& times, const IntegratorOptions& o,
           const Sink& sink, IntegratorStats* stats) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (times.empty()) return;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] >= times[i - 1])) throw ConfigError("integrate: sample times must be ascending");
  if (times.front() < t0) throw ConfigError("integrate: sample times must not precede t0");

  const Eigen::Index m = y_init.size();
  Vec y = y_init, k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), ytmp(m), ynew(m), err(m);
  double t = t0;
  f(t, y, k1);
  std::size_t next = 0;
  while (next < times.size() && times[next] == t0) sink(times[next++], y);
  if (next == times.size()) return;
  const double T = times.back();
  double h = initial_step(f, t0, y, k1, o);
  long steps = 0;
  double hmin_seen = std::numeric_limits<double>::infinity();

  while (next < times.size()) {
    if (++steps > o.max_steps) throw NumericalError("integrate: step budget exhausted");
    bool last = false;
    if (t + h >= T) {
      h = T - t;
      last = true;
    }
    if (h < 1e-12 * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "integrate: step size " << h << " underflow at t = " << t;
      throw StiffnessError(os.str());
    }
    // stage combinations as plain loops: states are small and these run millions of times on stiff spans
    double* yt = ytmp.data();
    const double* y_ = y.data();
    const double *p1 = k1.data(), *p2 = k2.data(), *p3 = k3.data(), *p4 = k4.data(), *p5 = k5.data(),
                 *p6 = k6.data(), *p7 = k7.data();
    for (Eigen::Index i = 0; i < m; ++i) yt[i] = y_[i] + h * a21 * p1[i];
    f(t + c2 * h, ytmp, k2);
    for (Eigen::Index i = 0; i < m; ++i) yt[i] = y_[i] + h * (a31 * p1[i] + a32 * p2[i]);
    f(t + c3 * h, ytmp, k3);
    for (Eigen::Index i = 0; i < m; ++i) yt[i] = y_[i] + h * (a41 * p1[i] + a42 * p2[i] + a43 * p3[i]);
    f(t + c4 * h, ytmp, k4);
    for (Eigen::Index i = 0; i < m; ++i)
      yt[i] = y_[i] + h * (a51 * p1[i] + a52 * p2[i] + a53 * p3[i] + a54 * p4[i]);
    f(t + c5 * h, ytmp, k5);
    for (Eigen::Index i = 0; i < m; ++i)
      yt[i] = y_[i] + h * (a61 * p1[i] + a62 * p2[i] + a63 * p3[i] + a64 * p4[i] + a65 * p5[i]);
    f(t + h, ytmp, k6);
    double* yn = ynew.data();
    for (Eigen::Index i = 0; i < m; ++i)
      yn[i] = y_[i] + h * (a71 * p1[i] + a73 * p3[i] + a74 * p4[i] + a75 * p5[i] + a76 * p6[i]);
    f(t + h, ynew, k7);
    double* pe = err.data();
    for (Eigen::Index i = 0; i < m; ++i)
      pe[i] = h * (e1 * p1[i] + e3 * p3[i] + e4 * p4[i] + e5 * p5[i] + e6 * p6[i] + e7 * p7[i]);
    if (!ynew.allFinite() || !err.allFinite()) {
      // try a smaller step before giving up
      h *= 0.1;
      if (stats) ++stats->rejected;
      if (!y.allFinite()) throw NumericalError("integrate: non-finite state");
      continue;
    }
    const double en = err_norm(err, y, ynew, o);
    if (en <= 1.0) {
      const double tn = last ? T : t + h;
      while (next < times.size() && times[next] <= tn) {
        const double th = (times[next] - t) / h;
        const double th2 = th * th, th3 = th2 * th;
        const double h00 = 2 * th3 - 3 * th2 + 1, h10 = th3 - 2 * th2 + th, h01 = -2 * th3 + 3 * th2,
                     h11 = th3 - th2;
        const Vec yi = h00 * y + (h10 * h) * k1 + h01 * ynew + (h11 * h) * k7;
        sink(times[next++], yi);
      }
      hmin_seen = std::min(hmin_seen, h);
      t = tn;
      y = ynew;
      k1 = k7;
      if (stats) ++stats->accepted;
      const double fac = en == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2)));
      h *= fac;
    } else {
      if (stats) ++stats->rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
    }
  }
  if (stats) stats->min_step = hmin_seen;
}

TrajectorySample make_sample(const DampedSystemSpec& spec, double t, const Vec& x, const Vec& v) {
  TrajectorySample s;
  s.t = t;
  s.x = x;
  s.v = v;
  const auto& p = spec.problem;
  s.f_gap = p.opt_value ? p.value(x) - *p.opt_value : kNaNd;
  s.grad_norm = p.gradient(x).norm();
  s.energy = kNaNd;
  if (p.opt_point) {
    if (spec.gamma_const) {
      if (p.strong_modulus > 0.0) s.energy = sc_energy_continuous(p, spec.beta(t), s, *p.opt_point);
    } else if (t > 0.0) {
      s.energy = energy_continuous(spec, s, *p.opt_point);
    }
  }
  return s;
}

void check_ic(const DampedSystemSpec& spec, const Vec& x0, const Vec& v0) {
  if (x0.size() != spec.problem.dim || v0.size() != spec.problem.dim)
    throw DimensionError("integrate: initial state has the wrong dimension");
}

}  // namespace

std::vector<TrajectorySample> integrate(const DampedSystemSpec& spec, const Vec& x0, const Vec& v0,
                                        const std::vector<double>& times, const IntegratorOptions& opts,
                                        IntegratorStats* stats) {
  if (times.empty()) return {};
  validate(spec, std::max(times.back(), spec.t0 + 1e-9));
  check_ic(spec, x0, v0);
  const Eigen::Index n = x0.size();
  const auto& p = spec.problem;
  Rhs rhs;
  if (p.hessian && p.opt_point) {
    // quadratic: no allocation per evaluation, which matters on long stiff runs
    rhs = [&spec, &H = *p.hessian, &xs = *p.opt_point, n, d = Vec(n)](double t, const Vec& y, Vec& dy) mutable {
      const double gam = spec.viscous(t), b = spec.b(t), bt = spec.beta(t);
      const double* yp = y.data();
      double* dp = dy.data();
      for (Eigen::Index i = 0; i < n; ++i) d[i] = yp[i] - xs[i];
      for (Eigen::Index i = 0; i < n; ++i) {
        double g = 0.0, hv = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          g += H(i, j) * d[j];
          hv += H(i, j) * yp[n + j];
        }
        dp[i] = yp[n + i];
        dp[n + i] = -gam * yp[n + i] - b * g - bt * hv;
      }
    };
  } else {
    rhs = [&spec, &p, n](double t, const Vec& y, Vec& dy) {
      const Vec x = y.head(n);
      const auto v = y.tail(n);
      dy.head(n) = v;
      dy.tail(n) = -spec.viscous(t) * v - spec.b(t) * p.gradient(x);
      const double bt = spec.beta(t);
      if (bt != 0.0) dy.tail(n) -= bt * p.hessian_times(x, v);
    };
  }
  Vec y0(2 * n);
  y0 << x0, v0;
  std::vector<TrajectorySample> out;
  out.reserve(times.size());
  dopri(rhs, spec.t0, y0, times, opts,
        [&](double t, const Vec& y) { out.push_back(make_sample(spec, t, y.head(n), y.tail(n))); }, stats);
  return out;
}

std::vector<TrajectorySample> integrate(const DampedSystemSpec& spec, const Vec& x0, const Vec& v0, double T,
                                        double tol) {
  if (!(tol > 0.0)) throw ConfigError("integrate: tol must be > 0");
  IntegratorOptions o;
  o.rtol = tol;
  o.atol = 1e-3 * tol;
  const double start = spec.t0 > 0.0 ? spec.t0 : 0.0;
  std::vector<double> grid = start > 0.0 ? geometric_grid(start, T) : uniform_grid(start, T, (T - start) / 1000.0);
  return integrate(spec, x0, v0, grid, o);
}

std::vector<TrajectorySample> integrate_first_order(const DampedSystemSpec& spec, const Vec& x0, const Vec& v0,
                                                    const std::vector<double>& times, const IntegratorOptions& opts) {
  if (times.empty()) return {};
  validate(spec, std::max(times.back(), spec.t0 + 1e-9));
  check_ic(spec, x0, v0);
  if (!spec.beta.is_constant) throw ConfigError("integrate_first_order: beta must be constant");
  const double beta = spec.beta(spec.t0);
  const Eigen::Index n = x0.size();
  const auto& p = spec.problem;
  Rhs rhs = [&spec, &p, n, beta](double t, const Vec& s, Vec& ds) {
    const Vec x = s.head(n);
    const auto y = s.tail(n);
    const Vec g = p.gradient(x);
    const double gam = spec.viscous(t);
    ds.head(n) = -beta * g - y;
    ds.tail(n) = (spec.b(t) - gam * beta) * g - gam * y;
  };
  Vec s0(2 * n);
  s0 << x0, -v0 - beta * p.gradient(x0);
  std::vector<TrajectorySample> out;
  out.reserve(times.size());
  dopri(rhs, spec.t0, s0, times, opts,
        [&](double t, const Vec& s) {
          const Vec x = s.head(n);
          const Vec v = -beta * p.gradient(x) - s.tail(n);
          out.push_back(make_sample(spec, t, x, v));
        },
        nullptr);
  return out;
}

std::vector<double> geometric_grid(double t0, double T, double ratio) {
  if (!(t0 > 0.0) || !(T > t0) || !(ratio > 1.0)) throw ConfigError("geometric_grid: need 0 < t0 < T, ratio > 1");
  std::vector<double> g;
  for (double t = t0; t < T; t *= ratio) g.push_back(t);
  g.push_back(T);
  return g;
}

std::vector<double> uniform_grid(double t0, double T, double dt) {
  if (!(T > t0) || !(dt > 0.0)) throw ConfigError("uniform_grid: need t0 < T, dt > 0");
  const long n = static_cast<long>(std::ceil((T - t0) / dt - 1e-9));
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i < n; ++i) g.push_back(t0 + dt * static_cast<double>(i));
  g.push_back(T);
  return g;
}

WDelta w_and_delta(const DampedSystemSpec& spec, double t) {
  const double w = spec.b(t) - spec.beta.deriv(t) - spec.beta(t) / t;
  return {w, t * t * w};
}

ContinuousGrowth check_growth_continuous(const DampedSystemSpec& spec, double t) {
  ContinuousGrowth g;
  const double beta = spec.beta(t), db = spec.beta.deriv(t);
  const double w = spec.b(t) - db - beta / t;
  g.G2 = w > 0.0;
  // w' = b' - beta'' - beta'/t + beta/t^2
  const double dw = spec.b.deriv(t) - spec.beta.deriv2(t) - db / t + beta / (t * t);
  const double lhs = t * dw, rhs = (spec.alpha - 3.0) * w;
  const double rel = (spec.beta.analytic() && spec.b.analytic()) ? 1e-9 : 1e-5;
  g.G3 = lhs <= rhs + rel * std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return g;
}

double energy_continuous(const DampedSystemSpec& spec, const TrajectorySample& s, const Vec& xstar) {
  const auto& p = spec.problem;
  const double delta = w_and_delta(spec, s.t).delta;
  const Vec g = p.gradient(s.x);
  const Vec w = (spec.alpha - 1.0) * (s.x - xstar) + s.t * (s.v + spec.beta(s.t) * g);
  return delta * (p.value(s.x) - p.value(xstar)) + 0.5 * w.squaredNorm();
}

double sc_energy_continuous(const SmoothConvexProblem& problem, double beta, const TrajectorySample& s,
                            const Vec& xstar) {
  const double mu = problem.strong_modulus;
  if (!(mu > 0.0)) throw ConfigError("sc_energy_continuous: problem has no strong convexity modulus");
  const Vec w = std::sqrt(mu) * (s.x - xstar) + s.v + beta * problem.gradient(s.x);
  return problem.value(s.x) - problem.value(xstar) + 0.5 * w.squaredNorm();
}

}  // namespace hessdamp
