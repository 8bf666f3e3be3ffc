#include "hessdamp/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hessdamp {

namespace {

bool all_finite(const Vec& v) { return v.allFinite(); }

void check_start(int dim, const Vec& x0, const Vec& x1, const char* who) {
  if (x0.size() != dim || x1.size() != dim) {
    std::ostringstream os;
    os << who << ": start points must have dimension " << dim;
    throw DimensionError(os.str());
  }
}

[[noreturn]] void blowup(const char* who, int k, Trace&& trace) {
  std::ostringstream os;
  os << who << ": non-finite iterate at k = " << k;
  throw IterateBlowup(os.str(), std::move(trace));
}

// a <= b up to a relative slack for exact boundary cases like sqrt(0.25) <= 0.5
bool leq(double a, double b) { return a <= b + 1e-12 * std::max(std::abs(a), std::abs(b)); }

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

// Accelerated gradient solve of argmin_z tau f(z) + |z - y|^2/2.
Vec inner_prox(const SmoothConvexProblem& p, const Vec& y, double tau, double& residual) {
  if (tau == 0.0) {
    residual = 0.0;
    return y;
  }
  const double L = *p.lipschitz;
  const double Lsub = tau * L + 1.0;
  const double kappa = Lsub;  // modulus 1
  const double mom = (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0);
  const double tol = 1e-12 * (1.0 + y.norm());
  Vec z = y, z_prev = y;
  for (int it = 0; it < 200000; ++it) {
    const Vec w = z + mom * (z - z_prev);
    const Vec gw = tau * p.gradient(w) + (w - y);
    z_prev = z;
    z = w - gw / Lsub;
    const Vec gz = tau * p.gradient(z) + (z - y);
    residual = gz.norm();
    if (residual <= tol) return z;
  }
  return z;
}

double ipahd_energy_at(const IPAHDConfig& cfg, double delta, double fgap, const Vec& x, const Vec& x_prev,
                       const Vec& grad, const Vec& xstar, int k) {
  const Vec w = (cfg.alpha - 1.0) * (x - xstar) + k * (x - x_prev + cfg.beta_schedule(k) * cfg.h * grad);
  return delta * fgap + 0.5 * w.squaredNorm();
}

void validate_ipahd(const IPAHDConfig& cfg) {
  if (cfg.validation == Validation::unchecked) return;
  if (!(cfg.alpha >= 1.0)) fail("IPAHD: alpha must be >= 1");
  if (!(cfg.h > 0.0)) fail("IPAHD: h must be > 0");
  if (cfg.max_iter < 1) fail("IPAHD: max_iter must be >= 1");
}

}  // namespace

// ---------------------------------------------------------------------------
// IGAHD

void validate(const IGAHDConfig& cfg, std::optional<double> lipschitz) {
  if (cfg.max_iter < 1) fail("IGAHD: max_iter must be >= 1");
  if (cfg.start_index < 1) fail("IGAHD: start_index must be >= 1");
  if (!(cfg.s > 0.0)) fail("IGAHD: s must be > 0");
  if (cfg.validation == Validation::unchecked) return;
  if (!(cfg.alpha >= 3.0)) fail("IGAHD: alpha >= 3 violated");
  if (!(cfg.beta >= 0.0)) fail("IGAHD: beta >= 0 violated");
  if (!(cfg.beta < 2.0 * std::sqrt(cfg.s))) fail("IGAHD: beta < 2 sqrt(s) violated");
  if (!lipschitz) fail("IGAHD: problem has no Lipschitz constant");
  if (!leq(cfg.s * *lipschitz, 1.0)) fail("IGAHD: s <= 1/L violated");
}

double igahd_energy(const SmoothConvexProblem& problem, const IGAHDConfig& cfg, const Vec& x_prev, const Vec& x_cur,
                    int k) {
  if (!problem.opt_point || !problem.opt_value) throw ConfigError("igahd_energy: optimum unknown");
  const Vec& xs = *problem.opt_point;
  const double t = (k - 1.0) / (cfg.alpha - 1.0);
  const double rs = std::sqrt(cfg.s);
  const Vec v = (x_prev - xs) + t * (x_cur - x_prev + cfg.beta * rs * problem.gradient(x_prev));
  return t * t * (problem.value(x_cur) - *problem.opt_value) + v.squaredNorm() / (2.0 * cfg.s);
}

namespace {

struct GradReport {
  std::function<Vec(const Vec&)> grad;
  // fills value, f_gap, grad_norm of an entry given x and grad(x)
  std::function<void(IterTrace&, const Vec&, const Vec&)> report;
  // energy from x_{k-1}, x_k, grad(x_{k-1}); may be empty
  std::function<double(int, const Vec&, const Vec&, const Vec&)> energy;
};

Trace igahd_core(const GradReport& o, double alpha, double beta, double s, int k0, int max_iter, bool store,
                 const Vec& x0, const Vec& x1, const char* who) {
  Trace tr;
  const double bs = beta * std::sqrt(s);
  Vec x_prev = x0, x = x1;
  Vec g_prev = o.grad(x_prev), g = o.grad(x);

  IterTrace e0;
  e0.k = k0 - 1;
  if (store) e0.x = x0;
  o.report(e0, x0, g_prev);
  tr.iters.push_back(std::move(e0));

  for (int k = k0; k <= max_iter; ++k) {
    IterTrace e;
    e.k = k;
    if (store) e.x = x;
    o.report(e, x, g);
    if (o.energy) e.energy = o.energy(k, x_prev, x, g_prev);
    if (k == max_iter) {
      tr.iters.push_back(std::move(e));
      break;
    }
    const Vec y = x + (1.0 - alpha / k) * (x - x_prev) - bs * (g - g_prev) - (bs / k) * g_prev;
    const Vec gy = o.grad(y);
    Vec x_next = y - s * gy;
    e.grad_norm_y = gy.norm();
    if (store) e.y = y;
    tr.iters.push_back(std::move(e));
    if (!all_finite(x_next)) blowup(who, k + 1, std::move(tr));
    x_prev = std::move(x);
    x = std::move(x_next);
    g_prev = std::move(g);
    g = o.grad(x);
  }
  return tr;
}

}  // namespace

Trace igahd_run(const SmoothConvexProblem& problem, const IGAHDConfig& cfg, const Vec& x0, const Vec& x1) {
  validate(cfg, problem.lipschitz);
  check_start(problem.dim, x0, x1, "igahd_run");
  GradReport o;
  o.grad = problem.gradient;
  o.report = [&problem](IterTrace& e, const Vec& x, const Vec& g) {
    e.value = problem.value(x);
    if (problem.opt_value) e.f_gap = e.value - *problem.opt_value;
    e.grad_norm = g.norm();
  };
  if (problem.opt_point && problem.opt_value) {
    const Vec xs = *problem.opt_point;
    const double fs = *problem.opt_value;
    const double rs = std::sqrt(cfg.s);
    o.energy = [&problem, &cfg, xs, fs, rs](int k, const Vec& xp, const Vec& x, const Vec& gp) {
      const double t = (k - 1.0) / (cfg.alpha - 1.0);
      const Vec v = (xp - xs) + t * (x - xp + cfg.beta * rs * gp);
      return t * t * (problem.value(x) - fs) + v.squaredNorm() / (2.0 * cfg.s);
    };
  }
  Trace tr = igahd_core(o, cfg.alpha, cfg.beta, cfg.s, cfg.start_index, cfg.max_iter, cfg.store_iterates, x0, x1,
                        "igahd_run");
  tr.label = cfg.beta == 0.0 ? "fista" : "igahd";
  tr.hypotheses_checked = cfg.validation == Validation::strict;
  return tr;
}

Trace fista_run(const SmoothConvexProblem& problem, double alpha, double s, const Vec& x0, const Vec& x1,
                int max_iter) {
  IGAHDConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = 0.0;
  cfg.s = s;
  cfg.max_iter = max_iter;
  // FISTA is commonly run with alpha slightly above or below 3; only the step is checked
  if (!(alpha > 0.0)) fail("fista: alpha must be > 0");
  if (!problem.lipschitz) fail("fista: problem has no Lipschitz constant");
  if (!leq(s * *problem.lipschitz, 1.0)) fail("fista: s <= 1/L violated");
  if (alpha < 3.0) cfg.validation = Validation::unchecked;
  Trace tr = igahd_run(problem, cfg, x0, x1);
  tr.label = "fista";
  return tr;
}

Trace igahd_rls_run(const CompositeRLS& p, double alpha, double beta, const Vec& x0, const Vec& x1, int max_iter,
                    double f_ref) {
  if (x0.size() != p.cols() || x1.size() != p.cols()) throw DimensionError("igahd_rls_run: start dimension");
  if (!(alpha > 0.0) || max_iter < 1) fail("igahd_rls_run: bad alpha or max_iter");
  if (!(beta >= 0.0 && beta < 2.0)) fail("igahd_rls_run: beta must lie in [0, 2)");
  GradReport o;
  o.grad = [&p](const Vec& x) { return grad_fM(p, x); };
  o.report = [&p, f_ref](IterTrace& e, const Vec& x, const Vec& g) {
    e.value = p.value(x - g);  // x - grad f_M(x) = prox^M(x)
    e.f_gap = e.value - f_ref;
    e.grad_norm = g.norm();
  };
  Trace tr = igahd_core(o, alpha, beta, 1.0, 1, max_iter, true, x0, x1, "igahd_rls_run");
  tr.label = beta == 0.0 ? "fista" : "igahd";
  return tr;
}

ReferenceOptimum rls_reference_optimum(const CompositeRLS& p, double tol, int max_iter) {
  const int n = p.cols();
  Vec x = Vec::Zero(n), x_prev = x;
  double t = 1.0;
  ReferenceOptimum out;
  for (int it = 1; it <= max_iter; ++it) {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const Vec y = x + ((t - 1.0) / t_next) * (x - x_prev);
    Vec x_next = prox_metric_M(p, y);
    // gradient restart
    if ((y - x_next).dot(x_next - x) > 0.0) {
      t = 1.0;
      x_next = prox_metric_M(p, x);
    } else {
      t = t_next;
    }
    x_prev = std::move(x);
    x = std::move(x_next);
    const double res = (x - prox_metric_M(p, x)).norm();
    out.iterations = it;
    out.residual = res;
    if (res <= tol * std::max(1.0, x.norm())) break;
  }
  out.x = x;
  out.value = p.value(prox_metric_M(p, x));
  out.value = std::min(out.value, p.value(x));
  return out;
}

// ---------------------------------------------------------------------------
// IPAHD

double ipahd_mu(const IPAHDConfig& cfg, int k) {
  return (k / (k + cfg.alpha)) * (cfg.beta_schedule(k) * cfg.h + cfg.h * cfg.h * cfg.b_schedule(k));
}

double ipahd_delta(const IPAHDConfig& cfg, int k) {
  const double bk = cfg.b_schedule(k);
  const double betak = cfg.beta_schedule(k);
  const double betak1 = cfg.beta_schedule(k + 1);
  return cfg.h * (bk * cfg.h * k - betak1 - k * (betak1 - betak)) * (k + 1);
}

DiscreteGrowth check_growth_discrete(const IPAHDConfig& cfg, double alpha, int k) {
  if (k < 1) throw ConfigError("check_growth_discrete: k must be >= 1");
  DiscreteGrowth g;
  const double bk = cfg.b_schedule(k);
  const double betak = cfg.beta_schedule(k);
  const double betak1 = cfg.beta_schedule(k + 1);
  g.G2dis = bk * cfg.h * k - betak1 - k * (betak1 - betak) > 0.0;
  const double d0 = ipahd_delta(cfg, k);
  const double d1 = ipahd_delta(cfg, k + 1);
  g.G3dis = leq(d1 - d0, (alpha - 1.0) * d0 / (k + 1.0));
  return g;
}

Trace ipahd_run(const SmoothConvexProblem& problem, const IPAHDConfig& cfg, const Vec& x0, const Vec& x1) {
  validate_ipahd(cfg);
  check_start(problem.dim, x0, x1, "ipahd_run");
  if (!problem.prox && !problem.lipschitz) fail("ipahd_run: no prox and no Lipschitz constant for the inner solver");
  const bool with_energy = problem.opt_point && problem.opt_value;

  Trace tr;
  tr.label = "ipahd";
  tr.hypotheses_checked = cfg.validation == Validation::strict;
  Vec x_prev = x0, x = x1;

  auto fill = [&](IterTrace& e, const Vec& xx, const Vec& g) {
    e.x = xx;
    e.value = problem.value(xx);
    if (problem.opt_value) e.f_gap = e.value - *problem.opt_value;
    e.grad_norm = g.norm();
  };

  IterTrace e0;
  e0.k = 0;
  fill(e0, x0, problem.gradient(x0));
  tr.iters.push_back(std::move(e0));

  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Vec g = problem.gradient(x);
    IterTrace e;
    e.k = k;
    fill(e, x, g);
    const double delta = ipahd_delta(cfg, k);
    if (!(delta > 0.0)) tr.flagged.push_back(k);
    if (with_energy) e.energy = ipahd_energy_at(cfg, delta, e.f_gap, x, x_prev, g, *problem.opt_point, k);
    if (k == cfg.max_iter) {
      tr.iters.push_back(std::move(e));
      break;
    }
    const double mu = ipahd_mu(cfg, k);
    if (!(mu > 0.0) && cfg.validation == Validation::strict) {
      std::ostringstream os;
      os << "ipahd_run: mu_k <= 0 at k = " << k;
      fail(os.str());
    }
    const double c = 1.0 - cfg.alpha / (k + cfg.alpha);
    const Vec y = x + c * (x - x_prev) + cfg.beta_schedule(k) * cfg.h * c * g;
    Vec x_next;
    if (problem.prox) {
      x_next = problem.prox(y, mu);
    } else {
      double res = 0.0;
      x_next = inner_prox(problem, y, mu, res);
      tr.max_prox_residual = std::max(tr.max_prox_residual, res);
    }
    e.y = y;
    tr.iters.push_back(std::move(e));
    if (!all_finite(x_next)) blowup("ipahd_run", k + 1, std::move(tr));
    x_prev = std::move(x);
    x = std::move(x_next);
  }
  return tr;
}

Trace ipahd_ns_run(const ProxFriendlyFunction& f, const IPAHDConfig& cfg, const Vec& x0, const Vec& x1) {
  validate_ipahd(cfg);
  if (!(cfg.lambda > 0.0)) fail("ipahd_ns_run: lambda must be > 0");
  if (x0.size() != x1.size()) throw DimensionError("ipahd_ns_run: start dimension mismatch");
  const double lam = cfg.lambda;
  const EnvelopeView env(f, lam);
  const bool with_energy = f.opt_point && f.opt_value;

  Trace tr;
  tr.label = "ipahd-ns";
  tr.hypotheses_checked = cfg.validation == Validation::strict;

  auto fill = [&](IterTrace& e, const Vec& xx, const Vec& p) {
    e.x = xx;
    e.value = f.value(p);
    if (f.opt_value) e.f_gap = e.value - *f.opt_value;
    e.grad_norm = (xx - p).norm() / lam;
  };

  Vec x_prev = x0, x = x1;
  IterTrace e0;
  e0.k = 0;
  fill(e0, x0, f.prox(x0, lam));
  tr.iters.push_back(std::move(e0));

  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Vec p = f.prox(x, lam);
    IterTrace e;
    e.k = k;
    fill(e, x, p);
    const double delta = ipahd_delta(cfg, k);
    if (!(delta > 0.0)) tr.flagged.push_back(k);
    if (with_energy) {
      const Vec g = (x - p) / lam;
      const double env_gap = env.value_at(x) - *f.opt_value;
      e.energy = ipahd_energy_at(cfg, delta, env_gap, x, x_prev, g, *f.opt_point, k);
    }
    if (k == cfg.max_iter) {
      tr.iters.push_back(std::move(e));
      break;
    }
    const double bk = cfg.beta_schedule(k);
    const double denom = lam * (k + cfg.alpha) + k * (bk * cfg.h + cfg.h * cfg.h * cfg.b_schedule(k));
    const double mu = lam * (k + cfg.alpha) / denom;
    const double c = 1.0 - cfg.alpha / (k + cfg.alpha);
    const Vec y = x + c * (x - x_prev) + (bk * cfg.h / lam) * c * (x - p);
    Vec x_next = mu * y + (1.0 - mu) * f.prox(y, lam / mu);
    e.y = y;
    tr.iters.push_back(std::move(e));
    if (!all_finite(x_next)) blowup("ipahd_ns_run", k + 1, std::move(tr));
    x_prev = std::move(x);
    x = std::move(x_next);
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Strongly convex variants

double SCConfig::effective_mu() const {
  if (variant == SCVariant::prox_ns) return envelope_strong_modulus(mu, lambda);
  return mu;
}

double SCConfig::q() const { return 1.0 / (1.0 + 0.5 * std::sqrt(effective_mu() * s)); }

double SCConfig::theta() const { return 1.0 / (1.0 + std::sqrt(effective_mu() * s)); }

void validate(const SCConfig& cfg, std::optional<double> lipschitz) {
  if (!(cfg.mu > 0.0)) fail("SCConfig: mu must be > 0");
  if (!(cfg.s > 0.0)) fail("SCConfig: s must be > 0");
  if (!(cfg.beta >= 0.0)) fail("SCConfig: beta must be >= 0");
  if (cfg.max_iter < 1) fail("SCConfig: max_iter must be >= 1");
  if (cfg.variant == SCVariant::prox_ns && !(cfg.lambda > 0.0)) fail("SCConfig: lambda must be > 0");
  if (cfg.validation == Validation::unchecked) return;
  const double rmu = std::sqrt(cfg.mu);
  const double rs = std::sqrt(cfg.s);
  switch (cfg.variant) {
    case SCVariant::prox:
      if (!leq(cfg.beta, 1.0 / (2.0 * rmu))) fail("SCConfig: beta <= 1/(2 sqrt(mu)) violated");
      if (!leq(rs, cfg.beta)) fail("SCConfig: sqrt(s) <= beta violated");
      break;
    case SCVariant::prox_ns:
      if (!leq(cfg.beta, 0.5 * std::sqrt(cfg.lambda + 1.0 / cfg.mu)))
        fail("SCConfig: beta <= sqrt(lambda + 1/mu)/2 violated");
      if (!leq(rs, cfg.beta)) fail("SCConfig: sqrt(s) <= beta violated");
      break;
    case SCVariant::grad: {
      if (!leq(cfg.beta, 1.0 / rmu)) fail("SCConfig: beta <= 1/sqrt(mu) violated");
      if (!lipschitz) fail("SCConfig: grad variant needs the Lipschitz constant");
      const double L = *lipschitz;
      if (cfg.beta > 0.0 && !leq(L, rmu / (8.0 * cfg.beta))) fail("SCConfig: L <= sqrt(mu)/(8 beta) violated");
      const double bound2 = (rmu / (2.0 * cfg.s) + cfg.mu / rs) / (2.0 * cfg.beta * cfg.mu + 1.0 / rs + rmu / 2.0);
      if (!leq(L, bound2))
        fail("SCConfig: L <= (sqrt(mu)/(2s) + mu/sqrt(s)) / (2 beta mu + 1/sqrt(s) + sqrt(mu)/2) violated");
      break;
    }
  }
}

namespace {

void check_modulus(double have, double want, const char* who) {
  if (!leq(want, have)) {
    std::ostringstream os;
    os << who << ": configured mu = " << want << " exceeds the strong convexity modulus " << have;
    fail(os.str());
  }
}

}  // namespace

Trace ipahd_sc_run(const SmoothConvexProblem& problem, const SCConfig& cfg, const Vec& x0, const Vec& x1) {
  if (cfg.variant != SCVariant::prox) fail("ipahd_sc_run: config variant must be prox");
  validate(cfg, problem.lipschitz);
  if (cfg.validation == Validation::strict) check_modulus(problem.strong_modulus, cfg.mu, "ipahd_sc_run");
  check_start(problem.dim, x0, x1, "ipahd_sc_run");
  if (!problem.prox && !problem.lipschitz) fail("ipahd_sc_run: no prox and no Lipschitz constant");

  const double rms = std::sqrt(cfg.mu * cfg.s);
  const double rs = std::sqrt(cfg.s);
  const double rmu = std::sqrt(cfg.mu);
  const double a = 2.0 * rms / (1.0 + 2.0 * rms);
  const double tau = (cfg.beta * rs + cfg.s) / (1.0 + 2.0 * rms);
  const bool with_energy = problem.opt_point && problem.opt_value;

  Trace tr;
  tr.label = "ipahd-sc";
  tr.hypotheses_checked = cfg.validation == Validation::strict;
  auto fill = [&](IterTrace& e, const Vec& xx, const Vec& g) {
    e.x = xx;
    e.value = problem.value(xx);
    if (problem.opt_value) e.f_gap = e.value - *problem.opt_value;
    e.grad_norm = g.norm();
  };

  Vec x_prev = x0, x = x1;
  IterTrace e0;
  e0.k = 0;
  fill(e0, x0, problem.gradient(x0));
  tr.iters.push_back(std::move(e0));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Vec g = problem.gradient(x);
    IterTrace e;
    e.k = k;
    fill(e, x, g);
    if (with_energy) {
      const Vec w = rmu * (x - *problem.opt_point) + (x - x_prev) / rs + cfg.beta * g;
      e.energy = e.f_gap + 0.5 * w.squaredNorm();
    }
    if (k == cfg.max_iter) {
      tr.iters.push_back(std::move(e));
      break;
    }
    const Vec y = x + (1.0 - a) * (x - x_prev) + cfg.beta * rs * (1.0 - a) * g;
    Vec x_next;
    if (problem.prox) {
      x_next = problem.prox(y, tau);
    } else {
      double res = 0.0;
      x_next = inner_prox(problem, y, tau, res);
      tr.max_prox_residual = std::max(tr.max_prox_residual, res);
    }
    e.y = y;
    tr.iters.push_back(std::move(e));
    if (!all_finite(x_next)) blowup("ipahd_sc_run", k + 1, std::move(tr));
    x_prev = std::move(x);
    x = std::move(x_next);
  }
  return tr;
}

Trace ipahd_ns_sc_run(const ProxFriendlyFunction& f, const SCConfig& cfg, const Vec& x0, const Vec& x1) {
  if (cfg.variant != SCVariant::prox_ns) fail("ipahd_ns_sc_run: config variant must be prox_ns");
  validate(cfg, std::nullopt);
  if (cfg.validation == Validation::strict) check_modulus(f.strong_modulus, cfg.mu, "ipahd_ns_sc_run");
  if (x0.size() != x1.size()) throw DimensionError("ipahd_ns_sc_run: start dimension mismatch");

  const double lam = cfg.lambda;
  const double mue = cfg.effective_mu();
  const double rms = std::sqrt(mue * cfg.s);
  const double rs = std::sqrt(cfg.s);
  const double a = 2.0 * rms / (1.0 + 2.0 * rms);
  const double th = (cfg.beta * rs + cfg.s) / (1.0 + 2.0 * rms);
  const EnvelopeView env(f, lam);
  const bool with_energy = f.opt_point && f.opt_value;

  Trace tr;
  tr.label = "ipahd-ns-sc";
  tr.hypotheses_checked = cfg.validation == Validation::strict;
  auto fill = [&](IterTrace& e, const Vec& xx, const Vec& p) {
    e.x = xx;
    e.value = f.value(p);
    if (f.opt_value) e.f_gap = e.value - *f.opt_value;
    e.grad_norm = (xx - p).norm() / lam;
  };

  Vec x_prev = x0, x = x1;
  IterTrace e0;
  e0.k = 0;
  fill(e0, x0, f.prox(x0, lam));
  tr.iters.push_back(std::move(e0));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Vec p = f.prox(x, lam);
    IterTrace e;
    e.k = k;
    fill(e, x, p);
    if (with_energy) {
      const Vec g = (x - p) / lam;
      const Vec w = std::sqrt(mue) * (x - *f.opt_point) + (x - x_prev) / rs + cfg.beta * g;
      e.energy = env.value_at(x) - *f.opt_value + 0.5 * w.squaredNorm();
    }
    if (k == cfg.max_iter) {
      tr.iters.push_back(std::move(e));
      break;
    }
    const Vec y = x + (1.0 - a) * (x - x_prev) + (cfg.beta * rs / lam) * (1.0 - a) * (x - p);
    Vec x_next = (lam / (lam + th)) * y + (th / (lam + th)) * f.prox(y, lam + th);
    e.y = y;
    tr.iters.push_back(std::move(e));
    if (!all_finite(x_next)) blowup("ipahd_ns_sc_run", k + 1, std::move(tr));
    x_prev = std::move(x);
    x = std::move(x_next);
  }
  return tr;
}

Trace igahd_sc_run(const SmoothConvexProblem& problem, const SCConfig& cfg, const Vec& x0, const Vec& x1) {
  if (cfg.variant != SCVariant::grad) fail("igahd_sc_run: config variant must be grad");
  validate(cfg, problem.lipschitz);
  if (cfg.validation == Validation::strict) check_modulus(problem.strong_modulus, cfg.mu, "igahd_sc_run");
  check_start(problem.dim, x0, x1, "igahd_sc_run");

  const double rms = std::sqrt(cfg.mu * cfg.s);
  const double rs = std::sqrt(cfg.s);
  const double rmu = std::sqrt(cfg.mu);
  const double c_mom = (1.0 - rms) / (1.0 + rms);
  const double c_hess = cfg.beta * rs / (1.0 + rms);
  const double c_grad = cfg.s / (1.0 + rms);
  const bool with_energy = problem.opt_point && problem.opt_value;

  Trace tr;
  tr.label = "igahd-sc";
  tr.hypotheses_checked = cfg.validation == Validation::strict;
  auto fill = [&](IterTrace& e, const Vec& xx, const Vec& g) {
    e.x = xx;
    e.value = problem.value(xx);
    if (problem.opt_value) e.f_gap = e.value - *problem.opt_value;
    e.grad_norm = g.norm();
  };

  Vec x_prev = x0, x = x1;
  Vec g_prev = problem.gradient(x0), g = problem.gradient(x1);
  IterTrace e0;
  e0.k = 0;
  fill(e0, x0, g_prev);
  tr.iters.push_back(std::move(e0));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    IterTrace e;
    e.k = k;
    fill(e, x, g);
    if (with_energy) {
      const Vec v = rmu * (x_prev - *problem.opt_point) + (x - x_prev) / rs + cfg.beta * g_prev;
      e.energy = e.f_gap + 0.5 * v.squaredNorm();
    }
    tr.iters.push_back(std::move(e));
    if (k == cfg.max_iter) break;
    Vec x_next = x + c_mom * (x - x_prev) - c_hess * (g - g_prev) - c_grad * g;
    if (!all_finite(x_next)) blowup("igahd_sc_run", k + 1, std::move(tr));
    x_prev = std::move(x);
    x = std::move(x_next);
    g_prev = std::move(g);
    g = problem.gradient(x);
  }
  return tr;
}

std::vector<double> theta_weighted_gradient_sum(const Trace& trace, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta_weighted_gradient_sum: theta must lie in (0,1)");
  // S_k = theta S_{k-1} + theta^2 |g_{k-2}|^2, with S = 0 while no j <= k-2 exists
  std::vector<double> out(trace.iters.size(), 0.0);
  double S = 0.0;
  for (std::size_t i = 0; i < trace.iters.size(); ++i) {
    if (i >= 2) {
      const double g = trace.iters[i - 2].grad_norm;
      S = theta * S + theta * theta * g * g;
    } else {
      S = 0.0;
    }
    out[i] = S;
  }
  return out;
}

double descent_lemma_check(const SmoothConvexProblem& problem, const Vec& x, const Vec& y, double s) {
  if (!problem.lipschitz) throw ConfigError("descent_lemma_check: problem has no Lipschitz constant");
  if (!(s > 0.0) || !leq(s * *problem.lipschitz, 1.0)) throw ConfigError("descent_lemma_check: need 0 < s L <= 1");
  const Vec gx = problem.gradient(x);
  const Vec gy = problem.gradient(y);
  return problem.value(x) + gy.dot(y - x) - 0.5 * s * gy.squaredNorm() - 0.5 * s * (gx - gy).squaredNorm() -
         problem.value(y - s * gy);
}

std::size_t energy_monotone_from(const Trace& trace, double slack) {
  const auto& it = trace.iters;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < it.size(); ++i) {
    const double e0 = it[i].energy, e1 = it[i + 1].energy;
    if (std::isnan(e0) || std::isnan(e1) || e1 > e0 + slack) start = i + 1;
  }
  return start;
}

void rebase_empirical_gap(std::vector<Trace*> traces) {
  double best = std::numeric_limits<double>::infinity();
  for (const Trace* t : traces)
    for (const auto& e : t->iters)
      if (std::isfinite(e.value)) best = std::min(best, e.value);
  for (Trace* t : traces) {
    t->empirical_gap = true;
    for (auto& e : t->iters) e.f_gap = e.value - best;
  }
}

}  // namespace hessdamp
