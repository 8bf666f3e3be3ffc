#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hessdamp/algorithms.hpp"
#include "hessdamp/harness.hpp"
#include "test_util.hpp"

using namespace hessdamp;
using testutil::random_vec;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

SmoothConvexProblem fig1_quadratic() { return make_quadratic({1.0, 1000.0}, Vec()); }

// scalar root of z - y + tau f'(z) = 0 by bisection, f'(z) = z
double implicit_step(double y, double tau) {
  double lo = -std::abs(y) - 1.0, hi = std::abs(y) + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid - y + tau * mid > 0.0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("igahd: zero momentum at k = alpha when beta = 0") {
  const auto p = fig1_quadratic();
  IGAHDConfig c;
  c.s = 1e-3;
  c.max_iter = 5;
  const Vec x0 = Vec::Ones(2), x1 = 0.5 * Vec::Ones(2);
  const Trace tr = igahd_run(p, c, x0, x1);
  CHECK(tr.iters[3].k == 3);
  CHECK(*tr.iters[3].y == tr.iters[3].x);
}

TEST_CASE("igahd: start at the minimizer stays there") {
  const auto p = fig1_quadratic();
  IGAHDConfig c;
  c.s = 1e-3;
  c.beta = 0.5 * std::sqrt(c.s);
  c.max_iter = 50;
  const Trace tr = igahd_run(p, c, Vec::Zero(2), Vec::Zero(2));
  for (const auto& e : tr.iters) {
    CHECK(e.x.isZero());
    if (e.k >= 1) CHECK(e.energy == 0.0);
  }
}

TEST_CASE("igahd: one boxed update on f = x^2/2") {
  const auto p = make_quadratic({1.0}, Vec());
  IGAHDConfig c;
  c.alpha = 3;
  c.beta = 0.5;
  c.s = 0.5;
  c.start_index = 10;
  c.max_iter = 11;
  const Trace tr = igahd_run(p, c, v1(1.0), v1(1.0));
  REQUIRE(tr.iters[1].k == 10);
  CHECK((*tr.iters[1].y)[0] == doctest::Approx(1.0 - 0.5 * std::sqrt(0.5) / 10).epsilon(1e-15));
  CHECK((*tr.iters[1].y)[0] == doctest::Approx(0.96464466).epsilon(1e-8));
  CHECK(tr.iters[2].x[0] == doctest::Approx(0.48232233).epsilon(1e-8));
}

TEST_CASE("igahd energy") {
  const auto p = fig1_quadratic();
  IGAHDConfig c;
  c.s = 1e-3;
  c.beta = 0.01;
  CHECK(igahd_energy(p, c, Vec::Zero(2), Vec::Zero(2), 7) == 0.0);
  const Vec x0(Vec::Ones(2));
  CHECK(igahd_energy(p, c, x0, 3 * x0, 1) == doctest::Approx(x0.squaredNorm() / (2 * c.s)));
  SmoothConvexProblem q = p;
  q.opt_point.reset();
  CHECK_THROWS_AS(igahd_energy(q, c, x0, x0, 2), ConfigError);

  std::mt19937_64 g(21);
  for (double beta_frac : {0.0, 0.5, 1.5}) {
    c.beta = beta_frac * std::sqrt(c.s);
    c.max_iter = 3000;
    const Trace tr = igahd_run(p, c, random_vec(g, 2), random_vec(g, 2));
    for (std::size_t i = 3; i + 1 < tr.iters.size(); ++i)
      CHECK(tr.iters[i + 1].energy <= tr.iters[i].energy + 1e-12);
  }
}

TEST_CASE("igahd validation") {
  const auto p = fig1_quadratic();
  IGAHDConfig c;
  c.s = 1e-3;
  CHECK_NOTHROW(validate(c, p.lipschitz));
  c.alpha = 2.9;
  CHECK_THROWS_AS(validate(c, p.lipschitz), ConfigError);
  c.alpha = 3;
  c.beta = 2 * std::sqrt(c.s);
  CHECK_THROWS_AS(validate(c, p.lipschitz), ConfigError);
  c.beta = 0;
  c.s = 2e-3;
  CHECK_THROWS_AS(validate(c, p.lipschitz), ConfigError);
  CHECK_THROWS_AS(validate(c, std::nullopt), ConfigError);
  c.validation = Validation::unchecked;
  CHECK_NOTHROW(validate(c, p.lipschitz));
}

TEST_CASE("fista equals igahd with beta = 0 and the classical Nesterov update") {
  const auto p = fig1_quadratic();
  std::mt19937_64 g(22);
  const Vec x0 = random_vec(g, 2), x1 = random_vec(g, 2);
  const double s = 1e-3;
  const Trace f = fista_run(p, 3.0, s, x0, x1, 300);
  IGAHDConfig c;
  c.s = s;
  c.max_iter = 300;
  const Trace ig = igahd_run(p, c, x0, x1);
  REQUIRE(f.iters.size() == ig.iters.size());
  for (std::size_t i = 0; i < f.iters.size(); ++i) CHECK(f.iters[i].x == ig.iters[i].x);

  Vec xp = x0, x = x1;
  for (int k = 1; k < 300; ++k) {
    const Vec y = x + (1.0 - 3.0 / k) * (x - xp);
    CHECK(*f.iters[k].y == y);
    xp = x;
    x = y - s * p.gradient(y);
  }
}

TEST_CASE("fista oscillates on the ill-conditioned quadratic") {
  const auto p = fig1_quadratic();
  const Trace f = fista_run(p, 3.1, 1e-3, Vec::Ones(2), Vec::Ones(2), 200);
  std::vector<double> gap;
  for (const auto& e : f.iters) gap.push_back(e.f_gap);
  CHECK(oscillation_count(gap) >= 1);
  CHECK_THROWS_AS(fista_run(p, 3.0, 2e-3, Vec::Ones(2), Vec::Ones(2)), ConfigError);
}

TEST_CASE("divergent iterates abort with the trace prefix") {
  const auto p = make_quadratic({1.0}, Vec());
  IGAHDConfig c;
  c.s = 10.0;
  c.max_iter = 100000;
  c.store_iterates = false;
  c.validation = Validation::unchecked;
  try {
    igahd_run(p, c, v1(1.0), v1(1.0));
    FAIL("expected IterateBlowup");
  } catch (const IterateBlowup& e) {
    CHECK(e.prefix().iters.size() > 10);
    CHECK(e.prefix().iters.back().k > 0);
  }
}

TEST_CASE("ipahd coefficients") {
  IPAHDConfig c;
  c.alpha = 3;
  c.beta_schedule = [](int) { return 1.0; };
  c.h = 1.0;
  CHECK(ipahd_mu(c, 0) == 0.0);
  CHECK(ipahd_mu(c, 3) == doctest::Approx(1.0));
  CHECK(ipahd_delta(c, 4) == doctest::Approx(15.0));

  const double beta = 0.7, h = 0.3;
  c.beta_schedule = [=](int) { return beta; };
  c.h = h;
  for (int k = 1; k < 20; ++k) CHECK(ipahd_delta(c, k) == doctest::Approx(h * h * (k + 1) * (k - beta / h)));
  c.b_schedule = [=](int k) { return 1.0 + beta / (h * k); };
  for (int k = 1; k < 20; ++k) CHECK(ipahd_delta(c, k) == doctest::Approx(h * h * (k + 1) * k));
}

TEST_CASE("discrete growth conditions") {
  IPAHDConfig c;
  c.beta_schedule = [](int) { return 1.0; };
  c.h = 1.0;
  const auto at4 = check_growth_discrete(c, 4.0, 4);
  CHECK(at4.G2dis);
  CHECK(at4.G3dis);
  CHECK_FALSE(check_growth_discrete(c, 4.0, 2).G3dis);
  for (int k = 4; k < 200; ++k) {
    const auto gk = check_growth_discrete(c, 4.0, k);
    CHECK(gk.G2dis);
    CHECK(gk.G3dis);
  }
  c.beta_schedule = [](int) { return 0.0; };
  for (int k = 1; k < 50; ++k) CHECK(check_growth_discrete(c, 3.0, k).G2dis);
  c.b_schedule = [](int k) { return static_cast<double>(k); };
  CHECK_FALSE(check_growth_discrete(c, 3.0, 10).G3dis);
  CHECK_THROWS_AS(check_growth_discrete(c, 3.0, 0), ConfigError);
}

TEST_CASE("ipahd matches a per-step implicit solve") {
  const auto p = make_quadratic({1.0}, Vec());
  IPAHDConfig c;
  c.alpha = 3;
  c.h = 0.5;
  c.beta_schedule = [](int) { return 0.5; };
  c.max_iter = 200;
  const Trace tr = ipahd_run(p, c, v1(2.0), v1(1.5));
  double xp = 2.0, x = 1.5;
  for (int k = 1; k < c.max_iter; ++k) {
    CHECK(std::abs(tr.iters[k].x[0] - x) <= 1e-10);
    const double cc = 1.0 - c.alpha / (k + c.alpha);
    const double y = x + cc * (x - xp) + 0.5 * c.h * cc * x;
    const double mu = (k / (k + c.alpha)) * (0.5 * c.h + c.h * c.h);
    xp = x;
    x = implicit_step(y, mu);
  }
  // delta_1 = h (h - beta) 2 = 0 is flagged
  CHECK(tr.flagged == std::vector<int>{1});
}

TEST_CASE("ipahd on the envelope equals ipahd-ns") {
  std::mt19937_64 g(23);
  for (const auto& f : {half_sq_norm(2.0), l1_norm(), l1_plus_half_sq(), tv1d_norm()}) {
    IPAHDConfig c;
    c.alpha = 3.5;
    c.h = 0.8;
    c.beta_schedule = [](int) { return 0.4; };
    c.b_schedule = [](int k) { return 1.0 + 0.5 / k; };
    c.lambda = 0.7;
    c.max_iter = 300;
    const Vec x0 = random_vec(g, 4, 2.0), x1 = random_vec(g, 4, 2.0);
    const EnvelopeView env(f, c.lambda);
    const Trace a = ipahd_run(env.as_smooth_problem(4), c, x0, x1);
    const Trace b = ipahd_ns_run(f, c, x0, x1);
    REQUIRE(a.iters.size() == b.iters.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.iters.size(); ++i) worst = std::max(worst, (a.iters[i].x - b.iters[i].x).norm());
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("ipahd-ns") {
  IPAHDConfig c;
  c.lambda = 1.0;
  c.max_iter = 50;
  const Trace st = ipahd_ns_run(l1_norm(), c, Vec::Zero(3), Vec::Zero(3));
  for (const auto& e : st.iters) CHECK(e.x.isZero());
  c.lambda = 0.0;
  CHECK_THROWS_AS(ipahd_ns_run(l1_norm(), c, Vec::Zero(3), Vec::Zero(3)), ConfigError);

  // b_k = 1 + beta/(h k) gives delta_k = h^2 (k+1) k
  const double beta = 0.5, h = 0.5;
  c.alpha = 3;
  c.lambda = 0.5;
  c.h = h;
  c.beta_schedule = [=](int) { return beta; };
  c.b_schedule = [=](int k) { return 1.0 + beta / (h * k); };
  c.max_iter = 1000;
  const Trace tr = ipahd_ns_run(l1_norm(), c, v1(5.0), v1(5.0));
  double bound = 0.0;
  for (const auto& e : tr.iters) bound = std::max(bound, double(e.k) * e.k * e.f_gap);
  CHECK(tr.iters.back().f_gap <= 1e-4);
  CHECK(bound < 1e3);
  CHECK(tr.flagged.empty());
}

TEST_CASE("strongly convex coefficients and validation") {
  SCConfig c;
  c.mu = 1;
  c.s = 0.04;
  CHECK(c.q() == doctest::Approx(1 / 1.1));
  CHECK(c.theta() == doctest::Approx(1 / 1.2));

  c.variant = SCVariant::grad;
  c.beta = 0.1;
  c.s = 0.25;
  CHECK_NOTHROW(validate(c, 1.0));
  CHECK(c.q() == doctest::Approx(0.8));
  try {
    validate(c, 1.3);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("8 beta") != std::string::npos);
  }
  CHECK_THROWS_AS(validate(c, std::nullopt), ConfigError);

  c.variant = SCVariant::prox;
  c.beta = 0.5;
  CHECK_NOTHROW(validate(c, std::nullopt));
  c.beta = 0.6;
  CHECK_THROWS_AS(validate(c, std::nullopt), ConfigError);
  c.beta = 0.4;
  CHECK_THROWS_AS(validate(c, std::nullopt), ConfigError);
  c.validation = Validation::unchecked;
  CHECK_NOTHROW(validate(c, std::nullopt));
}

TEST_CASE("ipahd-sc") {
  const auto p = make_quadratic({1.0}, Vec());
  SCConfig c;
  c.mu = 1;
  c.beta = 0.5;
  c.s = 0.25;
  c.max_iter = 500;
  const Trace st = ipahd_sc_run(p, c, v1(0.0), v1(0.0));
  for (const auto& e : st.iters)
    if (e.k >= 1) CHECK(e.energy == 0.0);

  const Trace tr = ipahd_sc_run(p, c, v1(1.0), v1(1.0));
  const double E1 = tr.iters[1].energy, q = c.q();
  for (std::size_t i = 1; i < tr.iters.size(); ++i) {
    CHECK(tr.iters[i].energy <= E1 * std::pow(q, tr.iters[i].k - 1) * (1 + 1e-10));
    CHECK(tr.iters[i].f_gap <= E1 * std::pow(q, tr.iters[i].k - 1) * (1 + 1e-10));
  }
  // the configured modulus must not exceed the problem's
  c.mu = 2;
  c.beta = 0.3;
  c.s = 0.09;
  CHECK_THROWS_AS(ipahd_sc_run(p, c, v1(1.0), v1(1.0)), ConfigError);
}

TEST_CASE("ipahd-ns-sc equals ipahd-sc on the envelope") {
  const double mu = 1.0, lam = 1.0;
  const EnvelopeView env(half_sq_norm(mu), lam);
  SCConfig ns;
  ns.variant = SCVariant::prox_ns;
  ns.mu = mu;
  ns.lambda = lam;
  ns.beta = 0.5;
  ns.s = 0.25;
  ns.max_iter = 300;
  SCConfig pr = ns;
  pr.variant = SCVariant::prox;
  pr.mu = env.strong_modulus();
  pr.lambda = 0.0;
  std::mt19937_64 g(24);
  const Vec x0 = random_vec(g, 3), x1 = random_vec(g, 3);
  const Trace a = ipahd_ns_sc_run(half_sq_norm(mu), ns, x0, x1);
  const Trace b = ipahd_sc_run(env.as_smooth_problem(3), pr, x0, x1);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.iters.size(); ++i) worst = std::max(worst, (a.iters[i].x - b.iters[i].x).norm());
  CHECK(worst <= 1e-10);

  const Trace st = ipahd_ns_sc_run(half_sq_norm(mu), ns, Vec::Zero(3), Vec::Zero(3));
  for (const auto& e : st.iters) CHECK(e.x.isZero());
}

TEST_CASE("ipahd-ns-sc on |x| + x^2/2 decays geometrically") {
  SCConfig c;
  c.variant = SCVariant::prox_ns;
  c.mu = 1;
  c.lambda = 1;
  c.beta = 0.5;
  c.s = 0.25;
  c.max_iter = 300;
  const Trace tr = ipahd_ns_sc_run(l1_plus_half_sq(), c, v1(3.0), v1(3.0));
  const double q = c.q();
  auto r = [&](int k) {
    const double gn = tr.iters[k].grad_norm * c.lambda;
    return gn * gn;
  };
  double C = 0.0;
  for (int k = 20; k <= 50; ++k) C = std::max(C, r(k) / std::pow(q, k));
  for (int k = 50; k <= 300; ++k) CHECK(r(k) <= C * std::pow(q, k) * (1 + 1e-10));
  CHECK(tr.iters.back().f_gap <= 1e-10);
}

TEST_CASE("igahd-sc") {
  const auto p = make_quadratic({1.0}, Vec());
  SCConfig c;
  c.variant = SCVariant::grad;
  c.mu = 1;
  c.s = 1;
  c.beta = 0;
  c.max_iter = 3;
  const Trace plain = igahd_sc_run(p, c, v1(2.0), v1(1.0));
  CHECK(plain.iters[2].x[0] == doctest::Approx(0.5));

  c.beta = 0.1;
  c.s = 0.25;
  c.max_iter = 200;
  const Trace tr = igahd_sc_run(p, c, v1(1.0), v1(1.0));
  const double E1 = tr.iters[1].energy;
  for (std::size_t i = 1; i < tr.iters.size(); ++i)
    CHECK(tr.iters[i].value <= E1 * std::pow(0.8, tr.iters[i].k - 1) * (1 + 1e-10));

  const auto S = theta_weighted_gradient_sum(tr, c.theta());
  double lo = 1e300, hi = 0.0;
  for (int k = 20; k <= 200; ++k) {
    lo = std::min(lo, S[k] / std::pow(c.q(), k));
    hi = std::max(hi, S[k] / std::pow(c.q(), k));
  }
  CHECK(hi < 1e3);
}

TEST_CASE("theta weighted gradient sums") {
  Trace zeros;
  for (int k = 0; k < 10; ++k) {
    IterTrace e;
    e.k = k;
    e.grad_norm = 0.0;
    zeros.iters.push_back(e);
  }
  for (double s : theta_weighted_gradient_sum(zeros, 0.5)) CHECK(s == 0.0);

  Trace flat = zeros;
  for (auto& e : flat.iters) e.grad_norm = 2.0;
  const double th = 0.7;
  Trace long_flat;
  for (int k = 0; k < 200; ++k) long_flat.iters.push_back(flat.iters[0]);
  const auto S = theta_weighted_gradient_sum(long_flat, th);
  CHECK(S.back() == doctest::Approx(4.0 * th * th / (1 - th)).epsilon(1e-12));
  CHECK(S[2] == doctest::Approx(4.0 * th * th));
  CHECK_THROWS_AS(theta_weighted_gradient_sum(flat, 1.0), ConfigError);
}

TEST_CASE("extended descent lemma") {
  const auto p = make_quadratic({1.0}, Vec());
  CHECK(descent_lemma_check(p, v1(0.0), v1(0.0), 1.0) == 0.0);
  CHECK(descent_lemma_check(p, v1(1.0), v1(0.0), 1.0) == doctest::Approx(0.0));
  const auto q = fig1_quadratic();
  std::mt19937_64 g(25);
  for (int i = 0; i < 100; ++i)
    CHECK(descent_lemma_check(q, random_vec(g, 2, 3.0), random_vec(g, 2, 3.0), 1e-3) >= -1e-10);
  CHECK_THROWS_AS(descent_lemma_check(q, v1(0.0), v1(0.0), 1.0), ConfigError);
}

TEST_CASE("trace utilities") {
  Trace a, b;
  for (double e : {5.0, 4.0, 4.5, 3.0, 2.0}) {
    IterTrace it;
    it.energy = e;
    it.value = e;
    a.iters.push_back(it);
  }
  CHECK(energy_monotone_from(a, 0.0) == 2);
  CHECK(energy_monotone_from(a, 1.0) == 0);
  IterTrace low;
  low.value = 1.0;
  b.iters.push_back(low);
  rebase_empirical_gap({&a, &b});
  CHECK(a.empirical_gap);
  CHECK(a.iters[0].f_gap == 4.0);
  CHECK(b.iters[0].f_gap == 0.0);
}

TEST_CASE("igahd on a small Lasso in the metric") {
  const RlsInstance inst = make_lasso(20, 30, 3, 5, 1e-2);
  const double s = 0.99 / spectral_norm_sq(inst.A);
  const CompositeRLS p(inst.A, inst.y, inst.reg, s);
  const ReferenceOptimum ref = rls_reference_optimum(p);
  const double scale = std::max(1.0, ref.x.norm());
  CHECK(ref.residual <= 1e-12 * scale);
  CHECK(grad_fM(p, ref.x).norm() <= 1e-12 * scale);
  const Vec x0 = Vec::Zero(30);
  const Trace ig = igahd_rls_run(p, 3.0, 0.5, x0, x0, 2000, ref.value);
  const Trace fi = igahd_rls_run(p, 3.0, 0.0, x0, x0, 2000, ref.value);
  for (const Trace* t : {&ig, &fi}) {
    for (const auto& e : t->iters) CHECK(e.f_gap >= -1e-10);
    CHECK(t->iters.back().f_gap <= 1e-6 * t->iters.front().f_gap);
  }
}
