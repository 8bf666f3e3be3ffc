#include "hessdamp/closed_form.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "hessdamp/errors.hpp"

namespace hessdamp {

namespace {

bool is_degenerate(double disc, double scale) { return std::abs(disc) <= 1e-12 * scale; }

}  // namespace

double perturb_if_integer(double alpha, double eps) {
  return std::floor(alpha) == alpha ? alpha + eps : alpha;
}

ClosedFormSpec make_closed_form(double lambda, double alpha, double beta, double b, double gamma, double t_ref) {
  if (!(lambda > 0.0)) throw ConfigError("closed form: lambda must be > 0");
  if (!(alpha > 0.0)) throw ConfigError("closed form: alpha must be > 0");
  ClosedFormSpec cf;
  cf.lambda_mode = lambda;
  cf.alpha = alpha;
  cf.beta = beta;
  cf.b = b;
  cf.gamma_coef = gamma;
  cf.sigma = 0.5 * (alpha - 1.0);
  cf.t_ref = t_ref;
  const double bl = beta * lambda;
  const double disc = bl * bl - 4.0 * b * lambda;
  const double shifted = lambda * (gamma - 0.5 * alpha * beta);
  cf.zeta = 2.0 * std::sqrt(cplx(shifted, 0.0));
  if (is_degenerate(disc, std::max(bl * bl, std::abs(4.0 * b * lambda)))) {
    cf.xi = 0.0;
    cf.kappa = 0.0;
    if (cf.zeta == cplx(0.0)) throw DomainError("closed form: xi = 0 and zeta = 0 is not supported");
  } else {
    cf.xi = std::sqrt(cplx(disc, 0.0));
    cf.kappa = shifted / cf.xi;
  }
  return cf;
}

BasisAt closed_form_basis(const ClosedFormSpec& cf, double t) {
  if (!(t > 0.0)) throw DomainError("closed form: t must be > 0");
  const double bl = cf.beta * cf.lambda_mode;
  const double dt = t - cf.t_ref;
  BasisAt r;
  if (!cf.degenerate()) {
    const cplx xi = cf.xi;
    const cplx a = 0.5 * cf.alpha - cf.kappa;
    const double bb = cf.alpha;
    const cplx z = xi * t;
    const cplx e1 = std::exp(-(bl - xi) * dt / 2.0);
    const cplx e2 = std::exp(-(bl + xi) * dt / 2.0);
    const cplx ms = kummer_m_scaled(a, bb, z);
    const cplx ms1 = kummer_m_scaled(a + 1.0, bb + 1.0, z);
    r.phi1 = e1 * ms;
    r.dphi1 = e1 * (-(bl - xi) / 2.0 * ms + xi * ((a / bb) * ms1 - ms));
    if (std::abs(e2) == 0.0) {
      r.phi2 = 0.0;
      r.dphi2 = 0.0;
    } else {
      const cplx u = kummer_u(a, bb, z);
      const cplx u1 = kummer_u(a + 1.0, bb + 1.0, z);
      r.phi2 = e2 * u;
      r.dphi2 = e2 * (-(bl + xi) / 2.0 * u - xi * a * u1);
    }
    return r;
  }
  const double nu = cf.alpha - 1.0;
  const double s = std::sqrt(t);
  const cplx arg = cf.zeta * s;
  const double pre = std::pow(t, -0.5 * nu) * std::exp(-bl * dt / 2.0);
  const cplx darg = cf.zeta / (2.0 * s);
  const double lead = -0.5 * nu / t - 0.5 * bl;
  const cplx J = bessel_j(nu, arg);
  const cplx dJ = 0.5 * (bessel_j(nu - 1.0, arg) - bessel_j(nu + 1.0, arg));
  const cplx Y = bessel_y(nu, arg);
  const cplx dY = 0.5 * (bessel_y(nu - 1.0, arg) - bessel_y(nu + 1.0, arg));
  r.phi1 = pre * J;
  r.dphi1 = pre * (lead * J + dJ * darg);
  r.phi2 = pre * Y;
  r.dphi2 = pre * (lead * Y + dY * darg);
  return r;
}

cplx closed_form_eval_complex(const ClosedFormSpec& cf, double t) {
  if (!(t > 0.0)) throw DomainError("closed form: t must be > 0");
  if (cf.c1 == cplx(0.0) && cf.c2 == cplx(0.0)) return 0.0;
  const BasisAt r = closed_form_basis(cf, t);
  cplx v = 0.0;
  if (cf.c1 != cplx(0.0)) v += cf.c1 * r.phi1;
  if (cf.c2 != cplx(0.0)) v += cf.c2 * r.phi2;
  return v;
}

double closed_form_eval(const ClosedFormSpec& cf, double t) {
  if (!(t > 0.0)) throw DomainError("closed form: t must be > 0");
  if (cf.c1 == cplx(0.0) && cf.c2 == cplx(0.0)) return 0.0;
  const BasisAt r = closed_form_basis(cf, t);
  const cplx p1 = cf.c1 == cplx(0.0) ? cplx(0.0) : cf.c1 * r.phi1;
  const cplx p2 = cf.c2 == cplx(0.0) ? cplx(0.0) : cf.c2 * r.phi2;
  const cplx v = p1 + p2;
  const double scale = std::abs(p1) + std::abs(p2);
  if (std::abs(v.imag()) > 1e-8 * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "closed form: imaginary residue " << v.imag() << " at t = " << t << " (scale " << scale << ")";
    throw NumericalError(os.str());
  }
  return v.real();
}

double closed_form_derivative(const ClosedFormSpec& cf, double t) {
  if (!(t > 0.0)) throw DomainError("closed form: t must be > 0");
  if (cf.c1 == cplx(0.0) && cf.c2 == cplx(0.0)) return 0.0;
  const BasisAt r = closed_form_basis(cf, t);
  cplx d = 0.0;
  if (cf.c1 != cplx(0.0)) d += cf.c1 * r.dphi1;
  if (cf.c2 != cplx(0.0)) d += cf.c2 * r.dphi2;
  return d.real();
}

ClosedFormSpec fit_closed_form_ic(double lambda, double alpha, double beta, double b, double gamma, double t0,
                                  double x0, double xdot0) {
  ClosedFormSpec cf = make_closed_form(lambda, alpha, beta, b, gamma, t0);
  if (x0 == 0.0 && xdot0 == 0.0) return cf;
  const BasisAt r = closed_form_basis(cf, t0);
  Eigen::Matrix2cd A;
  A << r.phi1, r.phi2, r.dphi1, r.dphi2;
  const double n1 = A.col(0).norm(), n2 = A.col(1).norm();
  if (!(n1 > 0.0) || !(n2 > 0.0) || !std::isfinite(n1) || !std::isfinite(n2))
    throw NumericalError("fit_closed_form_ic: basis vanishes or overflows at t0");
  A.col(0) /= n1;
  A.col(1) /= n2;
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(A);
  const auto sv = svd.singularValues();
  const double cond = sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e10)) {
    std::ostringstream os;
    os << "fit_closed_form_ic: basis is ill-conditioned at t0, condition estimate " << cond;
    throw NumericalError(os.str());
  }
  Eigen::Vector2cd rhs(x0, xdot0);
  const Eigen::Vector2cd c = A.fullPivLu().solve(rhs);
  cf.c1 = c(0) / n1;
  cf.c2 = c(1) / n2;
  return cf;
}

AsymptoticRate asymptotic_rate(double lambda, double alpha, double beta, double b) {
  if (!(lambda > 0.0) || !(beta >= 0.0) || !(b >= 0.0)) throw ConfigError("asymptotic_rate: need lambda > 0, beta, b >= 0");
  const double bl = beta * lambda;
  const double disc = bl * bl - 4.0 * b * lambda;
  AsymptoticRate r;
  if (is_degenerate(disc, std::max(bl * bl, 4.0 * b * lambda))) {
    r.exp_rate = 0.5 * bl;
    r.poly_power = (2.0 * alpha - 1.0) / 4.0;
  } else if (disc > 0.0) {
    const double xi = std::sqrt(disc);
    r.exp_rate = 0.5 * (bl - xi);
    const double kappa = -lambda * alpha * beta / (2.0 * xi);
    r.poly_power = 0.5 * alpha - std::abs(kappa);
  } else {
    r.exp_rate = 0.5 * bl;
    r.poly_power = 0.5 * alpha;
  }
  return r;
}

RescaledParams rescaled_change_of_variable(double beta_exp, double c, double alpha, double lambda) {
  if (!(beta_exp >= 0.0) || !(c > 0.0)) throw ConfigError("rescaled_change_of_variable: need beta_exp >= 0, c > 0");
  RescaledParams r;
  const double q = 1.0 + beta_exp;
  r.beta_exp = beta_exp;
  r.alpha_p = (alpha + beta_exp) / q;
  r.hess_p = 1.0 / q;
  r.gamma_p = c / (q * q);
  r.xi = lambda / q;
  r.kappa = (c - 0.5 * (alpha + beta_exp)) / q;
  r.sigma = 0.5 * (r.alpha_p - 1.0);
  return r;
}

RescaledClosedForm fit_rescaled_ic(double lambda, double alpha, double beta_exp, double c, double t0, double x0,
                                   double xdot0) {
  if (!(t0 > 0.0)) throw ConfigError("fit_rescaled_ic: t0 must be > 0");
  const RescaledParams p = rescaled_change_of_variable(beta_exp, c, alpha, lambda);
  const double q = 1.0 + beta_exp;
  const double tau0 = std::pow(t0, q);
  const double dtau0 = xdot0 / (q * std::pow(t0, beta_exp));
  RescaledClosedForm r;
  r.beta_exp = beta_exp;
  r.tau_form = fit_closed_form_ic(lambda, perturb_if_integer(p.alpha_p), p.hess_p, 0.0, p.gamma_p, tau0, x0, dtau0);
  return r;
}

double rescaled_eval(const RescaledClosedForm& r, double t) {
  return closed_form_eval(r.tau_form, std::pow(t, 1.0 + r.beta_exp));
}

}  // namespace hessdamp
