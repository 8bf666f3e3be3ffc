#pragma once

#include "hessdamp/special.hpp"

namespace hessdamp {

/// One eigenmode of the damped system on a quadratic,
///
///   x'' + (alpha/t + beta lambda) x' + lambda (b + gamma/t) x = 0,
///
/// written in Kummer form (xi != 0) or Bessel form (xi == 0):
///
///   xi    = sqrt(beta^2 lambda^2 - 4 b lambda)      (principal root)
///   kappa = lambda (gamma - alpha beta / 2) / xi
///   x(t)  = Re[c1 phi1(t) + c2 phi2(t)]
///   phi1  = exp(-(beta lambda - xi)(t - t_ref)/2) e^{-xi t} M(alpha/2 - kappa, alpha, xi t)
///   phi2  = exp(-(beta lambda + xi)(t - t_ref)/2) U(alpha/2 - kappa, alpha, xi t)
///
/// and in the Bessel case, with zeta = 2 sqrt(lambda (gamma - alpha beta/2)), nu = alpha - 1,
///
///   phi1 = t^{-nu/2} exp(-beta lambda (t - t_ref)/2) J_nu(zeta sqrt(t)),  phi2 likewise with Y_nu.
///
/// The exponential shifts only rescale c1, c2 and keep the basis representable
/// on long horizons.
struct ClosedFormSpec {
  double lambda_mode = 1.0;
  double alpha = 3.0;
  double beta = 0.0;
  double b = 1.0;
  double gamma_coef = 0.0;
  cplx xi = 0.0;
  cplx kappa = 0.0;
  double sigma = 1.0;  // (alpha - 1)/2
  cplx zeta = 0.0;
  cplx c1 = 0.0;
  cplx c2 = 0.0;
  double t_ref = 0.0;

  bool degenerate() const { return xi == cplx(0.0); }
};

/// Parameters and basis constants; c1 = c2 = 0.
ClosedFormSpec make_closed_form(double lambda, double alpha, double beta, double b, double gamma = 0.0,
                                double t_ref = 0.0);

/// Basis values phi1, phi2 and their t-derivatives.
struct BasisAt {
  cplx phi1, phi2, dphi1, dphi2;
};
BasisAt closed_form_basis(const ClosedFormSpec& cf, double t);

cplx closed_form_eval_complex(const ClosedFormSpec& cf, double t);
/// Real trajectory value; throws NumericalError when the imaginary residue exceeds 1e-8 relative.
double closed_form_eval(const ClosedFormSpec& cf, double t);
double closed_form_derivative(const ClosedFormSpec& cf, double t);

/// Solves for c1, c2 from x(t0), x'(t0) with t_ref = t0. Throws NumericalError
/// when the column-normalized 2x2 basis matrix has condition number above 1e10.
ClosedFormSpec fit_closed_form_ic(double lambda, double alpha, double beta, double b, double gamma, double t0,
                                  double x0, double xdot0);

struct AsymptoticRate {
  double exp_rate = 0.0;
  double poly_power = 0.0;
};

/// Dominant decay |x(t)| ~ t^{-poly} e^{-exp t} for gamma = 0.
AsymptoticRate asymptotic_rate(double lambda, double alpha, double beta, double b);

/// beta(t) = t^p, b(t) = c t^{p-1}. With tau = t^{1+p} the mode equation becomes the
/// constant-coefficient form above with
///   alpha' = (alpha+p)/(1+p), beta' = 1/(1+p), b' = 0, gamma' = c/(1+p)^2,
/// hence xi = lambda/(1+p), kappa = (c - (alpha+p)/2)/(1+p), sigma = (alpha'-1)/2.
struct RescaledParams {
  double beta_exp = 0.0;
  double alpha_p = 0.0;
  double hess_p = 1.0;
  double gamma_p = 0.0;
  double xi = 0.0;
  double kappa = 0.0;
  double sigma = 0.0;
};
RescaledParams rescaled_change_of_variable(double beta_exp, double c, double alpha, double lambda = 1.0);

struct RescaledClosedForm {
  double beta_exp = 0.0;
  ClosedFormSpec tau_form;  // in the tau variable
};

/// Fits the tau-form from x(t0), x'(t0); alpha' is nudged off integers by 1e-6.
RescaledClosedForm fit_rescaled_ic(double lambda, double alpha, double beta_exp, double c, double t0, double x0,
                                   double xdot0);
double rescaled_eval(const RescaledClosedForm& r, double t);

/// alpha + eps when alpha is an integer (the U basis needs a non-integer second parameter).
double perturb_if_integer(double alpha, double eps = 1e-6);

}  // namespace hessdamp
