#pragma once

#include <vector>

#include "hessdamp/problem.hpp"

namespace hessdamp {

using Groups = std::vector<std::vector<int>>;

// Proximal operators. All are exact (closed form or direct method).

/// Componentwise soft thresholding at level lambda.
Vec prox_l1(const Vec& x, double lambda);

/// Block soft thresholding; groups must partition {0..n-1}.
Vec prox_group_l1l2(const Vec& x, const Groups& groups, double lambda);

/// Exact minimizer of 1/2|z - x|^2 + lambda * sum_i |z_{i+1} - z_i|.
/// Direct taut-string style method (Condat's algorithm), no inner iterations.
Vec prox_tv1d(const Vec& x, double lambda);

/// Singular value soft thresholding via a full SVD.
Mat prox_nuclear(const Mat& X, double lambda);

/// Total variation sum_i |x_{i+1} - x_i|.
double tv1d(const Vec& x);

/// Throws ConfigError when groups do not partition {0..n-1}.
void validate_partition(const Groups& groups, int n);

// Function objects with their prox.

ProxFriendlyFunction zero_function();
ProxFriendlyFunction l1_norm(double weight = 1.0);
ProxFriendlyFunction group_l1l2_norm(Groups groups, double weight = 1.0);
ProxFriendlyFunction tv1d_norm(double weight = 1.0);
/// Nuclear norm of the N x N matrix stored column-major in a vector of size N^2.
ProxFriendlyFunction nuclear_norm(int N, double weight = 1.0);
/// (mu/2) |x|^2
ProxFriendlyFunction half_sq_norm(double mu = 1.0);
/// |x|_1 + 1/2 |x|^2, strongly convex with modulus 1.
ProxFriendlyFunction l1_plus_half_sq();

/// Moreau envelope f_lambda of a prox-friendly function.
///
///   f_lambda(x)        = f(p) + |x - p|^2 / (2 lambda),   p = prox_{lambda f}(x)
///   grad f_lambda(x)   = (x - p) / lambda
///   prox_{theta f_l}(x) = lambda/(lambda+theta) x + theta/(lambda+theta) prox_{(lambda+theta) f}(x)
///
/// The envelope is itself prox-friendly, so envelopes can be nested.
class EnvelopeView {
 public:
  EnvelopeView(ProxFriendlyFunction base, double lambda);

  const ProxFriendlyFunction& base() const noexcept { return base_; }
  double lambda() const noexcept { return lambda_; }

  double value_at(const Vec& x) const;
  Vec gradient_at(const Vec& x) const;
  Vec prox(const Vec& x, double theta) const;

  /// Strong convexity modulus of the envelope, mu / (1 + lambda mu).
  double strong_modulus() const;

  /// Smooth problem view: L = 1/lambda, modulus as above, prox attached.
  SmoothConvexProblem as_smooth_problem(int dim) const;
  ProxFriendlyFunction as_prox_friendly() const;

 private:
  ProxFriendlyFunction base_;
  double lambda_;
};

double envelope_value(const EnvelopeView& e, const Vec& x);
Vec envelope_gradient(const EnvelopeView& e, const Vec& x);
Vec prox_of_envelope(const EnvelopeView& e, double theta, const Vec& x);
double envelope_strong_modulus(double mu, double lambda);

/// prox^M_f(x) = prox_{s g}(x + s A^T (y - A x)): one forward-backward step.
Vec prox_metric_M(const CompositeRLS& p, const Vec& x);

/// Gradient of the metric envelope f_M in the metric M: x - prox^M_f(x).
Vec grad_fM(const CompositeRLS& p, const Vec& x);

}  // namespace hessdamp
