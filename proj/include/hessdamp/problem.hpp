#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hessdamp/errors.hpp"

namespace hessdamp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Convex objective with gradient and optional curvature information.
///
/// L, opt_value and opt_point are optional: consumers that need them check at
/// configuration time and throw ConfigError when they are missing.
struct SmoothConvexProblem {
  int dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Vec(const Vec&, const Vec&)> hess_vec;  // may be empty
  std::optional<double> lipschitz;
  double strong_modulus = 0.0;
  std::optional<double> opt_value;
  std::optional<Vec> opt_point;
  /// Constant Hessian of a quadratic; with opt_point it gives grad f(x) = H (x - x*) without allocation.
  std::optional<Mat> hessian;

  /// Exact prox of tau*f when a closed form is known (quadratics).
  std::function<Vec(const Vec&, double)> prox;

  /// hess_vec when available, otherwise central differences of the gradient
  /// with step 1e-6 * (1 + |x|).
  Vec hessian_times(const Vec& x, const Vec& v) const;

  double gap(const Vec& x) const;
};

/// Possibly non-smooth convex function given through its prox.
struct ProxFriendlyFunction {
  std::string tag;
  std::function<double(const Vec&)> value;  // may return +inf
  std::function<Vec(const Vec&, double)> prox;  // prox_{lambda f}(x)
  double strong_modulus = 0.0;
  std::optional<double> opt_value;
  std::optional<Vec> opt_point;
};

/// f(x) = 1/2 <Q (x - shift), x - shift>,  Q = basis diag(eigenvalues) basis^T.
struct QuadraticSpec {
  std::vector<double> eigenvalues;
  std::optional<Mat> basis;  // orthogonal; identity when absent
  Vec shift;                 // empty means zero
};

SmoothConvexProblem make_quadratic(const QuadraticSpec& spec);
SmoothConvexProblem make_quadratic(const std::vector<double>& eigenvalues, const Vec& shift);

/// 2x2 rotation by the given angle (radians).
Mat rotation2d(double angle);

/// Largest eigenvalue of A^T A by power iteration (relative change < 1e-13).
double spectral_norm_sq(const Mat& A, int max_iter = 10000);

/// 1/2 |y - A x|^2 + g(x) with the metric M = s^{-1} I - A^T A.
class CompositeRLS {
 public:
  CompositeRLS(Mat A, Vec y, ProxFriendlyFunction regularizer, double s);

  const Mat& A() const noexcept { return A_; }
  const Vec& y() const noexcept { return y_; }
  const ProxFriendlyFunction& regularizer() const noexcept { return g_; }
  double step() const noexcept { return s_; }
  double opnorm_sq() const noexcept { return opnorm_sq_; }
  int rows() const noexcept { return static_cast<int>(A_.rows()); }
  int cols() const noexcept { return static_cast<int>(A_.cols()); }

  double value(const Vec& x) const;
  double smooth_value(const Vec& x) const;
  Vec smooth_gradient(const Vec& x) const;
  double metric_norm_sq(const Vec& v) const;
  /// M v
  Vec apply_metric(const Vec& v) const;

 private:
  void check_dim(const Vec& x, const char* what) const;

  Mat A_;
  Vec y_;
  ProxFriendlyFunction g_;
  double s_;
  double opnorm_sq_;
};

inline double composite_value(const CompositeRLS& p, const Vec& x) { return p.value(x); }
inline double metric_norm_sq(const CompositeRLS& p, const Vec& v) { return p.metric_norm_sq(v); }

}  // namespace hessdamp
