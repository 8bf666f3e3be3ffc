#include "hessdamp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hessdamp {

Vec SmoothConvexProblem::hessian_times(const Vec& x, const Vec& v) const {
  if (hess_vec) return hess_vec(x, v);
  const double h = 1e-6 * (1.0 + x.norm());
  return (gradient(x + h * v) - gradient(x - h * v)) / (2.0 * h);
}

double SmoothConvexProblem::gap(const Vec& x) const {
  if (!opt_value) throw ConfigError("problem has no known optimal value");
  return value(x) - *opt_value;
}

Mat rotation2d(double angle) {
  Mat r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

SmoothConvexProblem make_quadratic(const QuadraticSpec& spec) {
  const int n = static_cast<int>(spec.eigenvalues.size());
  if (n == 0) throw ConfigError("quadratic needs at least one eigenvalue");
  for (double lam : spec.eigenvalues) {
    if (!(lam >= 0.0)) {
      std::ostringstream os;
      os << "negative eigenvalue " << lam << " in quadratic";
      throw ConfigError(os.str());
    }
  }
  Vec shift = spec.shift.size() == 0 ? Vec::Zero(n) : spec.shift;
  if (shift.size() != n) throw DimensionError("quadratic shift has wrong dimension");

  Vec lam = Eigen::Map<const Vec>(spec.eigenvalues.data(), n);
  Mat Q;
  Mat basis;
  if (spec.basis) {
    basis = *spec.basis;
    if (basis.rows() != n || basis.cols() != n) throw DimensionError("quadratic basis has wrong shape");
    if (!(basis.transpose() * basis).isIdentity(1e-10)) throw ConfigError("quadratic basis is not orthogonal");
    Q = basis * lam.asDiagonal() * basis.transpose();
  } else {
    basis = Mat::Identity(n, n);
    Q = lam.asDiagonal();
  }

  SmoothConvexProblem p;
  p.dim = n;
  p.value = [Q, shift](const Vec& x) {
    const Vec d = x - shift;
    return 0.5 * d.dot(Q * d);
  };
  p.gradient = [Q, shift](const Vec& x) -> Vec { return Q * (x - shift); };
  p.hess_vec = [Q](const Vec&, const Vec& v) -> Vec { return Q * v; };
  // prox_{tau f}(y) = shift + B diag(1/(1+tau lam)) B^T (y - shift)
  p.prox = [basis, lam, shift](const Vec& y, double tau) -> Vec {
    const Vec c = basis.transpose() * (y - shift);
    const Vec scaled = c.cwiseQuotient((Vec::Ones(lam.size()) + tau * lam));
    return shift + basis * scaled;
  };
  p.lipschitz = lam.maxCoeff();
  p.hessian = Q;
  p.strong_modulus = lam.minCoeff();
  p.opt_value = 0.0;
  p.opt_point = shift;
  return p;
}

SmoothConvexProblem make_quadratic(const std::vector<double>& eigenvalues, const Vec& shift) {
  return make_quadratic(QuadraticSpec{eigenvalues, std::nullopt, shift});
}

double spectral_norm_sq(const Mat& A, int max_iter) {
  if (A.size() == 0) throw DimensionError("spectral_norm_sq: empty matrix");
  const Eigen::Index n = A.cols();
  // deterministic start with components along every direction
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = A.transpose() * (A * v);
    const double rq = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (it > 0 && std::abs(rq - est) <= 1e-13 * std::abs(rq)) {
      // Rayleigh quotient at the refined vector
      return (A * v).squaredNorm();
    }
    est = rq;
  }
  throw ConvergenceError("spectral_norm_sq: power iteration did not converge", est);
}

CompositeRLS::CompositeRLS(Mat A, Vec y, ProxFriendlyFunction regularizer, double s)
    : A_(std::move(A)), y_(std::move(y)), g_(std::move(regularizer)), s_(s) {
  if (A_.rows() != y_.size()) throw DimensionError("CompositeRLS: rows(A) != dim(y)");
  opnorm_sq_ = spectral_norm_sq(A_);
  if (!(s_ > 0.0) || !(s_ * opnorm_sq_ < 1.0)) {
    std::ostringstream os;
    os << "CompositeRLS: need 0 < s |A|^2 < 1, got s|A|^2 = " << s_ * opnorm_sq_;
    throw ConfigError(os.str());
  }
  if (A_.cols() <= 50) {
    const Mat M = Mat::Identity(A_.cols(), A_.cols()) / s_ - A_.transpose() * A_;
    Eigen::SelfAdjointEigenSolver<Mat> eig(M, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) throw ConfigError("CompositeRLS: metric M is not positive definite");
  }
}

void CompositeRLS::check_dim(const Vec& x, const char* what) const {
  if (x.size() != A_.cols()) {
    std::ostringstream os;
    os << what << ": expected dimension " << A_.cols() << ", got " << x.size();
    throw DimensionError(os.str());
  }
}

double CompositeRLS::smooth_value(const Vec& x) const {
  check_dim(x, "smooth_value");
  return 0.5 * (y_ - A_ * x).squaredNorm();
}

Vec CompositeRLS::smooth_gradient(const Vec& x) const {
  check_dim(x, "smooth_gradient");
  return A_.transpose() * (A_ * x - y_);
}

double CompositeRLS::value(const Vec& x) const {
  check_dim(x, "composite_value");
  const double gx = g_.value(x);
  if (std::isinf(gx)) return std::numeric_limits<double>::infinity();
  return 0.5 * (y_ - A_ * x).squaredNorm() + gx;
}

Vec CompositeRLS::apply_metric(const Vec& v) const {
  check_dim(v, "apply_metric");
  return v / s_ - A_.transpose() * (A_ * v);
}

double CompositeRLS::metric_norm_sq(const Vec& v) const {
  check_dim(v, "metric_norm_sq");
  return v.squaredNorm() / s_ - (A_ * v).squaredNorm();
}

}  // namespace hessdamp
