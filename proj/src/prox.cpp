#include "hessdamp/prox.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hessdamp {

namespace {

void require_nonneg(double lambda, const char* who) {
  if (!(lambda >= 0.0)) {
    std::ostringstream os;
    os << who << ": lambda must be >= 0, got " << lambda;
    throw ConfigError(os.str());
  }
}

void require_pos(double lambda, const char* who) {
  if (!(lambda > 0.0)) {
    std::ostringstream os;
    os << who << ": lambda must be > 0, got " << lambda;
    throw ConfigError(os.str());
  }
}

}  // namespace

Vec prox_l1(const Vec& x, double lambda) {
  require_nonneg(lambda, "prox_l1");
  Vec z(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]) - lambda;
    z[i] = a > 0.0 ? std::copysign(a, x[i]) : 0.0;
  }
  return z;
}

void validate_partition(const Groups& groups, int n) {
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& g : groups) {
    for (int i : g) {
      if (i < 0 || i >= n) throw ConfigError("group index out of range");
      if (seen[static_cast<std::size_t>(i)]++) throw ConfigError("groups overlap");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      std::ostringstream os;
      os << "groups do not cover index " << i;
      throw ConfigError(os.str());
    }
  }
}

Vec prox_group_l1l2(const Vec& x, const Groups& groups, double lambda) {
  require_nonneg(lambda, "prox_group_l1l2");
  validate_partition(groups, static_cast<int>(x.size()));
  Vec z = Vec::Zero(x.size());
  for (const auto& g : groups) {
    double nrm2 = 0.0;
    for (int i : g) nrm2 += x[i] * x[i];
    const double nrm = std::sqrt(nrm2);
    if (nrm <= lambda || nrm == 0.0) continue;
    const double scale = 1.0 - lambda / nrm;
    for (int i : g) z[i] = scale * x[i];
  }
  return z;
}

double tv1d(const Vec& x) {
  double t = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) t += std::abs(x[i + 1] - x[i]);
  return t;
}

// L. Condat, "A direct algorithm for 1D total variation denoising" (2013).
Vec prox_tv1d(const Vec& input, double lambda) {
  require_nonneg(lambda, "prox_tv1d");
  const int width = static_cast<int>(input.size());
  Vec output(width);
  if (width == 0) return output;
  if (lambda == 0.0) return input;

  int k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = lambda, umax = -lambda;
  double vmin = input[0] - lambda, vmax = input[0] + lambda;
  const double twolambda = 2.0 * lambda;
  const double minlambda = -lambda;

  for (;;) {
    while (k == width - 1) {
      if (umin < 0.0) {
        do output[k0++] = vmin; while (k0 <= kminus);
        kminus = k = k0;
        vmin = input[kminus];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        do output[k0++] = vmax; while (k0 <= kplus);
        kplus = k = k0;
        vmax = input[kplus];
        umax = minlambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / (k - k0 + 1);
        do output[k0++] = vmin; while (k0 <= k);
        return output;
      }
    }
    if ((umin += input[k + 1] - vmin) < minlambda) {
      do output[k0++] = vmin; while (k0 <= kminus);
      kplus = kminus = k = k0;
      vmin = input[k];
      vmax = vmin + twolambda;
      umin = lambda;
      umax = minlambda;
    } else if ((umax += input[k + 1] - vmax) > lambda) {
      do output[k0++] = vmax; while (k0 <= kplus);
      kplus = kminus = k = k0;
      vmax = input[k];
      vmin = vmax - twolambda;
      umin = lambda;
      umax = minlambda;
    } else {
      ++k;
      if (umin >= lambda) {
        kminus = k;
        vmin += (umin - lambda) / (kminus - k0 + 1);
        umin = lambda;
      }
      if (umax <= minlambda) {
        kplus = k;
        vmax += (umax + lambda) / (kplus - k0 + 1);
        umax = minlambda;
      }
    }
  }
}

Mat prox_nuclear(const Mat& X, double lambda) {
  require_nonneg(lambda, "prox_nuclear");
  if (X.size() == 0) return X;
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("prox_nuclear: SVD failed");
  Vec sig = svd.singularValues();
  for (Eigen::Index i = 0; i < sig.size(); ++i) sig[i] = std::max(sig[i] - lambda, 0.0);
  return svd.matrixU() * sig.asDiagonal() * svd.matrixV().transpose();
}

ProxFriendlyFunction zero_function() {
  ProxFriendlyFunction f;
  f.tag = "zero";
  f.value = [](const Vec&) { return 0.0; };
  f.prox = [](const Vec& x, double) -> Vec { return x; };
  f.opt_value = 0.0;
  return f;
}

ProxFriendlyFunction l1_norm(double weight) {
  require_nonneg(weight, "l1_norm");
  ProxFriendlyFunction f;
  f.tag = "l1";
  f.value = [weight](const Vec& x) { return weight * x.lpNorm<1>(); };
  f.prox = [weight](const Vec& x, double lambda) { return prox_l1(x, lambda * weight); };
  f.opt_value = 0.0;
  return f;
}

ProxFriendlyFunction group_l1l2_norm(Groups groups, double weight) {
  require_nonneg(weight, "group_l1l2_norm");
  ProxFriendlyFunction f;
  f.tag = "group-l1l2";
  f.value = [groups, weight](const Vec& x) {
    double v = 0.0;
    for (const auto& g : groups) {
      double s = 0.0;
      for (int i : g) s += x[i] * x[i];
      v += std::sqrt(s);
    }
    return weight * v;
  };
  f.prox = [groups, weight](const Vec& x, double lambda) { return prox_group_l1l2(x, groups, lambda * weight); };
  f.opt_value = 0.0;
  return f;
}

ProxFriendlyFunction tv1d_norm(double weight) {
  require_nonneg(weight, "tv1d_norm");
  ProxFriendlyFunction f;
  f.tag = "tv1d";
  f.value = [weight](const Vec& x) { return weight * tv1d(x); };
  f.prox = [weight](const Vec& x, double lambda) { return prox_tv1d(x, lambda * weight); };
  f.opt_value = 0.0;
  return f;
}

ProxFriendlyFunction nuclear_norm(int N, double weight) {
  require_nonneg(weight, "nuclear_norm");
  if (N <= 0) throw ConfigError("nuclear_norm: N must be positive");
  ProxFriendlyFunction f;
  f.tag = "nuclear";
  f.value = [N, weight](const Vec& x) {
    if (x.size() != static_cast<Eigen::Index>(N) * N) throw DimensionError("nuclear_norm: size != N^2");
    Eigen::Map<const Mat> X(x.data(), N, N);
    Eigen::JacobiSVD<Mat> svd(X);
    return weight * svd.singularValues().sum();
  };
  f.prox = [N, weight](const Vec& x, double lambda) -> Vec {
    if (x.size() != static_cast<Eigen::Index>(N) * N) throw DimensionError("nuclear_norm: size != N^2");
    Eigen::Map<const Mat> X(x.data(), N, N);
    const Mat Z = prox_nuclear(X, lambda * weight);
    return Eigen::Map<const Vec>(Z.data(), Z.size());
  };
  f.opt_value = 0.0;
  return f;
}

ProxFriendlyFunction half_sq_norm(double mu) {
  require_nonneg(mu, "half_sq_norm");
  ProxFriendlyFunction f;
  f.tag = "half-sq";
  f.value = [mu](const Vec& x) { return 0.5 * mu * x.squaredNorm(); };
  f.prox = [mu](const Vec& x, double lambda) -> Vec { return x / (1.0 + lambda * mu); };
  f.strong_modulus = mu;
  f.opt_value = 0.0;
  return f;
}

ProxFriendlyFunction l1_plus_half_sq() {
  ProxFriendlyFunction f;
  f.tag = "l1+half-sq";
  f.value = [](const Vec& x) { return x.lpNorm<1>() + 0.5 * x.squaredNorm(); };
  // minimizer of lambda(|z|_1 + |z|^2/2) + |z-x|^2/2
  f.prox = [](const Vec& x, double lambda) -> Vec { return prox_l1(x, lambda) / (1.0 + lambda); };
  f.strong_modulus = 1.0;
  f.opt_value = 0.0;
  return f;
}

EnvelopeView::EnvelopeView(ProxFriendlyFunction base, double lambda) : base_(std::move(base)), lambda_(lambda) {
  require_pos(lambda, "EnvelopeView");
}

double EnvelopeView::value_at(const Vec& x) const {
  const Vec p = base_.prox(x, lambda_);
  return base_.value(p) + (x - p).squaredNorm() / (2.0 * lambda_);
}

Vec EnvelopeView::gradient_at(const Vec& x) const { return (x - base_.prox(x, lambda_)) / lambda_; }

Vec EnvelopeView::prox(const Vec& x, double theta) const {
  if (theta == 0.0) return x;
  require_pos(theta, "prox_of_envelope");
  const double sum = lambda_ + theta;
  return (lambda_ / sum) * x + (theta / sum) * base_.prox(x, sum);
}

double EnvelopeView::strong_modulus() const { return envelope_strong_modulus(base_.strong_modulus, lambda_); }

SmoothConvexProblem EnvelopeView::as_smooth_problem(int dim) const {
  SmoothConvexProblem p;
  p.dim = dim;
  auto self = *this;
  p.value = [self](const Vec& x) { return self.value_at(x); };
  p.gradient = [self](const Vec& x) { return self.gradient_at(x); };
  p.prox = [self](const Vec& x, double theta) { return self.prox(x, theta); };
  p.lipschitz = 1.0 / lambda_;
  p.strong_modulus = strong_modulus();
  p.opt_value = base_.opt_value;
  p.opt_point = base_.opt_point;
  return p;
}

ProxFriendlyFunction EnvelopeView::as_prox_friendly() const {
  ProxFriendlyFunction f;
  f.tag = "envelope(" + base_.tag + ")";
  auto self = *this;
  f.value = [self](const Vec& x) { return self.value_at(x); };
  f.prox = [self](const Vec& x, double theta) { return self.prox(x, theta); };
  f.strong_modulus = strong_modulus();
  f.opt_value = base_.opt_value;
  f.opt_point = base_.opt_point;
  return f;
}

double envelope_value(const EnvelopeView& e, const Vec& x) { return e.value_at(x); }
Vec envelope_gradient(const EnvelopeView& e, const Vec& x) { return e.gradient_at(x); }
Vec prox_of_envelope(const EnvelopeView& e, double theta, const Vec& x) { return e.prox(x, theta); }

double envelope_strong_modulus(double mu, double lambda) {
  require_pos(lambda, "envelope_strong_modulus");
  require_nonneg(mu, "envelope_strong_modulus");
  return mu / (1.0 + lambda * mu);
}

Vec prox_metric_M(const CompositeRLS& p, const Vec& x) {
  if (x.size() != p.cols()) throw DimensionError("prox_metric_M: dimension mismatch");
  const double s = p.step();
  const Vec fwd = x + s * (p.A().transpose() * (p.y() - p.A() * x));
  return p.regularizer().prox(fwd, s);
}

Vec grad_fM(const CompositeRLS& p, const Vec& x) { return x - prox_metric_M(p, x); }

}  // namespace hessdamp
