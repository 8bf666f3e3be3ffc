#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hessdamp/problem.hpp"
#include "hessdamp/prox.hpp"

namespace hessdamp {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One iterate of a discrete run.
struct IterTrace {
  int k = 0;
  Vec x;
  double value = kNaN;      // f(x_k), or the reported objective for NS/RLS runs
  double f_gap = kNaN;      // value - min f
  double grad_norm = kNaN;  // |grad f(x_k)| (envelope gradient for NS runs)
  double energy = kNaN;     // Lyapunov energy E_k where defined
  std::optional<Vec> y;     // extrapolated point of step k, when the method has one
  double grad_norm_y = kNaN;
};

struct Trace {
  std::string label;
  std::vector<IterTrace> iters;
  bool hypotheses_checked = true;
  /// f_gap measured against the best value seen, not a known optimum.
  bool empirical_gap = false;
  /// Largest inner-solver residual when a prox had to be computed iteratively.
  double max_prox_residual = 0.0;
  /// Indices k where the run left its theorem's hypotheses (e.g. delta_k <= 0).
  std::vector<int> flagged;
};

/// Raised when an iterate becomes NaN/Inf; carries the trace up to that point.
class IterateBlowup : public NumericalError {
 public:
  IterateBlowup(const std::string& what, Trace prefix) : NumericalError(what), prefix_(std::move(prefix)) {}
  const Trace& prefix() const noexcept { return prefix_; }

 private:
  Trace prefix_;
};

enum class Validation { strict, unchecked };

// ---------------------------------------------------------------------------
// IGAHD and FISTA

struct IGAHDConfig {
  double alpha = 3.0;
  double beta = 0.0;
  double s = 1.0;
  int start_index = 1;
  int max_iter = 1000;
  Validation validation = Validation::strict;
  bool store_iterates = true;
};

/// alpha >= 3, 0 <= beta < 2 sqrt(s), s <= 1/L.
void validate(const IGAHDConfig& cfg, std::optional<double> lipschitz);

/// Entries k = k0-1 .. max_iter; entry k carries x_k, y_k and E_k.
Trace igahd_run(const SmoothConvexProblem& problem, const IGAHDConfig& cfg, const Vec& x0, const Vec& x1);

/// E_k = t_k^2 (f(x_k) - f*) + |v_k|^2 / (2s),
/// v_k = (x_{k-1} - x*) + t_k (x_k - x_{k-1} + beta sqrt(s) grad f(x_{k-1})),  t_k = (k-1)/(alpha-1).
double igahd_energy(const SmoothConvexProblem& problem, const IGAHDConfig& cfg, const Vec& x_prev, const Vec& x_cur,
                    int k);

/// IGAHD with beta = 0.
Trace fista_run(const SmoothConvexProblem& problem, double alpha, double s, const Vec& x0, const Vec& x1,
                int max_iter = 1000);

/// IGAHD applied to the metric envelope f_M of a composite RLS problem (unit step in the metric M).
/// Reports f(prox^M_f(x_k)) - f_ref as the gap.
Trace igahd_rls_run(const CompositeRLS& p, double alpha, double beta, const Vec& x0, const Vec& x1, int max_iter,
                    double f_ref);

/// Forward-backward reference solve: accelerated with gradient restart until the
/// fixed-point residual |x - prox^M(x)| <= tol or max_iter.
struct ReferenceOptimum {
  Vec x;
  double value = kNaN;
  double residual = kNaN;
  int iterations = 0;
};
ReferenceOptimum rls_reference_optimum(const CompositeRLS& p, double tol = 1e-12, int max_iter = 1000000);

// ---------------------------------------------------------------------------
// IPAHD (general convex, proximal)

struct IPAHDConfig {
  double alpha = 3.0;
  std::function<double(int)> beta_schedule = [](int) { return 0.0; };
  std::function<double(int)> b_schedule = [](int) { return 1.0; };
  double h = 1.0;  // s = h^2
  int max_iter = 1000;
  double lambda = 0.0;  // envelope index, NS variant only
  Validation validation = Validation::strict;
};

/// mu_k = k/(k+alpha) (beta_k sqrt(s) + s b_k)
double ipahd_mu(const IPAHDConfig& cfg, int k);

/// delta_k = h (b_k h k - beta_{k+1} - k (beta_{k+1} - beta_k)) (k+1)
double ipahd_delta(const IPAHDConfig& cfg, int k);

struct DiscreteGrowth {
  bool G2dis = false;
  bool G3dis = false;
};
DiscreteGrowth check_growth_discrete(const IPAHDConfig& cfg, double alpha, int k);

/// x_{k+1} = prox_{mu_k f}(y_k). Uses problem.prox when present; otherwise an
/// inner gradient solver (needs L) whose residual is logged in the trace.
Trace ipahd_run(const SmoothConvexProblem& problem, const IPAHDConfig& cfg, const Vec& x0, const Vec& x1);

/// Relaxed proximal form of IPAHD on the Moreau envelope f_lambda.
Trace ipahd_ns_run(const ProxFriendlyFunction& f, const IPAHDConfig& cfg, const Vec& x0, const Vec& x1);

// ---------------------------------------------------------------------------
// Strongly convex variants

enum class SCVariant { prox, prox_ns, grad };

struct SCConfig {
  double mu = 1.0;
  double beta = 0.0;
  double s = 1.0;
  SCVariant variant = SCVariant::prox;
  double lambda = 0.0;  // prox_ns only
  int max_iter = 500;
  Validation validation = Validation::strict;

  /// Modulus the rates are stated with (mu/(1+lambda mu) for prox_ns).
  double effective_mu() const;
  /// q = 1/(1 + sqrt(mu s)/2)
  double q() const;
  /// theta = 1/(1 + sqrt(mu s))
  double theta() const;
};

/// Throws ConfigError naming the failed inequality.
void validate(const SCConfig& cfg, std::optional<double> lipschitz);

Trace ipahd_sc_run(const SmoothConvexProblem& problem, const SCConfig& cfg, const Vec& x0, const Vec& x1);
Trace ipahd_ns_sc_run(const ProxFriendlyFunction& f, const SCConfig& cfg, const Vec& x0, const Vec& x1);
Trace igahd_sc_run(const SmoothConvexProblem& problem, const SCConfig& cfg, const Vec& x0, const Vec& x1);

/// S_k = theta^k sum_{j <= k-2} theta^{-j} |grad f(x_j)|^2, one value per trace entry.
std::vector<double> theta_weighted_gradient_sum(const Trace& trace, double theta);

/// f(x) + <grad f(y), y-x> - s/2 |grad f(y)|^2 - s/2 |grad f(x) - grad f(y)|^2 - f(y - s grad f(y)).
/// Nonnegative whenever s L <= 1.
double descent_lemma_check(const SmoothConvexProblem& problem, const Vec& x, const Vec& y, double s);

/// Smallest trace position from which energy never increases by more than slack.
/// Returns the trace size when the last step still increases.
std::size_t energy_monotone_from(const Trace& trace, double slack);

/// Replaces f_gap by value - best, where best is the smallest value over all traces.
void rebase_empirical_gap(std::vector<Trace*> traces);

}  // namespace hessdamp
