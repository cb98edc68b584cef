#pragma once

#include <optional>
#include <utility>

#include "savopt/common.hpp"
#include "savopt/objective.hpp"
#include "savopt/operators.hpp"
#include "savopt/trace.hpp"

namespace savopt {

/// State carried between SAV-family steps: the iterate, the auxiliary scalar
/// r, the current step size and the iteration counter. aux_ratio holds
/// r_tilde / sqrt(f(theta)+C) from the last completed step; it is the
/// stability signal the adaptive rule reacts to (1 at a fresh start).
struct SavState {
  Vec theta;
  double r = 0.0;
  double dt = 0.0;
  std::int64_t k = 0;
  double aux_ratio = 1.0;
};

struct RelaxParams {
  double eta = 0.99;  // relaxation dissipation share, in [0, 1]
};

struct AdaptiveParams {
  double dt0 = 0.1;
  double dt_min = 1e-6;
  double rho = 1.1;     // growth factor, > 1
  double gamma = 0.85;  // indicator threshold, in (0, 1)
};

struct QParams {
  double q = 0.5;        // auxiliary power, r ~ (f+C)^q
  bool restart = false;  // reset r to (f+C)^q at every step
};

struct WolfeParams {
  double c1 = 1e-4;
  double c2 = 0.9;
};

struct StepResult {
  SavState state;
  TraceRecord trace;
};

/// r0 = sqrt(f(theta0)+C).
SavState init_sav_state(Objective& obj, Vec theta0, double dt0);
/// r0 = (f(theta0)+C)^q.
SavState init_savq_state(Objective& obj, Vec theta0, double dt0, double q);

/// One step of the modified SAV scheme with operator preconditioning:
///   g = grad f(theta_k),  ghat = (I + dt L)^{-1} g,
///   r_{k+1} = r_k / (1 + dt (g, ghat) / (2 (f+C))),
///   theta_{k+1} = theta_k - dt (r_{k+1} / sqrt(f+C)) ghat.
StepResult modified_sav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                             double dt);

/// L = 0 special case (no linear solve); agrees bit-for-bit with
/// modified_sav_step under the Zero operator.
StepResult savgd_step(const SavState& s, Objective& obj, double dt);

/// modified_sav_step followed by the reset r_{k+1} = sqrt(f(theta_{k+1})+C).
StepResult msav_step(const SavState& s, Objective& obj, const LinearOperator& op, double dt);

/// Legacy scheme built on the splitting g(theta) = f(theta) - (L theta, theta)/2.
/// Kept to demonstrate that its fixed points need not satisfy grad f = 0.
StepResult legacy_sav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                           double c_g, double dt);

/// Relaxation coefficient: the smaller root of the admissibility quadratic,
/// clamped to [0, 1]; 0 when the quadratic degenerates or has no real root.
double compute_xi(double r_tilde, double r_k, double f_next_plus_c, double eta);

/// Relaxed SAV step: modified SAV followed by
///   r_{k+1} = xi r_tilde + (1 - xi) sqrt(f(theta_{k+1})+C).
StepResult rsav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                     const RelaxParams& relax, double dt);

/// Step-size controller on top of rsav_step: shrink dt by the indicator when
/// it falls below gamma (never under dt_min), otherwise grow by rho.
StepResult adaptive_rsav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                              const RelaxParams& relax, const AdaptiveParams& adapt);

/// q-generalized step, r ~ (f+C)^q. With q = 1/2, restart off and L = 0 this
/// collapses to savgd_step bit-for-bit.
StepResult rsavq_step(const SavState& s, Objective& obj, const LinearOperator& op,
                      const QParams& qp, double dt);

/// Restarted line-search form: P_k = -(I + dt L)^{-1} grad f and
/// alpha_k = dt / (1 + dt q (g, ghat)/(f+C)). With Wolfe parameters given,
/// halves dt (recomputing alpha only) until both conditions hold; throws
/// WolfeNotFound after 60 halvings.
StepResult linesearch_sav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                               const QParams& qp, double dt,
                               const std::optional<WolfeParams>& wolfe);

/// (sufficient_decrease, curvature) for the step theta + alpha*P.
std::pair<bool, bool> wolfe_check(Objective& obj, const Vec& theta, const Vec& P, double alpha,
                                  double c1, double c2);

/// Closed-form step sizes for f(theta) = ||A theta - b||^2 / 2: the large-dt
/// limit of the restarted q=1/2 step and the exact steepest-descent step.
struct QuadraticStepSizes {
  double alpha_sav_limit = std::numeric_limits<double>::quiet_NaN();
  double beta_steepest = std::numeric_limits<double>::quiet_NaN();
  bool at_minimum = false;
};
QuadraticStepSizes quadratic_alpha_oracle(const Mat& A, const Vec& b, const Vec& theta);

}  // namespace savopt
