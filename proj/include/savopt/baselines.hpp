#pragma once

#include "savopt/common.hpp"
#include "savopt/objective.hpp"
#include "savopt/operators.hpp"
#include "savopt/trace.hpp"

namespace savopt {

struct NagState {
  Vec theta;
  Vec velocity;  // starts at zero
  double gamma = 0.9;
  double lr = 0.0;
  std::int64_t k = 0;
};

struct AdamState {
  Vec theta;
  Vec m;  // first moment, starts at zero
  Vec v;  // second moment, starts at zero
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lr = 0.0;
  std::int64_t t = 0;  // completed steps; bias correction uses t+1
};

struct BaselineStep {
  Vec theta;
  TraceRecord trace;
};

struct NagStep {
  NagState state;
  TraceRecord trace;
};

struct AdamStep {
  AdamState state;
  TraceRecord trace;
};

NagState init_nag_state(Vec theta0, double lr, double gamma = 0.9);
AdamState init_adam_state(Vec theta0, double lr, double beta1 = 0.9, double beta2 = 0.999,
                          double eps = 1e-8);

/// theta' = theta - dt (I + dt L)^{-1} grad f(theta); vanilla GD when L = 0.
BaselineStep gd_step(const Vec& theta, std::int64_t k, Objective& obj, const LinearOperator& op,
                     double dt);

/// Lookahead form: v' = gamma v + lr grad f(theta - gamma v); theta' = theta - v'.
NagStep nag_step(const NagState& s, Objective& obj);

/// Bias-corrected Adam update.
AdamStep adam_step(const AdamState& s, Objective& obj);

/// Exact line search along -grad f for objectives with quartic rays: picks the
/// nonnegative global minimizer of phi(alpha) = f(theta - alpha grad f).
BaselineStep steepest_descent_step(const Vec& theta, std::int64_t k, Objective& obj);

/// Global minimizer over alpha >= 0 of a quartic ray with phi'(0) <= 0.
double minimize_quartic_ray(const Quartic& q);

}  // namespace savopt
