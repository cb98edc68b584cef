#include "savopt/sav.hpp"

#include <cmath>

namespace savopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pow_fc(double fc, double q) { return q == 0.5 ? std::sqrt(fc) : std::pow(fc, q); }

struct Core {
  bool finite = true;
  double f = kNaN;
  double fc = kNaN;
  double fc_q = kNaN;
  double r_entry = kNaN;
  double gg = kNaN;  // (g, ghat)
  double r_tilde = kNaN;
  double alpha = kNaN;
  Vec g;
  Vec ghat;
  Vec theta_next;
};

// Shared explicit update for the whole family. All collapse identities
// (savgd == modified_sav(L=0) == rsavq(q=1/2, restart off)) hold bit-for-bit
// because every stepper goes through this one code path.
Core sav_core(const SavState& s, Objective& obj, const LinearOperator& op, double q, bool restart,
              double dt) {
  Core c;
  c.f = obj.value(s.theta);
  if (!std::isfinite(c.f)) {
    c.finite = false;
    return c;
  }
  c.fc = shifted_value(obj, c.f);
  c.fc_q = pow_fc(c.fc, q);
  c.r_entry = restart ? c.fc_q : s.r;
  c.g = obj.gradient(s.theta);
  if (!c.g.allFinite()) {
    c.finite = false;
    return c;
  }
  c.ghat = op.is_zero() ? c.g : op.solve_shifted(dt, c.g);
  c.gg = c.g.dot(c.ghat);
  c.r_tilde = c.r_entry / (1.0 + dt * q * c.gg / c.fc);
  c.alpha = dt * c.r_tilde / c.fc_q;
  c.theta_next = s.theta - c.alpha * c.ghat;
  if (!std::isfinite(c.r_tilde) || !c.theta_next.allFinite()) c.finite = false;
  return c;
}

TraceRecord base_trace(const SavState& s, const Core& c, double dt) {
  TraceRecord t;
  t.k = s.k;
  t.f = c.f;
  t.r = c.r_entry;
  t.r_tilde = c.r_tilde;
  t.dt = dt;
  t.alpha = c.alpha;
  t.grad_norm = c.g.size() ? c.g.norm() : kNaN;
  t.indicator = c.r_entry / c.fc_q;
  return t;
}

StepResult diverged(const SavState& s, const Core& c, double dt) {
  StepResult out{s, TraceRecord{}};
  out.trace.k = s.k;
  out.trace.f = c.f;
  out.trace.r = s.r;
  out.trace.dt = dt;
  out.trace.status = Status::diverge;
  return out;
}

}  // namespace

SavState init_sav_state(Objective& obj, Vec theta0, double dt0) {
  return init_savq_state(obj, std::move(theta0), dt0, 0.5);
}

SavState init_savq_state(Objective& obj, Vec theta0, double dt0, double q) {
  SavState s;
  const double fc = shifted_value(obj, obj.value(theta0));
  s.theta = std::move(theta0);
  s.r = pow_fc(fc, q);
  s.dt = dt0;
  s.k = 0;
  s.aux_ratio = 1.0;
  return s;
}

StepResult modified_sav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                             double dt) {
  const Core c = sav_core(s, obj, op, 0.5, false, dt);
  if (!c.finite) return diverged(s, c, dt);
  StepResult out;
  out.trace = base_trace(s, c, dt);
  out.state = SavState{c.theta_next, c.r_tilde, dt, s.k + 1, kNaN};
  return out;
}

StepResult savgd_step(const SavState& s, Objective& obj, double dt) {
  return modified_sav_step(s, obj, LinearOperator::zero(s.theta.size()), dt);
}

StepResult msav_step(const SavState& s, Objective& obj, const LinearOperator& op, double dt) {
  const Core c = sav_core(s, obj, op, 0.5, false, dt);
  if (!c.finite) return diverged(s, c, dt);
  const double f_next = obj.value(c.theta_next);
  if (!std::isfinite(f_next)) return diverged(s, c, dt);
  const double s_next = std::sqrt(shifted_value(obj, f_next));
  StepResult out;
  out.trace = base_trace(s, c, dt);
  out.trace.f_next = f_next;
  out.state = SavState{c.theta_next, s_next, dt, s.k + 1, c.r_tilde / s_next};
  return out;
}

StepResult legacy_sav_step(const SavState& s, Objective& obj, const LinearOperator& op, double c_g,
                           double dt) {
  Core cc;
  cc.f = obj.value(s.theta);
  const double f = cc.f;
  if (!std::isfinite(f)) return diverged(s, cc, dt);
  const Vec l_theta = op.apply(s.theta);
  const double g_split = f - 0.5 * s.theta.dot(l_theta);
  const double gc = g_split + c_g;
  if (!(gc > 0)) throw DomainError("splitting lower bound violated: g(theta) + C_g <= 0");
  Vec grad_f = obj.gradient(s.theta);
  if (!grad_f.allFinite()) return diverged(s, cc, dt);
  const Vec h = (grad_f - l_theta) / std::sqrt(gc);
  const Vec inv_theta = op.solve_shifted(dt, s.theta);
  const Vec inv_h = op.solve_shifted(dt, h);
  const double num = s.r + 0.5 * h.dot(inv_theta - s.theta);
  const double den = 1.0 + 0.5 * dt * h.dot(inv_h);
  const double r_next = num / den;
  Vec theta_next = inv_theta - (dt * r_next) * inv_h;
  if (!std::isfinite(r_next) || !theta_next.allFinite()) return diverged(s, cc, dt);

  StepResult out;
  out.trace.k = s.k;
  out.trace.f = f;
  out.trace.r = s.r;
  out.trace.dt = dt;
  out.trace.alpha = dt * r_next / std::sqrt(gc);
  out.trace.grad_norm = grad_f.norm();
  out.trace.indicator = s.r / std::sqrt(gc);
  out.state = SavState{std::move(theta_next), r_next, dt, s.k + 1, kNaN};
  return out;
}

double compute_xi(double r_tilde, double r_k, double f_next_plus_c, double eta) {
  if (!(f_next_plus_c > 0)) throw DomainError("compute_xi: f(theta)+C must be positive");
  const double sq = std::sqrt(f_next_plus_c);
  const double a = (r_tilde - sq) * (r_tilde - sq);
  if (a <= 1e-24) return 0.0;
  const double b = 2.0 * (r_tilde - sq) * sq;
  const double g_form = -2.0 * (r_tilde - r_k) * r_tilde;
  const double c =
      f_next_plus_c - r_tilde * r_tilde - (r_tilde - r_k) * (r_tilde - r_k) - eta * g_form;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0) return 0.0;
  double xi = (-b - std::sqrt(disc)) / (2.0 * a);
  if (xi < 0.0) xi = 0.0;
  if (xi > 1.0) xi = 1.0;
  return xi;
}

StepResult rsav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                     const RelaxParams& relax, double dt) {
  const Core c = sav_core(s, obj, op, 0.5, false, dt);
  if (!c.finite) return diverged(s, c, dt);
  const double f_next = obj.value(c.theta_next);
  if (!std::isfinite(f_next)) return diverged(s, c, dt);
  const double fc_next = shifted_value(obj, f_next);
  const double s_next = std::sqrt(fc_next);
  const double xi = compute_xi(c.r_tilde, c.r_entry, fc_next, relax.eta);
  const double g_form = -2.0 * (c.r_tilde - c.r_entry) * c.r_tilde;
  double r_next;
  if (xi <= 0.0) {
    r_next = s_next;
  } else if (xi >= 1.0) {
    r_next = c.r_tilde;
  } else {
    // At an interior root, xi*r_tilde + (1-xi)*sqrt(f+C) satisfies the
    // admissibility equation with equality; evaluating it through that
    // equation sums nonnegative terms and avoids the cancellation of the
    // convex combination when sqrt(f+C) is much larger than the result.
    const double dr = c.r_tilde - c.r_entry;
    r_next = std::sqrt(c.r_tilde * c.r_tilde + dr * dr + relax.eta * g_form);
  }

  StepResult out;
  out.trace = base_trace(s, c, dt);
  out.trace.xi = xi;
  out.trace.f_next = f_next;
  out.trace.g_form = g_form;
  out.state = SavState{c.theta_next, r_next, dt, s.k + 1, c.r_tilde / s_next};
  return out;
}

StepResult adaptive_rsav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                              const RelaxParams& relax, const AdaptiveParams& adapt) {
  const double indicator = s.aux_ratio;
  double dt = s.dt;
  if (indicator < adapt.gamma && dt > adapt.dt_min) {
    dt = std::max(indicator * dt, adapt.dt_min);
  } else {
    dt = adapt.rho * dt;
  }
  StepResult out = rsav_step(s, obj, op, relax, dt);
  out.trace.indicator = indicator;
  return out;
}

StepResult rsavq_step(const SavState& s, Objective& obj, const LinearOperator& op,
                      const QParams& qp, double dt) {
  if (!(qp.q > 0)) throw std::invalid_argument("rsavq_step: q must be positive");
  const Core c = sav_core(s, obj, op, qp.q, qp.restart, dt);
  if (!c.finite) return diverged(s, c, dt);
  StepResult out;
  out.trace = base_trace(s, c, dt);
  out.state = SavState{c.theta_next, c.r_tilde, dt, s.k + 1, kNaN};
  return out;
}

StepResult linesearch_sav_step(const SavState& s, Objective& obj, const LinearOperator& op,
                               const QParams& qp, double dt,
                               const std::optional<WolfeParams>& wolfe) {
  if (!(qp.q > 0)) throw std::invalid_argument("linesearch_sav_step: q must be positive");
  Core cc;
  cc.f = obj.value(s.theta);
  const double f = cc.f;
  if (!std::isfinite(f)) return diverged(s, cc, dt);
  const double fc = shifted_value(obj, f);
  const double fc_q = pow_fc(fc, qp.q);
  Vec g = obj.gradient(s.theta);
  if (!g.allFinite()) return diverged(s, cc, dt);

  StepResult out;
  out.trace.k = s.k;
  out.trace.f = f;
  out.trace.r = fc_q;
  out.trace.grad_norm = g.norm();
  out.trace.indicator = 1.0;  // restarted

  if (out.trace.grad_norm == 0.0) {
    out.trace.dt = dt;
    out.trace.alpha = 0.0;
    out.state = SavState{s.theta, fc_q, dt, s.k + 1, 1.0};
    return out;
  }

  const Vec ghat = op.is_zero() ? g : op.solve_shifted(dt, g);
  const double gg = g.dot(ghat);
  const Vec dir = -ghat;

  double dt_used = dt;
  double alpha = dt_used / (1.0 + dt_used * qp.q * gg / fc);
  if (wolfe) {
    bool accepted = false;
    for (int halvings = 0; halvings <= 60; ++halvings) {
      const auto [suff, curv] = wolfe_check(obj, s.theta, dir, alpha, wolfe->c1, wolfe->c2);
      if (suff && curv) {
        accepted = true;
        break;
      }
      dt_used *= 0.5;
      alpha = dt_used / (1.0 + dt_used * qp.q * gg / fc);
    }
    if (!accepted) throw WolfeNotFound("wolfe-not-found: no admissible step after 60 halvings");
  }

  Vec theta_next = s.theta + alpha * dir;
  const double r_tilde = fc_q / (1.0 + dt_used * qp.q * gg / fc);
  if (!theta_next.allFinite()) return diverged(s, cc, dt);
  out.trace.r_tilde = r_tilde;
  out.trace.dt = dt_used;
  out.trace.alpha = alpha;
  out.state = SavState{std::move(theta_next), r_tilde, dt_used, s.k + 1, 1.0};
  return out;
}

std::pair<bool, bool> wolfe_check(Objective& obj, const Vec& theta, const Vec& P, double alpha,
                                  double c1, double c2) {
  if (!(0 < c1 && c1 < c2 && c2 < 1)) {
    throw std::invalid_argument("wolfe_check: need 0 < c1 < c2 < 1");
  }
  const double slope0 = obj.gradient(theta).dot(P);
  if (!(slope0 < 0)) throw DomainError("wolfe_check: P is not a descent direction");
  const double f0 = obj.value(theta);
  const Vec trial = theta + alpha * P;
  const bool sufficient = obj.value(trial) <= f0 + c1 * alpha * slope0;
  const bool curvature = obj.gradient(trial).dot(P) >= c2 * slope0;
  return {sufficient, curvature};
}

QuadraticStepSizes quadratic_alpha_oracle(const Mat& A, const Vec& b, const Vec& theta) {
  if (A.rows() != A.cols()) throw std::invalid_argument("quadratic_alpha_oracle: A must be square");
  if (b.size() != A.rows() || theta.size() != A.cols()) {
    throw std::invalid_argument("quadratic_alpha_oracle: size mismatch");
  }
  QuadraticStepSizes out;
  const Vec resid = A * theta - b;
  if (resid.squaredNorm() == 0.0) {
    out.at_minimum = true;
    return out;
  }
  const Vec z = A.transpose() * resid;
  out.alpha_sav_limit = resid.squaredNorm() / z.squaredNorm();
  out.beta_steepest = z.squaredNorm() / (A * z).squaredNorm();
  return out;
}

}  // namespace savopt
