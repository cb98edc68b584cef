#include "savopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace savopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TraceRecord diverged_trace(std::int64_t k, double f) {
  TraceRecord t;
  t.k = k;
  t.f = f;
  t.status = Status::diverge;
  return t;
}

// Real roots of a*x^3 + b*x^2 + c*x + d = 0, tolerating degenerate leading
// coefficients relative to the overall scale.
std::vector<double> real_cubic_roots(double a, double b, double c, double d) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (scale == 0.0) return {};
  const double tiny = 1e-14 * scale;
  if (std::abs(a) <= tiny) {
    if (std::abs(b) <= tiny) {
      if (std::abs(c) <= tiny) return {};
      return {-d / c};
    }
    const double disc = c * c - 4.0 * b * d;
    if (disc < 0) return {};
    const double sq = std::sqrt(disc);
    return {(-c - sq) / (2.0 * b), (-c + sq) / (2.0 * b)};
  }
  // Depressed cubic t^3 + p t + q with x = t - b/(3a).
  const double shift = b / (3.0 * a);
  const double p = c / a - b * b / (3.0 * a * a);
  const double q = 2.0 * shift * shift * shift - shift * c / a + d / a;
  const double half_q = q / 2.0;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;
  std::vector<double> roots;
  if (disc > 0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-half_q + sq);
    const double v = std::cbrt(-half_q - sq);
    roots.push_back(u + v - shift);
  } else if (disc == 0) {
    const double u = std::cbrt(-half_q);
    roots.push_back(2.0 * u - shift);
    roots.push_back(-u - shift);
  } else {
    const double rho = std::sqrt(-third_p);
    const double arg = std::clamp(-half_q / (rho * rho * rho), -1.0, 1.0);
    const double phi = std::acos(arg);
    for (int k = 0; k < 3; ++k) {
      roots.push_back(2.0 * rho * std::cos((phi - 2.0 * M_PI * k) / 3.0) - shift);
    }
  }
  return roots;
}

void newton_polish(const Quartic& q, double& x) {
  for (int i = 0; i < 8; ++i) {
    const double d1 = q.deriv(x);
    const double d2 = 2 * q.c2 + x * (6 * q.c3 + x * 12 * q.c4);
    if (d2 == 0.0 || !std::isfinite(d1) || !std::isfinite(d2)) return;
    const double step = d1 / d2;
    x -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(x))) return;
  }
}

}  // namespace

double minimize_quartic_ray(const Quartic& q) {
  std::vector<double> crit = real_cubic_roots(4.0 * q.c4, 3.0 * q.c3, 2.0 * q.c2, q.c1);
  double best_a = 0.0;
  double best_v = q.c0;
  for (double x : crit) {
    if (!(x > 0) || !std::isfinite(x)) continue;
    newton_polish(q, x);
    if (!(x > 0)) continue;
    const double v = q.eval(x);
    if (v < best_v) {
      best_v = v;
      best_a = x;
    }
  }
  return best_a;
}

NagState init_nag_state(Vec theta0, double lr, double gamma) {
  NagState s;
  s.velocity = Vec::Zero(theta0.size());
  s.theta = std::move(theta0);
  s.lr = lr;
  s.gamma = gamma;
  return s;
}

AdamState init_adam_state(Vec theta0, double lr, double beta1, double beta2, double eps) {
  AdamState s;
  s.m = Vec::Zero(theta0.size());
  s.v = Vec::Zero(theta0.size());
  s.theta = std::move(theta0);
  s.lr = lr;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.eps = eps;
  return s;
}

BaselineStep gd_step(const Vec& theta, std::int64_t k, Objective& obj, const LinearOperator& op,
                     double dt) {
  if (!(dt > 0)) throw std::invalid_argument("gd_step: dt must be positive");
  const double f = obj.value(theta);
  if (!std::isfinite(f)) return {theta, diverged_trace(k, f)};
  Vec g = obj.gradient(theta);
  if (!g.allFinite()) return {theta, diverged_trace(k, f)};
  const double gnorm = g.norm();
  Vec step = op.is_zero() ? std::move(g) : op.solve_shifted(dt, g);
  Vec next = theta - dt * step;
  TraceRecord t;
  t.k = k;
  t.f = f;
  t.dt = dt;
  t.alpha = dt;
  t.grad_norm = gnorm;
  if (!next.allFinite()) {
    t.status = Status::diverge;
    return {theta, t};
  }
  return {std::move(next), t};
}

NagStep nag_step(const NagState& s, Objective& obj) {
  const double f = obj.value(s.theta);
  if (!std::isfinite(f)) return {s, diverged_trace(s.k, f)};
  Vec lookahead = s.theta - s.gamma * s.velocity;
  Vec g = obj.gradient(lookahead);
  if (!g.allFinite()) return {s, diverged_trace(s.k, f)};
  NagState next = s;
  next.velocity = s.gamma * s.velocity + s.lr * g;
  next.theta = s.theta - next.velocity;
  next.k = s.k + 1;
  TraceRecord t;
  t.k = s.k;
  t.f = f;
  t.alpha = s.lr;
  t.grad_norm = g.norm();
  if (!next.theta.allFinite()) {
    t.status = Status::diverge;
    return {s, t};
  }
  return {std::move(next), t};
}

AdamStep adam_step(const AdamState& s, Objective& obj) {
  const double f = obj.value(s.theta);
  if (!std::isfinite(f)) return {s, diverged_trace(s.t, f)};
  Vec g = obj.gradient(s.theta);
  if (!g.allFinite()) return {s, diverged_trace(s.t, f)};
  AdamState next = s;
  next.t = s.t + 1;
  next.m = s.beta1 * s.m + (1.0 - s.beta1) * g;
  next.v = s.beta2 * s.v + (1.0 - s.beta2) * g.cwiseProduct(g);
  const double m_corr = 1.0 - std::pow(s.beta1, static_cast<double>(next.t));
  const double v_corr = 1.0 - std::pow(s.beta2, static_cast<double>(next.t));
  const Vec mhat = next.m / m_corr;
  const Vec vhat = next.v / v_corr;
  next.theta = s.theta - s.lr * (mhat.array() / (vhat.array().sqrt() + s.eps)).matrix();
  TraceRecord t;
  t.k = s.t;
  t.f = f;
  t.alpha = s.lr;
  t.grad_norm = g.norm();
  if (!next.theta.allFinite()) {
    t.status = Status::diverge;
    return {s, t};
  }
  return {std::move(next), t};
}

BaselineStep steepest_descent_step(const Vec& theta, std::int64_t k, Objective& obj) {
  if (!obj.has_directional_quartic()) {
    throw CapabilityError("steepest descent needs a quartic-ray objective");
  }
  const double f = obj.value(theta);
  if (!std::isfinite(f)) return {theta, diverged_trace(k, f)};
  Vec g = obj.gradient(theta);
  if (!g.allFinite()) return {theta, diverged_trace(k, f)};
  TraceRecord t;
  t.k = k;
  t.f = f;
  t.grad_norm = g.norm();
  if (t.grad_norm == 0.0) {
    t.alpha = 0.0;
    return {theta, t};
  }
  const Vec d = -g;
  const Quartic q = obj.directional_quartic(theta, d);
  const double alpha = minimize_quartic_ray(q);
  t.alpha = alpha;
  Vec next = theta + alpha * d;
  if (!next.allFinite()) {
    t.status = Status::diverge;
    return {theta, t};
  }
  return {std::move(next), t};
}

}  // namespace savopt
