#include "savopt/problems.hpp"

#include <cmath>

namespace savopt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Accumulates (u + v*a + w*a^2)^2 into quartic coefficients.
void add_squared_quadratic(Quartic& q, double u, double v, double w) {
  q.c0 += u * u;
  q.c1 += 2.0 * u * v;
  q.c2 += v * v + 2.0 * u * w;
  q.c3 += 2.0 * v * w;
  q.c4 += w * w;
}
}  // namespace

QuadraticProblem::QuadraticProblem(Eigen::Index n) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("QuadraticProblem: n must be positive and even");
  weights_.resize(n);
  hessian_diag_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    weights_[i] = (i % 2 == 0) ? 1.0 : 0.01;
    hessian_diag_[i] = 2.0 * weights_[i];
  }
}

double QuadraticProblem::value(const Vec& theta) const {
  return weights_.dot(theta.cwiseProduct(theta));
}

Vec QuadraticProblem::gradient(const Vec& theta) {
  return 2.0 * weights_.cwiseProduct(theta);
}

Quartic QuadraticProblem::directional_quartic(const Vec& theta, const Vec& d) const {
  Quartic q;
  q.c0 = weights_.dot(theta.cwiseProduct(theta));
  q.c1 = 2.0 * weights_.dot(theta.cwiseProduct(d));
  q.c2 = weights_.dot(d.cwiseProduct(d));
  return q;
}

RastriginProblem::RastriginProblem(Eigen::Index n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("RastriginProblem: n must be positive");
}

double RastriginProblem::value(const Vec& theta) const {
  double acc = 10.0 * static_cast<double>(n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    acc += theta[i] * theta[i] - 10.0 * std::cos(kTwoPi * theta[i]);
  }
  return acc;
}

Vec RastriginProblem::gradient(const Vec& theta) {
  Vec g(n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    g[i] = 2.0 * theta[i] + 10.0 * kTwoPi * std::sin(kTwoPi * theta[i]);
  }
  return g;
}

RosenbrockProblem::RosenbrockProblem(Eigen::Index n, double a, double b) : n_(n), a_(a), b_(b) {
  if (n < 2) throw std::invalid_argument("RosenbrockProblem: n must be >= 2");
}

double RosenbrockProblem::value(const Vec& t) const {
  if (n_ == 2) {
    const double u = a_ - t[0];
    const double v = t[1] - t[0] * t[0];
    return u * u + b_ * v * v;
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n_; ++i) {
    const double u = a_ - t[i];
    acc += u * u;
  }
  for (Eigen::Index i = 0; i + 1 < n_; ++i) {
    const double v = t[i + 1] - t[i] * t[i];
    acc += b_ * v * v;
  }
  return acc;
}

Vec RosenbrockProblem::gradient(const Vec& t) {
  Vec g = Vec::Zero(n_);
  if (n_ == 2) {
    const double v = t[1] - t[0] * t[0];
    g[0] = -2.0 * (a_ - t[0]) - 4.0 * b_ * t[0] * v;
    g[1] = 2.0 * b_ * v;
    return g;
  }
  for (Eigen::Index i = 0; i < n_; ++i) g[i] = -2.0 * (a_ - t[i]);
  for (Eigen::Index i = 0; i + 1 < n_; ++i) {
    const double v = t[i + 1] - t[i] * t[i];
    g[i] += -4.0 * b_ * t[i] * v;
    g[i + 1] += 2.0 * b_ * v;
  }
  return g;
}

Quartic RosenbrockProblem::directional_quartic(const Vec& t, const Vec& d) const {
  Quartic q;
  if (n_ == 2) {
    add_squared_quadratic(q, a_ - t[0], -d[0], 0.0);
    const double u = t[1] - t[0] * t[0];
    const double v = d[1] - 2.0 * t[0] * d[0];
    const double w = -d[0] * d[0];
    add_squared_quadratic(q, std::sqrt(b_) * u, std::sqrt(b_) * v, std::sqrt(b_) * w);
    return q;
  }
  for (Eigen::Index i = 0; i < n_; ++i) add_squared_quadratic(q, a_ - t[i], -d[i], 0.0);
  const double sb = std::sqrt(b_);
  for (Eigen::Index i = 0; i + 1 < n_; ++i) {
    const double u = t[i + 1] - t[i] * t[i];
    const double v = d[i + 1] - 2.0 * t[i] * d[i];
    const double w = -d[i] * d[i];
    add_squared_quadratic(q, sb * u, sb * v, sb * w);
  }
  return q;
}

}  // namespace savopt
