#pragma once

#include "savopt/common.hpp"
#include "savopt/objective.hpp"

namespace savopt {

/// Ill-conditioned diagonal quadratic: 50 coordinate pairs with weights
/// alternating (1, 1/100); minimum 0 at the origin. The Hessian diagonal
/// (2, 0.02, ...) is exposed for use as the D operator.
class QuadraticProblem : public Objective {
 public:
  explicit QuadraticProblem(Eigen::Index n = 100);

  Eigen::Index dimension() const override { return weights_.size(); }
  double value(const Vec& theta) const override;
  Vec gradient(const Vec& theta) override;
  bool has_directional_quartic() const override { return true; }
  Quartic directional_quartic(const Vec& theta, const Vec& d) const override;
  const Vec* hessian_diagonal() const override { return &hessian_diag_; }

 private:
  Vec weights_;
  Vec hessian_diag_;
};

/// Highly multimodal benchmark; global minimum 0 at the origin, customarily
/// evaluated on [-5.12, 5.12]^n.
class RastriginProblem : public Objective {
 public:
  explicit RastriginProblem(Eigen::Index n);

  Eigen::Index dimension() const override { return n_; }
  double value(const Vec& theta) const override;
  Vec gradient(const Vec& theta) override;

  static constexpr double box_low = -5.12;
  static constexpr double box_high = 5.12;

 private:
  Eigen::Index n_;
};

/// Rosenbrock valley. n = 2 uses the classic (a-x)^2 + b(y-x^2)^2 form;
/// n > 2 uses sum_i (a - t_i)^2 + b sum_i (t_{i+1} - t_i^2)^2.
class RosenbrockProblem : public Objective {
 public:
  explicit RosenbrockProblem(Eigen::Index n, double a = 1.0, double b = 100.0);

  Eigen::Index dimension() const override { return n_; }
  double value(const Vec& theta) const override;
  Vec gradient(const Vec& theta) override;
  bool has_directional_quartic() const override { return true; }
  Quartic directional_quartic(const Vec& theta, const Vec& d) const override;

  double a() const { return a_; }
  double b() const { return b_; }

 private:
  Eigen::Index n_;
  double a_;
  double b_;
};

}  // namespace savopt
