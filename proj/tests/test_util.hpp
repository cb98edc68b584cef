#pragma once

#include "savopt/objective.hpp"

namespace savopt::testing {

/// f(theta) = sum_i w_i theta_i^2; w = 1 gives the 1-D f = theta^2 toy.
class WeightedSquare : public Objective {
 public:
  explicit WeightedSquare(Vec w) : w_(std::move(w)) {}
  static WeightedSquare one_dim(double w = 1.0) {
    Vec v(1);
    v << w;
    return WeightedSquare(std::move(v));
  }

  Eigen::Index dimension() const override { return w_.size(); }
  double value(const Vec& t) const override { return w_.dot(t.cwiseProduct(t)); }
  Vec gradient(const Vec& t) override { return 2.0 * w_.cwiseProduct(t); }
  bool has_directional_quartic() const override { return true; }
  Quartic directional_quartic(const Vec& t, const Vec& d) const override {
    Quartic q;
    q.c0 = w_.dot(t.cwiseProduct(t));
    q.c1 = 2.0 * w_.dot(t.cwiseProduct(d));
    q.c2 = w_.dot(d.cwiseProduct(d));
    return q;
  }

 private:
  Vec w_;
};

/// 1-D f(theta) = theta^4.
class Quartic1D : public Objective {
 public:
  Eigen::Index dimension() const override { return 1; }
  double value(const Vec& t) const override { return t[0] * t[0] * t[0] * t[0]; }
  Vec gradient(const Vec& t) override {
    Vec g(1);
    g << 4.0 * t[0] * t[0] * t[0];
    return g;
  }
  bool has_directional_quartic() const override { return true; }
  Quartic directional_quartic(const Vec& t, const Vec& d) const override {
    // (t + a d)^4 expanded.
    const double x = t[0], e = d[0];
    Quartic q;
    q.c0 = x * x * x * x;
    q.c1 = 4.0 * x * x * x * e;
    q.c2 = 6.0 * x * x * e * e;
    q.c3 = 4.0 * x * e * e * e;
    q.c4 = e * e * e * e;
    return q;
  }
};

/// 1-D f(theta) = theta^2 + 0.1 theta^4.
class QuarticWell : public Objective {
 public:
  Eigen::Index dimension() const override { return 1; }
  double value(const Vec& t) const override {
    const double x = t[0];
    return x * x + 0.1 * x * x * x * x;
  }
  Vec gradient(const Vec& t) override {
    const double x = t[0];
    Vec g(1);
    g << 2.0 * x + 0.4 * x * x * x;
    return g;
  }
};

/// f(theta) = |A theta - b|^2 / 2 with a dense matrix.
class DenseLeastSquares : public Objective {
 public:
  DenseLeastSquares(Mat a, Vec b) : a_(std::move(a)), b_(std::move(b)) {}

  Eigen::Index dimension() const override { return a_.cols(); }
  double value(const Vec& t) const override { return 0.5 * (a_ * t - b_).squaredNorm(); }
  Vec gradient(const Vec& t) override { return a_.transpose() * (a_ * t - b_); }
  bool has_directional_quartic() const override { return true; }
  Quartic directional_quartic(const Vec& t, const Vec& d) const override {
    const Vec r = a_ * t - b_;
    const Vec ad = a_ * d;
    Quartic q;
    q.c0 = 0.5 * r.squaredNorm();
    q.c1 = r.dot(ad);
    q.c2 = 0.5 * ad.squaredNorm();
    return q;
  }
  const Mat& matrix() const { return a_; }
  const Vec& rhs() const { return b_; }

 private:
  Mat a_;
  Vec b_;
};

}  // namespace savopt::testing
