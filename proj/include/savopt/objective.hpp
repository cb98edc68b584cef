#pragma once

#include <memory>
#include <vector>

#include "savopt/common.hpp"
#include "savopt/rng.hpp"

namespace savopt {

/// Coefficients of phi(alpha) = f(theta + alpha*d) for objectives that are
/// polynomial of degree <= 4 along rays. c0 = f(theta), c1 = (grad f, d).
struct Quartic {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0;

  double eval(double a) const { return c0 + a * (c1 + a * (c2 + a * (c3 + a * c4))); }
  double deriv(double a) const { return c1 + a * (2 * c2 + a * (3 * c3 + a * 4 * c4)); }
};

/// Minimization target: value, gradient and the lower-bound shift C with
/// f(theta) + C > 0 on the whole trajectory. gradient() is non-const because
/// noisy wrappers consume generator state.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual double value(const Vec& theta) const = 0;
  virtual Vec gradient(const Vec& theta) = 0;

  double shift_c() const { return shift_c_; }
  void set_shift_c(double c) { shift_c_ = c; }

  virtual bool has_directional_quartic() const { return false; }
  virtual Quartic directional_quartic(const Vec& /*theta*/, const Vec& /*d*/) const {
    throw CapabilityError("objective does not support directional quartics");
  }

  /// Diagonal of the Hessian when the problem exposes one (used as the D
  /// operator); nullptr otherwise.
  virtual const Vec* hessian_diagonal() const { return nullptr; }

 protected:
  double shift_c_ = 1.0;
};

/// f(theta) + C evaluated with the runtime positivity check.
inline double shifted_value(const Objective& obj, double f) {
  const double fc = f + obj.shift_c();
  if (!(fc > 0) && std::isfinite(f)) {
    throw DomainError("f(theta) + C must stay positive (got " + std::to_string(fc) + ")");
  }
  return fc;
}

/// Wraps an objective so that gradient() returns grad f + eps * z with z a
/// standard normal vector drawn from an owned seeded generator. Values are
/// never perturbed. eps = 0 reproduces the base gradient bit-exactly.
class NoisyGradient : public Objective {
 public:
  NoisyGradient(Objective& base, double epsilon, std::uint64_t seed)
      : base_(base), epsilon_(epsilon), rng_(seed) {
    if (epsilon < 0) throw std::invalid_argument("NoisyGradient: epsilon must be >= 0");
    set_shift_c(base.shift_c());
  }

  Eigen::Index dimension() const override { return base_.dimension(); }
  double value(const Vec& theta) const override { return base_.value(theta); }

  Vec gradient(const Vec& theta) override {
    Vec g = base_.gradient(theta);
    if (epsilon_ == 0.0) return g;
    return g + epsilon_ * rng_.normal_vector(g.size());
  }

  bool has_directional_quartic() const override { return base_.has_directional_quartic(); }
  Quartic directional_quartic(const Vec& theta, const Vec& d) const override {
    return base_.directional_quartic(theta, d);
  }
  const Vec* hessian_diagonal() const override { return base_.hessian_diagonal(); }

 private:
  Objective& base_;
  double epsilon_;
  Rng rng_;
};

/// Data-defined objective that can be evaluated on an index subset of its
/// examples.
class BatchEvaluable {
 public:
  virtual ~BatchEvaluable() = default;
  virtual std::size_t num_examples() const = 0;
  virtual double batch_value(const Vec& theta, const std::vector<std::size_t>& idx) const = 0;
  virtual Vec batch_gradient(const Vec& theta, const std::vector<std::size_t>& idx) const = 0;
};

/// Presents one mini-batch at a time as an Objective. Batches partition the
/// example set; the order is reshuffled at each epoch boundary with the owned
/// seeded generator.
class MiniBatchObjective : public Objective {
 public:
  MiniBatchObjective(Objective& full, BatchEvaluable& data, std::size_t batch_size,
                     std::uint64_t seed)
      : full_(full), data_(data), batch_size_(batch_size), rng_(seed) {
    if (batch_size == 0) throw std::invalid_argument("MiniBatchObjective: batch_size must be > 0");
    if (data.num_examples() == 0) throw std::invalid_argument("MiniBatchObjective: empty data");
    set_shift_c(full.shift_c());
    order_.resize(data.num_examples());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    advance();
  }

  /// Moves to the next batch, reshuffling when a new epoch starts.
  void advance() {
    if (cursor_ >= order_.size()) cursor_ = 0;
    if (cursor_ == 0) rng_.shuffle(order_);
    const std::size_t end = std::min(cursor_ + batch_size_, order_.size());
    batch_.assign(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                  order_.begin() + static_cast<std::ptrdiff_t>(end));
    cursor_ = end;
  }

  std::size_t batches_per_epoch() const {
    return (order_.size() + batch_size_ - 1) / batch_size_;
  }

  const std::vector<std::size_t>& current_batch() const { return batch_; }

  Eigen::Index dimension() const override { return full_.dimension(); }
  double value(const Vec& theta) const override {
    if (batch_.empty()) throw DomainError("mini-batch is empty");
    return data_.batch_value(theta, batch_);
  }
  Vec gradient(const Vec& theta) override {
    if (batch_.empty()) throw DomainError("mini-batch is empty");
    return data_.batch_gradient(theta, batch_);
  }

  double full_value(const Vec& theta) const { return full_.value(theta); }

 private:
  Objective& full_;
  BatchEvaluable& data_;
  std::size_t batch_size_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> batch_;
  std::size_t cursor_ = 0;
};

}  // namespace savopt
