#include "savopt/operators.hpp"

#include <cmath>

namespace savopt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_dim(const LinearOperator& op, const Vec& v, const char* what) {
  if (v.size() != op.dimension()) {
    throw std::invalid_argument(std::string(what) + ": vector has size " +
                                std::to_string(v.size()) + ", operator dimension is " +
                                std::to_string(op.dimension()));
  }
}
}  // namespace

LinearOperator::LinearOperator(Kind kind, Eigen::Index dim) : kind_(kind), dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("LinearOperator: dimension must be positive");
}

LinearOperator LinearOperator::zero(Eigen::Index dim) { return LinearOperator(Kind::zero, dim); }

LinearOperator LinearOperator::scaled_identity(double lambda, Eigen::Index dim) {
  if (lambda < 0) throw std::invalid_argument("scaled_identity: lambda must be >= 0");
  LinearOperator op(Kind::scaled_identity, dim);
  op.lambda_ = lambda;
  return op;
}

LinearOperator LinearOperator::diagonal(Vec entries) {
  if ((entries.array() < 0).any()) {
    throw std::invalid_argument("diagonal: entries must be >= 0");
  }
  LinearOperator op(Kind::diagonal, entries.size());
  op.diag_ = std::move(entries);
  return op;
}

LinearOperator LinearOperator::periodic_laplacian(double sigma, Eigen::Index dim) {
  if (sigma < 0) throw std::invalid_argument("periodic_laplacian: sigma must be >= 0");
  LinearOperator op(Kind::periodic_laplacian, dim);
  op.sigma_ = sigma;
  op.symbol_.resize(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    op.symbol_[j] = sigma * (2.0 - 2.0 * std::cos(kTwoPi * static_cast<double>(j) /
                                                  static_cast<double>(dim)));
  }
  op.fft_ = std::make_shared<Fft>(static_cast<int>(dim));
  return op;
}

LinearOperator LinearOperator::composite(double lambda, double sigma, Eigen::Index dim) {
  if (lambda < 0 || sigma < 0) throw std::invalid_argument("composite: lambda, sigma must be >= 0");
  LinearOperator op = periodic_laplacian(sigma, dim);
  op.kind_ = Kind::composite;
  op.lambda_ = lambda;
  op.symbol_.array() += lambda;
  return op;
}

Vec LinearOperator::apply(const Vec& v) const {
  check_dim(*this, v, "apply");
  switch (kind_) {
    case Kind::zero:
      return Vec::Zero(dim_);
    case Kind::scaled_identity:
      return lambda_ * v;
    case Kind::diagonal:
      return diag_.cwiseProduct(v);
    case Kind::periodic_laplacian:
    case Kind::composite: {
      Vec out(dim_);
      const Eigen::Index n = dim_;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double left = v[(i + n - 1) % n];
        const double right = v[(i + 1) % n];
        out[i] = sigma_ * (2.0 * v[i] - left - right);
      }
      if (kind_ == Kind::composite) out += lambda_ * v;
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

Vec LinearOperator::solve_shifted(double dt, const Vec& b) const {
  if (!(dt > 0)) throw std::invalid_argument("solve_shifted: dt must be positive");
  check_dim(*this, b, "solve_shifted");
  if (!b.allFinite()) throw std::invalid_argument("solve_shifted: b has non-finite entries");
  switch (kind_) {
    case Kind::zero:
      return b;
    case Kind::scaled_identity:
      return b / (1.0 + dt * lambda_);
    case Kind::diagonal:
      return b.array() / (1.0 + dt * diag_.array());
    case Kind::periodic_laplacian:
    case Kind::composite: {
      CVec spec(dim_);
      for (Eigen::Index i = 0; i < dim_; ++i) spec[i] = b[i];
      CVec hat(dim_);
      fft_->transform(spec.data(), hat.data());
      for (Eigen::Index j = 0; j < dim_; ++j) hat[j] /= 1.0 + dt * symbol_[j];
      fft_->inverse(hat.data(), spec.data());
      Vec out(dim_);
      const double scale = 1.0 / static_cast<double>(dim_);
      for (Eigen::Index i = 0; i < dim_; ++i) out[i] = spec[i].real() * scale;
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

Vec LinearOperator::apply_shift(double dt, const Vec& v) const {
  check_dim(*this, v, "apply_shift");
  if (is_zero()) return v;
  return v + dt * apply(v);
}

}  // namespace savopt
