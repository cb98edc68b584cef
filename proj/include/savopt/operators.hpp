#pragma once

#include <memory>

#include "savopt/common.hpp"
#include "savopt/fft.hpp"

namespace savopt {

/// Non-negative self-adjoint linear operator L together with an exact solver
/// for the shifted system (I + dt*L) x = b.
///
/// Variants:
///   Zero             L = 0
///   ScaledIdentity   L = lambda*I, lambda >= 0
///   Diagonal         L = diag(d), d >= 0 entrywise
///   PeriodicLaplacian L = -sigma*Delta with the 1-D periodic stencil
///                    (Delta v)_i = v_{i-1} - 2 v_i + v_{i+1}, indices mod n
///   Composite        L = lambda*I - sigma*Delta
///
/// Laplacian variants are solved exactly in the circulant eigenbasis
/// (forward FFT, divide by 1 + dt*symbol, inverse FFT); the others are solved
/// componentwise. Operators are immutable after construction; apply/solve are
/// safe to call concurrently.
class LinearOperator {
 public:
  enum class Kind { zero, scaled_identity, diagonal, periodic_laplacian, composite };

  static LinearOperator zero(Eigen::Index dim);
  static LinearOperator scaled_identity(double lambda, Eigen::Index dim);
  static LinearOperator diagonal(Vec entries);
  static LinearOperator periodic_laplacian(double sigma, Eigen::Index dim);
  static LinearOperator composite(double lambda, double sigma, Eigen::Index dim);

  Kind kind() const { return kind_; }
  Eigen::Index dimension() const { return dim_; }
  bool is_zero() const { return kind_ == Kind::zero; }

  /// L v.
  Vec apply(const Vec& v) const;

  /// Exact solution of (I + dt*L) x = b, dt > 0.
  Vec solve_shifted(double dt, const Vec& b) const;

  /// (I + dt*L) v, the forward map of solve_shifted.
  Vec apply_shift(double dt, const Vec& v) const;

 private:
  LinearOperator(Kind kind, Eigen::Index dim);

  Kind kind_;
  Eigen::Index dim_;
  double lambda_ = 0.0;
  double sigma_ = 0.0;
  Vec diag_;
  Vec symbol_;                 // circulant eigenvalues of L for Laplacian kinds
  std::shared_ptr<Fft> fft_;   // shared: operators are copyable values
};

}  // namespace savopt
