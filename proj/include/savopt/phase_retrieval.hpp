#pragma once

#include <memory>
#include <vector>

#include "savopt/common.hpp"
#include "savopt/fft.hpp"
#include "savopt/objective.hpp"
#include "savopt/rng.hpp"

namespace savopt {

/// Coded-diffraction phase retrieval: recover z from intensity measurements
/// b_{i,j} = |F(M_i o z*)_j|^2 with i.i.d. standard complex Gaussian masks
/// M_i and the unitary DFT F. The loss is
///   f(z) = 1/2 sum_{i,j} (|F(M_i o z)_j|^2 - b_{i,j})^2,
/// and the gradient is the Wirtinger derivative under the real inner product,
///   grad f(z) = 2 sum_i conj(M_i) o F^{-1}((|y_i|^2 - b_i) o y_i).
///
/// As an Objective the complex vector is presented as 2N real coordinates,
/// (re, im) pairs interleaved, so the real dot product equals the real part
/// of the Hermitian inner product.
class PhaseRetrievalProblem : public Objective {
 public:
  /// 1-D signal of length n.
  static PhaseRetrievalProblem signal(int n, int num_masks, std::uint64_t seed);
  /// rows x cols image, flattened row-major; F is the 2-D unitary DFT.
  static PhaseRetrievalProblem image(int rows, int cols, int num_masks, std::uint64_t seed);
  /// Explicit truth and masks (1-D transform); measurements are regenerated.
  static PhaseRetrievalProblem custom(CVec truth, std::vector<CVec> masks);

  Eigen::Index dimension() const override { return 2 * n_; }
  double value(const Vec& theta) const override { return value_z(to_complex(theta)); }
  Vec gradient(const Vec& theta) override { return to_real(gradient_z(to_complex(theta))); }
  bool has_directional_quartic() const override { return true; }
  Quartic directional_quartic(const Vec& theta, const Vec& d) const override;

  double value_z(const CVec& z) const;
  CVec gradient_z(const CVec& z) const;

  const CVec& truth() const { return truth_; }
  const std::vector<CVec>& masks() const { return masks_; }
  const std::vector<Vec>& measurements() const { return b_; }
  int signal_size() const { return n_; }

  /// Standard complex Gaussian vector (entries (x+iy)/sqrt(2)) from a seed;
  /// also used by the harness for random initialization.
  static CVec complex_gaussian(int n, Rng& rng);

  static CVec to_complex(const Vec& interleaved);
  static Vec to_real(const CVec& z);

 private:
  PhaseRetrievalProblem(int n, std::shared_ptr<Fft> fft, int num_masks, std::uint64_t seed);

  int n_;
  std::shared_ptr<Fft> fft_;
  std::vector<CVec> masks_;
  std::vector<Vec> b_;
  CVec truth_;
};

}  // namespace savopt
