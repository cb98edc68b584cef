#include "savopt/phase_retrieval.hpp"

#include <cmath>

namespace savopt {

PhaseRetrievalProblem PhaseRetrievalProblem::signal(int n, int num_masks, std::uint64_t seed) {
  return PhaseRetrievalProblem(n, std::make_shared<Fft>(n), num_masks, seed);
}

PhaseRetrievalProblem PhaseRetrievalProblem::image(int rows, int cols, int num_masks,
                                                   std::uint64_t seed) {
  return PhaseRetrievalProblem(rows * cols, std::make_shared<Fft>(rows, cols), num_masks, seed);
}

PhaseRetrievalProblem PhaseRetrievalProblem::custom(CVec truth, std::vector<CVec> masks) {
  if (masks.empty()) throw std::invalid_argument("PhaseRetrievalProblem: need at least one mask");
  const int n = static_cast<int>(truth.size());
  PhaseRetrievalProblem p(n, std::make_shared<Fft>(n), 1, 0);
  p.truth_ = std::move(truth);
  p.masks_ = std::move(masks);
  p.b_.clear();
  for (const CVec& mask : p.masks_) {
    if (mask.size() != n) throw std::invalid_argument("PhaseRetrievalProblem: mask size mismatch");
    p.b_.push_back(p.fft_->unitary(mask.cwiseProduct(p.truth_)).cwiseAbs2());
  }
  return p;
}

CVec PhaseRetrievalProblem::complex_gaussian(int n, Rng& rng) {
  CVec z(n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    z[i] = std::complex<double>(re * inv_sqrt2, im * inv_sqrt2);
  }
  return z;
}

PhaseRetrievalProblem::PhaseRetrievalProblem(int n, std::shared_ptr<Fft> fft, int num_masks,
                                             std::uint64_t seed)
    : n_(n), fft_(std::move(fft)) {
  if (n <= 0) throw std::invalid_argument("PhaseRetrievalProblem: size must be positive");
  if (num_masks <= 0) throw std::invalid_argument("PhaseRetrievalProblem: need at least one mask");
  Rng rng(mix_seed(seed, 0x6d61736bULL));  // mask/truth stream
  truth_ = complex_gaussian(n_, rng);
  masks_.reserve(static_cast<std::size_t>(num_masks));
  b_.reserve(static_cast<std::size_t>(num_masks));
  for (int i = 0; i < num_masks; ++i) {
    masks_.push_back(complex_gaussian(n_, rng));
    const CVec y = fft_->unitary(masks_.back().cwiseProduct(truth_));
    b_.push_back(y.cwiseAbs2());
  }
}

double PhaseRetrievalProblem::value_z(const CVec& z) const {
  if (z.size() != n_) throw std::invalid_argument("phase_retrieval: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    const CVec y = fft_->unitary(masks_[i].cwiseProduct(z));
    const Vec e = y.cwiseAbs2() - b_[i];
    acc += e.squaredNorm();
  }
  return 0.5 * acc;
}

CVec PhaseRetrievalProblem::gradient_z(const CVec& z) const {
  if (z.size() != n_) throw std::invalid_argument("phase_retrieval: size mismatch");
  CVec out = CVec::Zero(n_);
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    const CVec y = fft_->unitary(masks_[i].cwiseProduct(z));
    const Vec e = y.cwiseAbs2() - b_[i];
    const CVec back = fft_->unitary_inverse(e.cast<std::complex<double>>().cwiseProduct(y));
    out += masks_[i].conjugate().cwiseProduct(back);
  }
  return 2.0 * out;
}

Quartic PhaseRetrievalProblem::directional_quartic(const Vec& theta, const Vec& d) const {
  const CVec z = to_complex(theta);
  const CVec dz = to_complex(d);
  Quartic q;
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    const CVec y0 = fft_->unitary(masks_[i].cwiseProduct(z));
    const CVec y1 = fft_->unitary(masks_[i].cwiseProduct(dz));
    for (int j = 0; j < n_; ++j) {
      const double p = std::norm(y0[j]) - b_[i][j];
      const double qq = 2.0 * (std::conj(y0[j]) * y1[j]).real();
      const double ss = std::norm(y1[j]);
      // e(alpha) = p + qq*alpha + ss*alpha^2; accumulate e^2 / 2.
      q.c0 += 0.5 * p * p;
      q.c1 += p * qq;
      q.c2 += 0.5 * qq * qq + p * ss;
      q.c3 += qq * ss;
      q.c4 += 0.5 * ss * ss;
    }
  }
  return q;
}

CVec PhaseRetrievalProblem::to_complex(const Vec& interleaved) {
  if (interleaved.size() % 2 != 0) {
    throw std::invalid_argument("to_complex: interleaved length must be even");
  }
  const Eigen::Index n = interleaved.size() / 2;
  CVec z(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    z[j] = std::complex<double>(interleaved[2 * j], interleaved[2 * j + 1]);
  }
  return z;
}

Vec PhaseRetrievalProblem::to_real(const CVec& z) {
  Vec v(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    v[2 * j] = z[j].real();
    v[2 * j + 1] = z[j].imag();
  }
  return v;
}

}  // namespace savopt
