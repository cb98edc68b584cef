#pragma once

#include <complex>
#include <vector>

#include "savopt/common.hpp"

namespace savopt {

/// Complex DFT of fixed size backed by FFTW, planned once at construction.
/// transform()/inverse() are unnormalized (FFTW convention); the unitary
/// variants scale by 1/sqrt(N). Execution is thread-safe on distinct buffers;
/// plan creation is serialized internally.
class Fft {
 public:
  /// 1-D transform of length n.
  explicit Fft(int n);
  /// 2-D transform on rows x cols, row-major layout, total size rows*cols.
  Fft(int rows, int cols);
  ~Fft();

  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return n_; }

  void transform(const std::complex<double>* in, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, std::complex<double>* out) const;

  CVec unitary(const CVec& v) const;
  CVec unitary_inverse(const CVec& v) const;

 private:
  int n_;
  void* plan_fwd_;
  void* plan_bwd_;
};

}  // namespace savopt
