// fft.h

// Copyright 2026  speechcur authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPEECHCUR_SRC_FFT_H_
#define SPEECHCUR_SRC_FFT_H_

#include <complex>
#include <cstddef>
#include <span>

namespace speechcur::internal {

/// Real-input FFT of a fixed size backed by FFTW. Plans are created once per
/// size and shared; each instance owns its aligned work buffers, so distinct
/// instances may be used from different threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  /// `in` has size() values, `out` has bins() values.
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  /// Inverse scaled by 1/n, so Inverse(Forward(x)) == x.
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
  double* real_;
  std::complex<double>* complex_;
};

}  // namespace speechcur::internal

#endif  // SPEECHCUR_SRC_FFT_H_
