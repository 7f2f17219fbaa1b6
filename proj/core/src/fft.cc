// fft.cc

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

#include "fft.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <new>
#include <utility>

#include <fftw3.h>

namespace speechcur::internal {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

PlanPair GetPlans(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(PlannerMutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* real = fftw_alloc_real(n);
  fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
  const int size = static_cast<int>(n);
  PlanPair plans{
      fftw_plan_dft_r2c_1d(size, real, cplx, FFTW_ESTIMATE),
      fftw_plan_dft_c2r_1d(size, cplx, real, FFTW_ESTIMATE),
  };
  fftw_free(real);
  fftw_free(cplx);
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  const PlanPair plans = GetPlans(n);
  forward_plan_ = plans.forward;
  inverse_plan_ = plans.inverse;
  real_ = fftw_alloc_real(n);
  complex_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n / 2 + 1));
  if (real_ == nullptr || complex_ == nullptr) throw std::bad_alloc();
}

RealFft::~RealFft() {
  fftw_free(real_);
  fftw_free(complex_);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n_), real_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real_,
                       reinterpret_cast<fftw_complex*>(complex_));
  std::copy(complex_, complex_ + bins(), out.begin());
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  // c2r overwrites its input, so always work on the owned copy.
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(bins()), complex_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(complex_), real_);
  const double scale = 1.0 / static_cast<double>(n_);
  std::transform(real_, real_ + n_, out.begin(),
                 [scale](double v) { return v * scale; });
}

}  // namespace speechcur::internal
