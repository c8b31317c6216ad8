// Copyright 2026 The Revsim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "revsim/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "revsim/error.h"

namespace revsim {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& PlannerMutex() {
  static std::mutex mutex;
  return mutex;
}

fftw_complex* AsFftw(void* p) { return static_cast<fftw_complex*>(p); }

}  // namespace

size_t FastFftSize(size_t n) {
  for (size_t m = std::max<size_t>(n, 1);; ++m) {
    size_t r = m;
    for (size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

RealFft::RealFft(size_t size) : size_(size) {
  if (size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "FFT size must be positive");
  }
  std::lock_guard<std::mutex> lock(PlannerMutex());
  real_buf_ = fftw_alloc_real(size_);
  complex_buf_ = fftw_alloc_complex(num_bins());
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(size_), real_buf_,
                                       AsFftw(complex_buf_), FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(size_),
                                       AsFftw(complex_buf_), real_buf_,
                                       FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_buf_);
  fftw_free(complex_buf_);
}

void RealFft::Forward(std::span<const double> input,
                      std::span<std::complex<double>> output) {
  if (input.size() > size_ || output.size() != num_bins()) {
    throw Error(ErrorCode::kInvalidArgument, "FFT buffer size mismatch");
  }
  std::copy(input.begin(), input.end(), real_buf_);
  std::fill(real_buf_ + input.size(), real_buf_ + size_, 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const auto* bins = reinterpret_cast<const std::complex<double>*>(complex_buf_);
  std::copy(bins, bins + num_bins(), output.begin());
}

void RealFft::Inverse(std::span<const std::complex<double>> input,
                      std::span<double> output) {
  if (input.size() != num_bins() || output.size() != size_) {
    throw Error(ErrorCode::kInvalidArgument, "FFT buffer size mismatch");
  }
  // c2r destroys its input, so it always runs on the internal copy.
  auto* bins = reinterpret_cast<std::complex<double>*>(complex_buf_);
  std::copy(input.begin(), input.end(), bins);
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / static_cast<double>(size_);
  for (size_t i = 0; i < size_; ++i) output[i] = real_buf_[i] * scale;
}

}  // namespace revsim
