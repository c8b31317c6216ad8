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

#ifndef REVSIM_FFT_H_
#define REVSIM_FFT_H_

#include <complex>
#include <cstddef>
#include <span>

namespace revsim {

// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7; FFTW is
// fastest on such sizes.
size_t FastFftSize(size_t n);

// Real-to-complex FFT of a fixed length backed by FFTW. Plans are built with
// FFTW_ESTIMATE so results do not depend on timing; planning is serialized
// internally, execution is safe from any thread on distinct objects.
class RealFft {
 public:
  explicit RealFft(size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  size_t size() const { return size_; }
  size_t num_bins() const { return size_ / 2 + 1; }

  // Unnormalized forward transform. `input` may be shorter than size(); the
  // remainder is zero-filled.
  void Forward(std::span<const double> input,
               std::span<std::complex<double>> output);
  // Inverse transform including the 1/size scaling, so Inverse(Forward(x)) = x.
  void Inverse(std::span<const std::complex<double>> input,
               std::span<double> output);

 private:
  size_t size_;
  double* real_buf_;
  void* complex_buf_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace revsim

#endif  // REVSIM_FFT_H_
