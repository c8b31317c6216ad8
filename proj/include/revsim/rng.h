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

#ifndef REVSIM_RNG_H_
#define REVSIM_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace revsim {

// Mixes a parent seed with a stream index (SplitMix64 finalizer). Every
// random stream in the harness is derived from one user seed through this.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

// Seeded generator with platform-independent output. std::mt19937_64 is fully
// specified by the standard, but the std distributions are not, so uniform,
// bounded and Gaussian draws are implemented here on top of the raw words.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextWord() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform integer in [0, bound). bound must be > 0.
  uint64_t Below(uint64_t bound);
  // Standard normal via Box-Muller.
  double Gaussian();

  std::vector<double> GaussianVector(size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace revsim

#endif  // REVSIM_RNG_H_
