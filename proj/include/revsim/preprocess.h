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

#ifndef REVSIM_PREPROCESS_H_
#define REVSIM_PREPROCESS_H_

#include <cstddef>
#include <utility>

#include "revsim/dsp_core.h"

namespace revsim {

struct OnsetConfig {
  size_t frame_length = 256;
  size_t hop = 64;

  void Validate() const;
};

struct TrimSpec {
  size_t onset_sample = 0;
  double t_mix_ms = 0.0;
  size_t tail_end = 0;
};

// Start sample of the frame with the largest rise in frame energy over its
// predecessor. A silent frame is assumed before the signal, so a response
// that starts at sample 0 has its onset at 0. Ties go to the earliest frame.
// Throws kDegenerateSignal for an all-zero signal.
size_t DetectOnset(const Signal& rir, const OnsetConfig& cfg = {});

size_t MixingTimeSamples(double t_mix_ms, int sample_rate);

// Samples from onset + round(t_mix_ms * fs / 1000) to the end.
Signal TrimLateReverb(const Signal& rir, size_t onset, double t_mix_ms);

// Both truncated to the shorter length. Throws kPairMismatch on differing
// sample rates.
std::pair<Signal, Signal> AlignPair(const Signal& a, const Signal& b);

struct PreprocessConfig {
  OnsetConfig onset;
  double t_mix_ms = 0.0;
};

struct PreprocessResult {
  Signal late;
  TrimSpec trim;
};

// DetectOnset followed by TrimLateReverb.
PreprocessResult ExtractLateReverb(const Signal& rir,
                                   const PreprocessConfig& cfg);

}  // namespace revsim

#endif  // REVSIM_PREPROCESS_H_
