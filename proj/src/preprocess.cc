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

#include "revsim/preprocess.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "revsim/error.h"

namespace revsim {

void OnsetConfig::Validate() const {
  if (hop == 0 || frame_length < 2 * hop) {
    throw Error(ErrorCode::kInvalidArgument,
                "onset config needs hop >= 1 and frame_length >= 2 * hop");
  }
}

size_t DetectOnset(const Signal& rir, const OnsetConfig& cfg) {
  cfg.Validate();
  if (rir.size() < 2 * cfg.frame_length) {
    throw Error(ErrorCode::kInvalidArgument,
                "signal too short for onset detection");
  }
  const std::span<const double> x = rir.samples();
  const size_t frames = NumFrames(x.size(), cfg.frame_length, cfg.hop);

  double previous = 0.0;
  double best_rise = 0.0;
  size_t best_frame = 0;
  bool found = false;
  for (size_t k = 0; k < frames; ++k) {
    double energy = 0.0;
    for (size_t i = k * cfg.hop; i < k * cfg.hop + cfg.frame_length; ++i) {
      energy += x[i] * x[i];
    }
    const double rise = energy - previous;
    if (!found || rise > best_rise) {
      best_rise = rise;
      best_frame = k;
      found = true;
    }
    previous = energy;
  }
  if (!(best_rise > 0.0)) {
    throw Error(ErrorCode::kDegenerateSignal,
                "no energy rise found; signal is silent");
  }
  return best_frame * cfg.hop;
}

size_t MixingTimeSamples(double t_mix_ms, int sample_rate) {
  if (!(t_mix_ms >= 0.0) || !std::isfinite(t_mix_ms)) {
    throw Error(ErrorCode::kInvalidArgument,
                "mixing time must be a non-negative number of ms");
  }
  return static_cast<size_t>(std::llround(t_mix_ms * sample_rate / 1000.0));
}

Signal TrimLateReverb(const Signal& rir, size_t onset, double t_mix_ms) {
  const size_t start = onset + MixingTimeSamples(t_mix_ms, rir.sample_rate());
  if (start >= rir.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "trim point " + std::to_string(start) +
                    " is at or beyond the signal end (" +
                    std::to_string(rir.size()) + " samples)");
  }
  return rir.Tail(start);
}

std::pair<Signal, Signal> AlignPair(const Signal& a, const Signal& b) {
  if (a.sample_rate() != b.sample_rate()) {
    throw Error(ErrorCode::kPairMismatch,
                "sample rates differ: " + std::to_string(a.sample_rate()) +
                    " vs " + std::to_string(b.sample_rate()) +
                    " Hz (resampling is not supported)");
  }
  const size_t n = std::min(a.size(), b.size());
  return {a.Head(n), b.Head(n)};
}

PreprocessResult ExtractLateReverb(const Signal& rir,
                                   const PreprocessConfig& cfg) {
  const size_t onset = DetectOnset(rir, cfg.onset);
  Signal late = TrimLateReverb(rir, onset, cfg.t_mix_ms);
  return {std::move(late), TrimSpec{onset, cfg.t_mix_ms, rir.size()}};
}

}  // namespace revsim
