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

#include "revsim/error.h"

#include <atomic>
#include <iostream>
#include <mutex>

namespace revsim {

namespace {

std::atomic<bool> g_warnings_enabled{true};
std::mutex g_warn_mutex;

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kPairMismatch:
      return "pair-mismatch";
    case ErrorCode::kDegenerateSignal:
      return "degenerate-signal";
    case ErrorCode::kBandOutOfRange:
      return "band-out-of-range";
    case ErrorCode::kManifestFormat:
      return "manifest-format";
    case ErrorCode::kUnsupportedFormat:
      return "unsupported-format";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kInsufficientData:
      return "insufficient-data";
    case ErrorCode::kDegenerateDistribution:
      return "degenerate-distribution";
    case ErrorCode::kConfig:
      return "config";
  }
  return "unknown";
}

void Warn(std::string_view message) {
  if (!g_warnings_enabled.load(std::memory_order_relaxed)) return;
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  std::cerr << "warning: " << message << '\n';
}

void SetWarningsEnabled(bool enabled) {
  g_warnings_enabled.store(enabled, std::memory_order_relaxed);
}

}  // namespace revsim
