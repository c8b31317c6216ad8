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

#ifndef REVSIM_ERROR_H_
#define REVSIM_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace revsim {

enum class ErrorCode {
  kInvalidArgument,
  kPairMismatch,
  kDegenerateSignal,
  kBandOutOfRange,
  kManifestFormat,
  kUnsupportedFormat,
  kIo,
  kInsufficientData,
  kDegenerateDistribution,
  kConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The code lets
// callers (the CLI, the Python bindings) distinguish recoverable cases such
// as a dropped band from hard input errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  // The message without the code prefix, for re-wrapping with context.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

// Emits a warning line on stderr unless warnings are muted.
void Warn(std::string_view message);
void SetWarningsEnabled(bool enabled);

}  // namespace revsim

#endif  // REVSIM_ERROR_H_
