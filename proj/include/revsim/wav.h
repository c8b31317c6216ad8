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

#ifndef REVSIM_WAV_H_
#define REVSIM_WAV_H_

#include <filesystem>
#include <string>

#include "revsim/dsp_core.h"

namespace revsim {

enum class WavFormat { kPcm16, kPcm24, kPcm32, kFloat32, kFloat64 };

// Mono RIFF/WAVE reader. Integer PCM (16/24/32 bit) is scaled by full scale
// into [-1, 1); float data is returned as stored. Multichannel or other
// encodings throw kUnsupportedFormat, short or malformed files throw kIo.
Signal ReadWav(const std::filesystem::path& path);

// Integer formats clip to [-1, 1].
void WriteWav(const std::filesystem::path& path, const Signal& signal,
              WavFormat format = WavFormat::kFloat32);

// In-memory variants used by the file functions.
Signal DecodeWav(const std::string& bytes, const std::string& source_name);
std::string EncodeWav(const Signal& signal, WavFormat format);

}  // namespace revsim

#endif  // REVSIM_WAV_H_
