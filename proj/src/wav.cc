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

#include "revsim/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "revsim/error.h"
#include "revsim/io_util.h"

namespace revsim {

namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  ByteReader(const std::string& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  size_t remaining() const { return bytes_.size() - pos_; }
  size_t pos() const { return pos_; }

  void Need(size_t n) const {
    if (remaining() < n) {
      throw Error(ErrorCode::kIo, name_ + ": truncated WAV file");
    }
  }
  std::string Tag() {
    Need(4);
    std::string tag = bytes_.substr(pos_, 4);
    pos_ += 4;
    return tag;
  }
  template <typename T>
  T Read() {
    Need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  void Skip(size_t n) {
    Need(n);
    pos_ += n;
  }
  const char* Data() const { return bytes_.data() + pos_; }

 private:
  const std::string& bytes_;
  const std::string& name_;
  size_t pos_ = 0;
};

template <typename T>
void Append(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

int64_t QuantizePcm(double v, int bits) {
  const double full_scale = std::ldexp(1.0, bits - 1);
  const double clipped = std::clamp(v, -1.0, 1.0);
  return std::clamp<int64_t>(std::llround(clipped * full_scale),
                             -static_cast<int64_t>(full_scale),
                             static_cast<int64_t>(full_scale) - 1);
}

}  // namespace

Signal DecodeWav(const std::string& bytes, const std::string& source_name) {
  ByteReader in(bytes, source_name);
  if (in.Tag() != "RIFF") {
    throw Error(ErrorCode::kIo, source_name + ": not a RIFF file");
  }
  in.Read<uint32_t>();
  if (in.Tag() != "WAVE") {
    throw Error(ErrorCode::kIo, source_name + ": not a WAVE file");
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  while (true) {
    const std::string tag = in.Tag();
    const uint32_t size = in.Read<uint32_t>();
    if (tag == "fmt ") {
      in.Need(size);
      const size_t start = in.pos();
      format = in.Read<uint16_t>();
      channels = in.Read<uint16_t>();
      sample_rate = in.Read<uint32_t>();
      in.Read<uint32_t>();  // byte rate
      in.Read<uint16_t>();  // block align
      bits = in.Read<uint16_t>();
      if (format == kFormatExtensible) {
        if (size < 40) {
          throw Error(ErrorCode::kIo, source_name + ": short extensible fmt");
        }
        in.Skip(8);  // cbSize, valid bits, channel mask
        format = in.Read<uint16_t>();  // first two bytes of the subformat GUID
        in.Skip(14);
      }
      in.Skip(size - (in.pos() - start));
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) {
        throw Error(ErrorCode::kIo, source_name + ": data chunk before fmt");
      }
      if (channels != 1) {
        throw Error(ErrorCode::kUnsupportedFormat,
                    source_name + ": " + std::to_string(channels) +
                        " channels, only mono is supported");
      }
      const bool pcm =
          format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
      const bool flt = format == kFormatFloat && (bits == 32 || bits == 64);
      if (!pcm && !flt) {
        throw Error(ErrorCode::kUnsupportedFormat,
                    source_name + ": encoding " + std::to_string(format) +
                        " with " + std::to_string(bits) + " bits");
      }
      in.Need(size);
      const size_t width = bits / 8;
      const size_t count = size / width;
      std::vector<double> samples(count);
      const auto* p = reinterpret_cast<const unsigned char*>(in.Data());
      for (size_t i = 0; i < count; ++i, p += width) {
        if (flt && bits == 32) {
          float v;
          std::memcpy(&v, p, 4);
          samples[i] = v;
        } else if (flt) {
          double v;
          std::memcpy(&v, p, 8);
          samples[i] = v;
        } else if (bits == 16) {
          int16_t v;
          std::memcpy(&v, p, 2);
          samples[i] = v / 32768.0;
        } else if (bits == 24) {
          int32_t v = static_cast<int32_t>(p[0]) |
                      (static_cast<int32_t>(p[1]) << 8) |
                      (static_cast<int32_t>(static_cast<int8_t>(p[2])) << 16);
          samples[i] = v / 8388608.0;
        } else {
          int32_t v;
          std::memcpy(&v, p, 4);
          samples[i] = v / 2147483648.0;
        }
      }
      return Signal(std::move(samples), static_cast<int>(sample_rate));
    } else {
      in.Skip(size + (size & 1));
    }
  }
}

std::string EncodeWav(const Signal& signal, WavFormat format) {
  uint16_t tag = kFormatPcm;
  uint16_t bits = 16;
  switch (format) {
    case WavFormat::kPcm16:
      bits = 16;
      break;
    case WavFormat::kPcm24:
      bits = 24;
      break;
    case WavFormat::kPcm32:
      bits = 32;
      break;
    case WavFormat::kFloat32:
      tag = kFormatFloat;
      bits = 32;
      break;
    case WavFormat::kFloat64:
      tag = kFormatFloat;
      bits = 64;
      break;
  }
  const uint32_t width = bits / 8;
  const uint32_t data_size = static_cast<uint32_t>(signal.size() * width);
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  Append<uint32_t>(out, 36 + data_size);
  out += "WAVEfmt ";
  Append<uint32_t>(out, 16);
  Append<uint16_t>(out, tag);
  Append<uint16_t>(out, 1);
  Append<uint32_t>(out, static_cast<uint32_t>(signal.sample_rate()));
  Append<uint32_t>(out, static_cast<uint32_t>(signal.sample_rate()) * width);
  Append<uint16_t>(out, static_cast<uint16_t>(width));
  Append<uint16_t>(out, bits);
  out += "data";
  Append<uint32_t>(out, data_size);
  for (double v : signal.samples()) {
    if (format == WavFormat::kFloat32) {
      Append<float>(out, static_cast<float>(v));
    } else if (format == WavFormat::kFloat64) {
      Append<double>(out, v);
    } else if (bits == 16) {
      Append<int16_t>(out, static_cast<int16_t>(QuantizePcm(v, 16)));
    } else if (bits == 24) {
      const int32_t q = static_cast<int32_t>(QuantizePcm(v, 24));
      out.push_back(static_cast<char>(q & 0xFF));
      out.push_back(static_cast<char>((q >> 8) & 0xFF));
      out.push_back(static_cast<char>((q >> 16) & 0xFF));
    } else {
      Append<int32_t>(out, static_cast<int32_t>(QuantizePcm(v, 32)));
    }
  }
  return out;
}

Signal ReadWav(const std::filesystem::path& path) {
  return DecodeWav(ReadFileBytes(path), path.string());
}

void WriteWav(const std::filesystem::path& path, const Signal& signal,
              WavFormat format) {
  WriteFileAtomic(path, EncodeWav(signal, format));
}

}  // namespace revsim
