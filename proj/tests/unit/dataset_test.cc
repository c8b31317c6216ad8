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

#include "revsim/dataset.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <set>

#include "revsim/io_util.h"
#include "revsim/wav.h"
#include "test_util.h"

namespace revsim {
namespace {

using testing::ThrownCode;

constexpr char kHeader[] = "id,path,n_reflective_panels,mic_position\n";

TEST(ManifestTest, ParsesRowsInOrder) {
  const auto entries = ParseManifest(std::string(kHeader) +
                                         "a,a.wav,0,1\n"
                                         "# comment\n"
                                         "\n"
                                         "b,sub/b.wav,55,5\n"
                                         "c,c.wav,20,3\n",
                                     "m.csv");
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].id, "a");
  EXPECT_EQ(entries[1].path, "sub/b.wav");
  EXPECT_EQ(entries[1].n_reflective_panels, 55);
  EXPECT_EQ(entries[2].mic_position, 3);
}

TEST(ManifestTest, HeaderOnlyIsEmpty) {
  EXPECT_TRUE(ParseManifest(kHeader, "m.csv").empty());
}

TEST(ManifestTest, ColumnsInAnyOrderWithExtras) {
  const auto entries = ParseManifest(
      "mic_position,t60_s,id,n_reflective_panels,path\n2,0.5,x,7,x.wav\n",
      "m.csv");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].id, "x");
  EXPECT_EQ(entries[0].mic_position, 2);
  ASSERT_EQ(entries[0].extra.size(), 1u);
  EXPECT_EQ(entries[0].extra[0].first, "t60_s");
  EXPECT_EQ(entries[0].extra[0].second, "0.5");
}

TEST(ManifestTest, ErrorsNameTheLine) {
  auto message = [](const std::string& text) -> std::string {
    try {
      ParseManifest(text, "m.csv");
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kManifestFormat);
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(std::string(kHeader) + "a,a.wav,0,1\nb,b.wav,0,9\n")
                .find("line 3"),
            std::string::npos);
  EXPECT_NE(message(std::string(kHeader) + "a,a.wav,56,1\n").find("line 2"),
            std::string::npos);
  EXPECT_NE(message(std::string(kHeader) + "a,a.wav,x,1\n").find("line 2"),
            std::string::npos);
  EXPECT_NE(message(std::string(kHeader) + "a,a.wav,1,1\na,b.wav,1,1\n")
                .find("duplicate"),
            std::string::npos);
  EXPECT_NE(message("id,path,mic_position\n").find("n_reflective_panels"),
            std::string::npos);
  EXPECT_NE(message(std::string(kHeader) + "a,a.wav,1\n").find("line 2"),
            std::string::npos);
  EXPECT_FALSE(message("").empty());
}

TEST(ManifestTest, RoundTripThroughFile) {
  const auto dir = testing::ScratchDir("manifest");
  std::vector<RirEntry> entries = {
      {"a", "a.wav", 3, 1, {{"note", "has, comma"}}},
      {"b \"q\"", "dir/b.wav", 55, 5, {{"note", ""}}},
  };
  WriteManifest(dir / "m.csv", entries);
  EXPECT_EQ(LoadManifest(dir / "m.csv"), entries);
  EXPECT_EQ(ManifestDigest(entries), ManifestDigest(LoadManifest(dir / "m.csv")));
  entries[0].mic_position = 2;
  EXPECT_NE(ManifestDigest(entries), ManifestDigest(LoadManifest(dir / "m.csv")));
  EXPECT_EQ(ThrownCode([&] { LoadManifest(dir / "missing.csv"); }),
            ErrorCode::kIo);
}

TEST(WavTest, Pcm16FullScale) {
  const std::string bytes =
      EncodeWav(Signal({32767.0 / 32768.0, -1.0, 0.0}, 44100), WavFormat::kPcm16);
  const Signal s = DecodeWav(bytes, "x.wav");
  EXPECT_EQ(s.sample_rate(), 44100);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s.data()[0], 0.99997, 1e-5);
  EXPECT_EQ(s.data()[1], -1.0);
  EXPECT_EQ(s.data()[2], 0.0);
}

TEST(WavTest, FloatFormatsAreExact) {
  const Signal x = testing::Noise(1000, 1).Scaled(0.1);
  const Signal f64 = DecodeWav(EncodeWav(x, WavFormat::kFloat64), "x");
  EXPECT_EQ(f64, x);
  const Signal f32 = DecodeWav(EncodeWav(x, WavFormat::kFloat32), "x");
  for (size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(f32.data()[i], static_cast<double>(static_cast<float>(x.data()[i])));
  }
  // A float32 file read back and re-encoded is bit-identical.
  EXPECT_EQ(EncodeWav(f32, WavFormat::kFloat32), EncodeWav(x, WavFormat::kFloat32));
}

TEST(WavTest, IntegerFormatsRoundTripWithinQuantization) {
  const Signal x = testing::Noise(500, 2).Scaled(0.2);
  for (auto [format, step] : {std::pair{WavFormat::kPcm16, 1.0 / 32768},
                              std::pair{WavFormat::kPcm24, 1.0 / 8388608},
                              std::pair{WavFormat::kPcm32, 1.0 / 2147483648.0}}) {
    const Signal y = DecodeWav(EncodeWav(x, format), "x");
    for (size_t i = 0; i < x.size(); ++i) {
      EXPECT_LE(std::abs(y.data()[i] - x.data()[i]), step);
    }
  }
}

std::string StereoWav() {
  std::string b = EncodeWav(Signal({0.1, 0.2, 0.3, 0.4}, 48000), WavFormat::kPcm16);
  // Patch the channel count and block alignment of the fmt chunk.
  const uint16_t channels = 2, align = 4;
  std::memcpy(&b[22], &channels, 2);
  std::memcpy(&b[32], &align, 2);
  return b;
}

TEST(WavTest, RejectsUnsupportedAndTruncated) {
  EXPECT_EQ(ThrownCode([] { DecodeWav(StereoWav(), "s.wav"); }),
            ErrorCode::kUnsupportedFormat);
  const std::string good = EncodeWav(testing::Noise(100, 3), WavFormat::kPcm16);
  EXPECT_EQ(ThrownCode([&] { DecodeWav(good.substr(0, good.size() - 10), "t"); }),
            ErrorCode::kIo);
  EXPECT_EQ(ThrownCode([&] { DecodeWav(good.substr(0, 20), "t"); }),
            ErrorCode::kIo);
  EXPECT_EQ(ThrownCode([] { DecodeWav("not a wav file at all....", "t"); }),
            ErrorCode::kIo);
}

TEST(ReadRirTest, ResolvesRelativePaths) {
  const auto dir = testing::ScratchDir("readrir");
  const Signal x = testing::Noise(256, 4).Scaled(0.5);
  WriteWav(dir / "sub" / "a.wav", x, WavFormat::kFloat64);
  const Rir rir = ReadRir({"a", "sub/a.wav", 10, 2, {}}, dir);
  EXPECT_EQ(rir.signal, x);
  EXPECT_EQ(rir.n_reflective_panels, 10);
  EXPECT_EQ(rir.mic_position, 2);
  EXPECT_EQ(ThrownCode([&] { ReadRir({"b", "nope.wav", 0, 1, {}}, dir); }),
            ErrorCode::kIo);
}

double DbAt(const Signal& x, size_t n_edc, size_t at) {
  const std::vector<double> db =
      EdcToDbNormalized(SchroederEdc(x.samples().first(n_edc)));
  return db[at];
}

TEST(SynthRirTest, BroadbandT60Recovery) {
  std::vector<double> drops;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    SynthSpec spec;
    spec.t60_s = 1.0;
    spec.length_s = 2.0;
    spec.seed = seed;
    drops.push_back(-DbAt(SynthRir(spec), 72000, 48000));
  }
  std::sort(drops.begin(), drops.end());
  EXPECT_NEAR(0.5 * (drops[9] + drops[10]), 60.0, 1.0);
}

TEST(SynthRirTest, DeterministicAndSeedSensitive) {
  SynthSpec spec;
  spec.seed = 9;
  EXPECT_EQ(SynthRir(spec), SynthRir(spec));
  SynthSpec other = spec;
  other.seed = 10;
  EXPECT_NE(SynthRir(spec), SynthRir(other));
  EXPECT_EQ(SynthRir(spec).size(), 48000u);
}

TEST(SynthRirTest, InfiniteT60IsFlat) {
  SynthSpec spec;
  spec.t60_s = INFINITY;
  spec.length_s = 1.0;
  const Signal x = SynthRir(spec);
  const std::vector<double> edc = SchroederEdc(x.samples());
  // Flat power: EDC falls linearly to zero.
  for (double frac : {0.25, 0.5, 0.75}) {
    const size_t t = static_cast<size_t>(frac * x.size());
    EXPECT_NEAR(edc[t] / edc[0], 1.0 - frac, 0.02);
  }
}

TEST(SynthRirTest, PerBandT60Recovery) {
  SetWarningsEnabled(false);
  const BandSet bands = ThirdOctaveBands();
  SynthSpec spec;
  spec.bands = bands;
  spec.length_s = 2.0;
  spec.seed = 3;
  for (size_t b = 0; b < bands.size(); ++b) {
    spec.band_t60_s.push_back(0.3 + 0.025 * static_cast<double>(b));
  }
  const Signal x = SynthRir(spec);
  SetWarningsEnabled(true);
  for (size_t b = 0; b < bands.size(); ++b) {
    if (bands.bands()[b].center_hz < 200.0) continue;
    const Signal y = Bandpass(x, bands.bands()[b]);
    const std::vector<double> db = EdcToDbNormalized(SchroederEdc(y.samples()));
    // Least-squares slope between -5 and -35 dB.
    double st = 0, sd = 0, stt = 0, std_ = 0;
    int n = 0;
    for (size_t t = 0; t < db.size(); ++t) {
      if (db[t] > -5.0 || db[t] < -35.0) continue;
      const double sec = static_cast<double>(t) / 48000.0;
      st += sec;
      sd += db[t];
      stt += sec * sec;
      std_ += sec * db[t];
      ++n;
    }
    const double slope = (n * std_ - st * sd) / (n * stt - st * st);
    const double t60 = -60.0 / slope;
    EXPECT_NEAR(t60, spec.band_t60_s[b], 0.1 * spec.band_t60_s[b])
        << bands.bands()[b].center_hz;
  }
}

TEST(SynthRirTest, NoiseFloorAndValidation) {
  SynthSpec spec;
  spec.t60_s = 0.2;
  spec.noise_floor_db = -60.0;
  const Signal x = SynthRir(spec);
  double tail = 0.0;
  for (size_t i = 40000; i < 48000; ++i) tail += x.data()[i] * x.data()[i];
  EXPECT_NEAR(10.0 * std::log10(tail / 8000.0), -60.0, 1.0);
  spec.length_s = 0.05;
  EXPECT_EQ(ThrownCode([&] { SynthRir(spec); }), ErrorCode::kInvalidArgument);
  spec = {};
  spec.t60_s = -1.0;
  EXPECT_EQ(ThrownCode([&] { SynthRir(spec); }), ErrorCode::kInvalidArgument);
}

std::vector<RirEntry> Grid(int per_mic, const std::vector<int>& panels) {
  std::vector<RirEntry> out;
  for (int p : panels) {
    for (int mic = 1; mic <= 5; ++mic) {
      for (int k = 0; k < per_mic; ++k) {
        out.push_back({"p" + std::to_string(p) + "_m" + std::to_string(mic) +
                           "_" + std::to_string(k),
                       "x.wav", p, mic, {}});
      }
    }
  }
  return out;
}

TEST(PartitionTest, DefaultBins) {
  const auto bins = DefaultPanelBins();
  ASSERT_EQ(bins.size(), 11u);
  EXPECT_EQ(bins.front().Label(), "0-4");
  EXPECT_EQ(bins.back().Label(), "50-55");

  const auto parts = PartitionByPanels(Grid(1, {20, 0, 55, 22}), bins);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0].label, "0-4");
  EXPECT_EQ(parts[1].label, "20-24");
  EXPECT_EQ(parts[1].bin_index, 4u);
  EXPECT_EQ(parts[1].entries.size(), 10u);
  EXPECT_EQ(parts[2].label, "50-55");
  EXPECT_TRUE(PartitionByPanels({}, bins).empty());
}

TEST(PartitionTest, DisjointCover) {
  std::vector<int> all;
  for (int p = 0; p <= 55; ++p) all.push_back(p);
  const auto entries = Grid(1, all);
  std::set<std::string> seen;
  for (const Partition& part : PartitionByPanels(entries, DefaultPanelBins())) {
    EXPECT_FALSE(part.entries.empty());
    for (const RirEntry& e : part.entries) EXPECT_TRUE(seen.insert(e.id).second);
  }
  EXPECT_EQ(seen.size(), entries.size());
}

TEST(PartitionTest, Errors) {
  EXPECT_EQ(ThrownCode([] {
              PartitionByPanels(Grid(1, {3}), {{0, 5}, {5, 9}});
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { PartitionByPanels(Grid(1, {30}), {{0, 9}}); }),
            ErrorCode::kInvalidArgument);
}

TEST(SampleSubsetTest, PerMicCounts) {
  const Partition part = PartitionByPanels(Grid(8, {12}), DefaultPanelBins())[0];
  const auto subset = SampleSubset(part, 5, 42);
  ASSERT_EQ(subset.size(), 25u);
  for (int mic = 1; mic <= 5; ++mic) {
    EXPECT_EQ(std::count_if(subset.begin(), subset.end(),
                            [&](const RirEntry& e) { return e.mic_position == mic; }),
              5);
  }
  std::set<std::string> ids;
  for (const RirEntry& e : subset) EXPECT_TRUE(ids.insert(e.id).second);
  EXPECT_TRUE(SampleSubset(part, 0, 42).empty());
  EXPECT_EQ(SampleSubset(part, 5, 42), subset);
  EXPECT_NE(SampleSubset(part, 5, 43), subset);
}

TEST(SampleSubsetTest, InsufficientMicIsNamed) {
  std::vector<RirEntry> entries = Grid(3, {12});
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [](const RirEntry& e) {
                                 return e.mic_position == 4 && e.id.back() != '0';
                               }),
                entries.end());
  const Partition part = PartitionByPanels(entries, DefaultPanelBins())[0];
  try {
    SampleSubset(part, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
    EXPECT_NE(std::string(e.what()).find("mic 4"), std::string::npos);
  }
}

TEST(SampleIndicesTest, DistinctSortedDeterministic) {
  const auto a = SampleIndices(100, 30, 7);
  ASSERT_EQ(a.size(), 30u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::set<size_t>(a.begin(), a.end()).size(), 30u);
  EXPECT_EQ(SampleIndices(100, 30, 7), a);
  EXPECT_EQ(SampleIndices(5, 5, 1), (std::vector<size_t>{0, 1, 2, 3, 4}));
}

}  // namespace
}  // namespace revsim
