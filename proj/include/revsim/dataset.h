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

// Corpus handling for a variable-acoustics RIR collection: manifest CSV,
// WAV loading, panel-count partitions, seeded subsets and synthetic RIRs.

#ifndef REVSIM_DATASET_H_
#define REVSIM_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revsim/dsp_core.h"

namespace revsim {

inline constexpr int kMaxReflectivePanels = 55;
inline constexpr int kNumMicPositions = 5;

struct RirEntry {
  std::string id;
  std::string path;
  int n_reflective_panels = 0;
  int mic_position = 1;
  // Additional manifest columns, in file order.
  std::vector<std::pair<std::string, std::string>> extra;

  friend bool operator==(const RirEntry&, const RirEntry&) = default;
};

struct Rir {
  std::string id;
  Signal signal;
  int n_reflective_panels;
  int mic_position;
};

// Manifest CSV: header naming at least id,path,n_reflective_panels,
// mic_position (any order, extra columns kept). Lines starting with '#' and
// blank lines are ignored. Throws kManifestFormat naming the line number.
std::vector<RirEntry> LoadManifest(const std::filesystem::path& path);
std::vector<RirEntry> ParseManifest(const std::string& text,
                                    const std::string& source_name);
std::string FormatManifest(const std::vector<RirEntry>& entries);
void WriteManifest(const std::filesystem::path& path,
                   const std::vector<RirEntry>& entries);

// FNV-1a over the formatted manifest; identifies a corpus for reproducibility.
std::string ManifestDigest(const std::vector<RirEntry>& entries);

// Relative entry paths are resolved against `base_dir`.
Rir ReadRir(const RirEntry& entry, const std::filesystem::path& base_dir = {});

struct SynthSpec {
  // Broadband reverberation time. Ignored when band_t60_s is non-empty.
  double t60_s = 1.0;
  // Per-band reverberation times aligned with `bands`.
  std::vector<double> band_t60_s;
  BandSet bands = ThirdOctaveBands();
  double length_s = 1.0;
  int sample_rate = 48000;
  uint64_t seed = 0;
  // Optional stationary noise floor, in dB relative to the initial level.
  std::optional<double> noise_floor_db;

  void Validate() const;
};

// Exponentially decaying Gaussian noise, amplitude envelope
// exp(-ln(1000) t / T60) so energy falls 60 dB per T60. In per-band mode the
// output is the sum over bands of band-limited noise with that band's T60.
Signal SynthRir(const SynthSpec& spec);

struct PanelBin {
  int lo;
  int hi;  // inclusive

  std::string Label() const;
};

// 0-4, 5-9, ..., 45-49, 50-55: eleven bins over the 0-55 panel range.
std::vector<PanelBin> DefaultPanelBins();

struct Partition {
  std::string label;
  size_t bin_index;
  std::vector<RirEntry> entries;
};

// Each entry lands in exactly one partition; empty partitions are dropped.
// Throws kInvalidArgument on overlapping bins or an entry outside every bin.
std::vector<Partition> PartitionByPanels(const std::vector<RirEntry>& entries,
                                         const std::vector<PanelBin>& bins);

// Exactly `per_mic` entries for each position in `mic_positions`, drawn
// without replacement. Output is ordered by mic position, then by manifest
// order. Throws kInsufficientData naming the first short mic.
std::vector<RirEntry> SampleSubset(const Partition& partition, size_t per_mic,
                                   uint64_t seed,
                                   const std::vector<int>& mic_positions = {
                                       1, 2, 3, 4, 5});

// Seeded choice of `count` distinct indices below `n`, ascending.
std::vector<size_t> SampleIndices(size_t n, size_t count, uint64_t seed);

}  // namespace revsim

#endif  // REVSIM_DATASET_H_
