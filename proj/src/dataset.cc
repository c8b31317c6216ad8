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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "revsim/error.h"
#include "revsim/io_util.h"
#include "revsim/rng.h"
#include "revsim/wav.h"

namespace revsim {

namespace {

constexpr const char* kRequiredColumns[] = {"id", "path", "n_reflective_panels",
                                            "mic_position"};

// ln(1000): amplitude decay constant for 60 dB of energy per T60.
const double kLn1000 = std::log(1000.0);

[[noreturn]] void ManifestError(const std::string& source, size_t line,
                                const std::string& what) {
  throw Error(ErrorCode::kManifestFormat,
              source + " line " + std::to_string(line) + ": " + what);
}

int ParseInt(const std::string& text, const std::string& source, size_t line,
             const char* column) {
  const std::string t = Trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    ManifestError(source, line,
                  std::string("column ") + column + " is not an integer: '" +
                      text + "'");
  }
  return value;
}

void ApplyEnvelope(std::vector<double>& samples, double t60_s,
                   int sample_rate) {
  const double rate = kLn1000 / (t60_s * sample_rate);
  for (size_t i = 0; i < samples.size(); ++i) {
    samples[i] *= std::exp(-rate * static_cast<double>(i));
  }
}

}  // namespace

std::vector<RirEntry> ParseManifest(const std::string& text,
                                    const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  std::vector<std::string> header;
  std::map<std::string, size_t> column;
  std::vector<RirEntry> entries;
  std::set<std::string> seen_ids;
  std::vector<std::string> fields;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (!SplitCsvLine(line, fields)) {
      ManifestError(source_name, line_no, "unterminated quoted field");
    }
    if (header.empty()) {
      header.clear();
      for (const std::string& f : fields) header.push_back(Trim(f));
      for (size_t i = 0; i < header.size(); ++i) {
        if (!column.emplace(header[i], i).second) {
          ManifestError(source_name, line_no,
                        "duplicate column '" + header[i] + "'");
        }
      }
      for (const char* required : kRequiredColumns) {
        if (!column.count(required)) {
          ManifestError(source_name, line_no,
                        std::string("missing column '") + required + "'");
        }
      }
      continue;
    }
    if (fields.size() != header.size()) {
      ManifestError(source_name, line_no,
                    "expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(fields.size()));
    }
    RirEntry entry;
    entry.id = Trim(fields[column["id"]]);
    entry.path = Trim(fields[column["path"]]);
    entry.n_reflective_panels = ParseInt(fields[column["n_reflective_panels"]],
                                         source_name, line_no,
                                         "n_reflective_panels");
    entry.mic_position = ParseInt(fields[column["mic_position"]], source_name,
                                  line_no, "mic_position");
    if (entry.id.empty()) ManifestError(source_name, line_no, "empty id");
    if (entry.path.empty()) ManifestError(source_name, line_no, "empty path");
    if (entry.n_reflective_panels < 0 ||
        entry.n_reflective_panels > kMaxReflectivePanels) {
      ManifestError(source_name, line_no,
                    "n_reflective_panels " +
                        std::to_string(entry.n_reflective_panels) +
                        " outside 0-55");
    }
    if (entry.mic_position < 1 || entry.mic_position > kNumMicPositions) {
      ManifestError(source_name, line_no,
                    "mic_position " + std::to_string(entry.mic_position) +
                        " outside 1-5");
    }
    if (!seen_ids.insert(entry.id).second) {
      ManifestError(source_name, line_no, "duplicate id '" + entry.id + "'");
    }
    for (size_t i = 0; i < header.size(); ++i) {
      const std::string& name = header[i];
      if (name == "id" || name == "path" || name == "n_reflective_panels" ||
          name == "mic_position") {
        continue;
      }
      entry.extra.emplace_back(name, fields[i]);
    }
    entries.push_back(std::move(entry));
  }
  if (header.empty()) {
    ManifestError(source_name, line_no, "missing header row");
  }
  return entries;
}

std::vector<RirEntry> LoadManifest(const std::filesystem::path& path) {
  return ParseManifest(ReadFileBytes(path), path.string());
}

std::string FormatManifest(const std::vector<RirEntry>& entries) {
  std::vector<std::string> extra_columns;
  for (const RirEntry& e : entries) {
    for (const auto& [key, value] : e.extra) {
      if (std::find(extra_columns.begin(), extra_columns.end(), key) ==
          extra_columns.end()) {
        extra_columns.push_back(key);
      }
    }
  }
  std::ostringstream out;
  out << "id,path,n_reflective_panels,mic_position";
  for (const std::string& c : extra_columns) out << ',' << CsvField(c);
  out << '\n';
  for (const RirEntry& e : entries) {
    out << CsvField(e.id) << ',' << CsvField(e.path) << ','
        << e.n_reflective_panels << ',' << e.mic_position;
    for (const std::string& c : extra_columns) {
      out << ',';
      for (const auto& [key, value] : e.extra) {
        if (key == c) {
          out << CsvField(value);
          break;
        }
      }
    }
    out << '\n';
  }
  return out.str();
}

void WriteManifest(const std::filesystem::path& path,
                   const std::vector<RirEntry>& entries) {
  WriteFileAtomic(path, FormatManifest(entries));
}

std::string ManifestDigest(const std::vector<RirEntry>& entries) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : FormatManifest(entries)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

Rir ReadRir(const RirEntry& entry, const std::filesystem::path& base_dir) {
  std::filesystem::path path(entry.path);
  if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
  return Rir{entry.id, ReadWav(path), entry.n_reflective_panels,
             entry.mic_position};
}

void SynthSpec::Validate() const {
  if (!(length_s >= 0.1)) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic length must be >= 0.1 s");
  }
  if (sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  if (band_t60_s.empty()) {
    if (!(t60_s > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "T60 must be positive");
    }
  } else {
    if (band_t60_s.size() != bands.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "per-band T60 list must match the band set");
    }
    for (double t : band_t60_s) {
      if (!(t > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "T60 must be positive");
      }
    }
  }
}

Signal SynthRir(const SynthSpec& spec) {
  spec.Validate();
  const size_t n =
      static_cast<size_t>(std::llround(spec.length_s * spec.sample_rate));
  std::vector<double> out;

  if (spec.band_t60_s.empty()) {
    Rng rng(DeriveSeed(spec.seed, 0));
    out = rng.GaussianVector(n);
    if (std::isfinite(spec.t60_s)) {
      ApplyEnvelope(out, spec.t60_s, spec.sample_rate);
    }
  } else {
    out.assign(n, 0.0);
    const double nyquist = 0.5 * spec.sample_rate;
    for (size_t b = 0; b < spec.bands.size(); ++b) {
      const Band& band = spec.bands.bands()[b];
      if (band.upper_hz > nyquist) continue;
      Rng rng(DeriveSeed(spec.seed, 1 + b));
      const Signal noise(rng.GaussianVector(n), spec.sample_rate);
      std::vector<double> component = Bandpass(noise, band).data();
      ApplyEnvelope(component, spec.band_t60_s[b], spec.sample_rate);
      for (size_t i = 0; i < n; ++i) out[i] += component[i];
    }
  }

  if (spec.noise_floor_db) {
    Rng rng(DeriveSeed(spec.seed, 0xF1002));
    const double amplitude = std::pow(10.0, *spec.noise_floor_db / 20.0);
    for (double& v : out) v += amplitude * rng.Gaussian();
  }
  return Signal(std::move(out), spec.sample_rate);
}

std::string PanelBin::Label() const {
  return std::to_string(lo) + "-" + std::to_string(hi);
}

std::vector<PanelBin> DefaultPanelBins() {
  std::vector<PanelBin> bins;
  for (int lo = 0; lo < 50; lo += 5) bins.push_back({lo, lo + 4});
  bins.push_back({50, kMaxReflectivePanels});
  return bins;
}

std::vector<Partition> PartitionByPanels(const std::vector<RirEntry>& entries,
                                         const std::vector<PanelBin>& bins) {
  for (size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].lo > bins[i].hi) {
      throw Error(ErrorCode::kInvalidArgument,
                  "panel bin " + bins[i].Label() + " is empty");
    }
    for (size_t j = 0; j < i; ++j) {
      if (bins[i].lo <= bins[j].hi && bins[j].lo <= bins[i].hi) {
        throw Error(ErrorCode::kInvalidArgument,
                    "panel bins " + bins[j].Label() + " and " +
                        bins[i].Label() + " overlap");
      }
    }
  }
  std::vector<Partition> all(bins.size());
  for (size_t i = 0; i < bins.size(); ++i) {
    all[i].label = bins[i].Label();
    all[i].bin_index = i;
  }
  for (const RirEntry& e : entries) {
    auto it = std::find_if(bins.begin(), bins.end(), [&](const PanelBin& b) {
      return e.n_reflective_panels >= b.lo && e.n_reflective_panels <= b.hi;
    });
    if (it == bins.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "entry '" + e.id + "' with " +
                      std::to_string(e.n_reflective_panels) +
                      " panels falls outside every bin");
    }
    all[static_cast<size_t>(it - bins.begin())].entries.push_back(e);
  }
  std::vector<Partition> out;
  for (Partition& p : all) {
    if (!p.entries.empty()) out.push_back(std::move(p));
  }
  // Bins may be given in any order; partitions follow panel count.
  std::stable_sort(out.begin(), out.end(),
                   [&](const Partition& a, const Partition& b) {
                     return bins[a.bin_index].lo < bins[b.bin_index].lo;
                   });
  return out;
}

std::vector<size_t> SampleIndices(size_t n, size_t count, uint64_t seed) {
  if (count > n) {
    throw Error(ErrorCode::kInsufficientData,
                "cannot draw " + std::to_string(count) + " of " +
                    std::to_string(n) + " items");
  }
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + static_cast<size_t>(rng.Below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<RirEntry> SampleSubset(const Partition& partition, size_t per_mic,
                                   uint64_t seed,
                                   const std::vector<int>& mic_positions) {
  std::vector<RirEntry> out;
  if (per_mic == 0) return out;
  for (int mic : mic_positions) {
    std::vector<const RirEntry*> pool;
    for (const RirEntry& e : partition.entries) {
      if (e.mic_position == mic) pool.push_back(&e);
    }
    if (pool.size() < per_mic) {
      throw Error(ErrorCode::kInsufficientData,
                  "partition " + partition.label + " has " +
                      std::to_string(pool.size()) + " entries for mic " +
                      std::to_string(mic) + ", need " +
                      std::to_string(per_mic));
    }
    const uint64_t mic_seed =
        DeriveSeed(seed, static_cast<uint64_t>(mic) * 1000 +
                             partition.bin_index);
    for (size_t i : SampleIndices(pool.size(), per_mic, mic_seed)) {
      out.push_back(*pool[i]);
    }
  }
  return out;
}

}  // namespace revsim
