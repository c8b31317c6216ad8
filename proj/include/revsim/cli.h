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

// Experiment runner behind the `revsim` executable. Each command is also a
// plain function so it can be driven from tests.

#ifndef REVSIM_CLI_H_
#define REVSIM_CLI_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "revsim/dataset.h"
#include "revsim/evaluation.h"
#include "revsim/metrics.h"
#include "revsim/preprocess.h"

namespace revsim {

// Environment variable consulted when no output directory is configured.
inline constexpr const char kOutputDirEnv[] = "REVSIM_OUTPUT_DIR";

struct RunConfig {
  std::filesystem::path manifest;
  std::vector<MetricKind> metrics = {std::begin(kAllMetrics),
                                     std::end(kAllMetrics)};
  PreprocessConfig preprocess;
  // The mixing time must be stated explicitly for any command that trims.
  bool t_mix_set = false;
  MetricConfigs metric_configs;
  uint64_t seed = 0;
  std::filesystem::path output_dir;
  size_t jobs = 0;  // 0 uses every hardware thread
  size_t max_feature_mb = 1024;

  // Pairwise study: entries drawn per mic and partition; 0 keeps everything.
  size_t per_mic = 0;
  std::vector<PanelBin> bins = DefaultPanelBins();

  // Aggregation.
  GroupKey group_key = GroupKey::kPartition;
  std::optional<PanelRange> panel_filter;
  bool include_self_pairs = true;

  // Sweep.
  std::string target_id;
  size_t n_per_group = 50;

  // Throws kConfig on the first problem.
  void Validate() const;
};

// JSON config file. Unknown keys are rejected. Relative paths are resolved
// against the directory holding the file.
RunConfig ParseRunConfig(const std::string& json_text,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// "PC,EDC" style list; throws kConfig on unknown or duplicate names.
std::vector<MetricKind> ParseMetricList(const std::string& list);

// Output directory resolution: explicit value, then the environment
// variable, then "revsim_out".
std::filesystem::path ResolveOutputDir(const std::filesystem::path& configured);

struct SynthOptions {
  size_t groups = 11;
  size_t per_group = 25;
  double t60_min_s = 0.5;
  double t60_max_s = 2.0;
  double length_s = 1.0;
  double predelay_ms = 5.0;
  int sample_rate = 48000;
  uint64_t seed = 0;
  std::filesystem::path output_dir;
};

// Panel count of synthetic group g out of G spread evenly over 0..55.
int SynthGroupPanels(size_t group, size_t groups);
// Log-spaced T60 of synthetic group g; rises with the panel count.
double SynthGroupT60(size_t group, const SynthOptions& options);

// Manifest entries (with a t60_s column) of the synthetic corpus, without
// touching the file system.
std::vector<RirEntry> SynthManifest(const SynthOptions& options);
// Signal of one synthetic entry: predelay silence followed by decaying noise.
Signal SynthEntrySignal(const RirEntry& entry, const SynthOptions& options);

// Writes rirs/<id>.wav and manifest.csv. Returns the manifest path.
std::filesystem::path CmdSynth(const SynthOptions& options);

// Trimmed WAVs under late/ plus onsets.csv.
void CmdPreprocess(const RunConfig& config);

struct ComputeSummary {
  size_t entries = 0;
  size_t pairs = 0;
  size_t errors = 0;
  double seconds = 0.0;
};

// results_raw.csv and results_std.csv.
ComputeSummary CmdCompute(const RunConfig& config);

// median_<key>_<METRIC>.csv and .svg for every metric in the results file.
void CmdAggregate(const RunConfig& config,
                  const std::filesystem::path& results_csv);

// sweep_<METRIC>.csv (normalized), sweep_<METRIC>_raw.csv and sweep.svg.
void CmdSweep(const RunConfig& config);

// Parses argv and dispatches. Returns the process exit code.
int RunCli(int argc, const char* const* argv);

}  // namespace revsim

#endif  // REVSIM_CLI_H_
