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

// Objective evaluation protocol: every ordered pair of a sampled corpus is
// scored, values are standardized per metric over the whole study, and
// medians are aggregated per (reference group, analyzed group). The sweep
// experiment scores one target against random RIRs from every panel count.

#ifndef REVSIM_EVALUATION_H_
#define REVSIM_EVALUATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revsim/dataset.h"
#include "revsim/dsp_core.h"
#include "revsim/metrics.h"
#include "revsim/preprocess.h"

namespace revsim {

// Produces the late-reverberation signal the metrics see for one entry.
using SignalSource = std::function<Signal(const RirEntry&)>;

// ReadRir followed by ExtractLateReverb.
SignalSource MakeCorpusSource(std::filesystem::path base_dir,
                              PreprocessConfig cfg);

struct EntryLabel {
  std::string partition;
  size_t partition_index = 0;
  int mic_position = 0;
  int n_reflective_panels = 0;
};

struct PairFailure {
  std::string ref_id;
  std::string analyzed_id;
  std::string message;
};

struct PairwiseStudy {
  MetricKind metric = MetricKind::kPc;
  uint64_t seed = 0;
  std::string config_digest;
  // Every ordered pair that was scored, sorted by (ref_id, analyzed_id).
  std::vector<MetricResult> results;
  std::vector<PairFailure> failures;
  std::map<std::string, EntryLabel> index;
};

// Labels every entry with its panel partition and mic position.
std::map<std::string, EntryLabel> LabelEntries(
    const std::vector<RirEntry>& entries, const std::vector<PanelBin>& bins);

struct StudyOptions {
  size_t jobs = 1;
  uint64_t seed = 0;
  std::vector<PanelBin> bins = DefaultPanelBins();
  // Upper bound on cached per-signal features. Larger studies are scored in
  // blocks, recomputing features as needed.
  size_t max_feature_bytes = size_t{1} << 30;
};

// Scores every ordered pair (including self-pairs) of `entries` with each
// metric. Signals are loaded once and truncated to the shortest one so
// per-signal features can be shared. A failing source aborts with the
// offending id; per-pair metric errors land in `failures`.
std::vector<PairwiseStudy> PairwiseMatrices(
    const std::vector<RirEntry>& entries,
    const std::vector<const Metric*>& metrics, const SignalSource& source,
    const StudyOptions& options = {});

PairwiseStudy PairwiseMatrix(const std::vector<RirEntry>& entries,
                             const Metric& metric, const SignalSource& source,
                             const StudyOptions& options = {});

// (x - mean) / std with the population standard deviation. Throws
// kDegenerateDistribution for fewer than two values or zero variance.
std::vector<double> Standardize(const std::vector<double>& values);

// Fills value_std of every result, pooling all pairs of the study.
void StandardizeStudy(PairwiseStudy& study);

double Median(std::vector<double> values);

enum class GroupKey { kPartition, kMicPosition };

struct PanelRange {
  int lo;
  int hi;  // inclusive
};

struct MedianOptions {
  // Keeps only pairs whose reference and analyzed panel counts both fall
  // within the range.
  std::optional<PanelRange> panel_filter;
  bool include_self_pairs = true;
};

struct MedianMatrix {
  std::vector<std::string> row_labels;  // reference group
  std::vector<std::string> col_labels;  // analyzed group
  RealMatrix values;                    // NaN marks a missing cell
  Eigen::MatrixXi counts;

  bool missing(Eigen::Index r, Eigen::Index c) const {
    return counts(r, c) == 0;
  }
};

// Median of standardized values per (reference group, analyzed group).
// Requires StandardizeStudy to have run.
MedianMatrix MedianByGroup(const PairwiseStudy& study, GroupKey key,
                           const MedianOptions& options = {});

struct SweepCurve {
  std::vector<int> delta;  // panel count minus the target's
  std::vector<double> median;
  std::vector<double> std;
  std::vector<size_t> count;
  bool normalized = false;
};

// For every panel count in `pool`, draws min(n_per_group, available) entries
// with a seed derived from `seed` and the panel count, scores them against
// `target` and records median and population standard deviation. All pool
// entries must share the target's mic position and the target must be part
// of the pool.
std::vector<SweepCurve> SweepExperiments(
    const RirEntry& target, const std::vector<RirEntry>& pool,
    size_t n_per_group, const std::vector<const Metric*>& metrics,
    const SignalSource& source, uint64_t seed, size_t jobs = 1);

SweepCurve SweepExperiment(const RirEntry& target,
                           const std::vector<RirEntry>& pool,
                           size_t n_per_group, const Metric& metric,
                           const SignalSource& source, uint64_t seed,
                           size_t jobs = 1);

// Maps medians onto [0, 1] and scales std by the same factor. Throws
// kDegenerateDistribution when the medians are flat.
SweepCurve NormalizeMinMax(const SweepCurve& curve);

}  // namespace revsim

#endif  // REVSIM_EVALUATION_H_
