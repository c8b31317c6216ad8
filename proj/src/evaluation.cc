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

#include "revsim/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "revsim/error.h"
#include "revsim/parallel.h"
#include "revsim/rng.h"

namespace revsim {

namespace {

// Loads every entry, aborting on the first failure with its id, and cuts
// all signals to the shortest length.
std::vector<Signal> LoadCommonLength(const std::vector<RirEntry>& entries,
                                     const SignalSource& source, size_t jobs) {
  std::vector<std::optional<Signal>> loaded(entries.size());
  ParallelFor(entries.size(), jobs, [&](size_t i) {
    try {
      loaded[i].emplace(source(entries[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "entry '" + entries[i].id + "': " + e.message());
    }
  });
  size_t common = std::numeric_limits<size_t>::max();
  for (const auto& s : loaded) common = std::min(common, s->size());
  std::vector<Signal> out;
  out.reserve(loaded.size());
  for (size_t i = 0; i < loaded.size(); ++i) {
    if (loaded[i]->sample_rate() != loaded[0]->sample_rate()) {
      throw Error(ErrorCode::kPairMismatch,
                  "entry '" + entries[i].id + "' has sample rate " +
                      std::to_string(loaded[i]->sample_rate()) +
                      " Hz, expected " +
                      std::to_string(loaded[0]->sample_rate()) + " Hz");
    }
    out.push_back(loaded[i]->Head(common));
  }
  return out;
}

struct Prepared {
  std::shared_ptr<const MetricFeatures> features;
  std::string error;
};

Prepared PrepareOne(const Metric& metric, const Signal& signal) {
  Prepared p;
  try {
    p.features = metric.Prepare(signal);
  } catch (const Error& e) {
    p.error = e.what();
  }
  return p;
}

// Features for signals[indices[k]], k = 0..indices.size()-1.
std::vector<Prepared> PrepareAll(const Metric& metric,
                                 const std::vector<Signal>& signals,
                                 const std::vector<size_t>& indices,
                                 size_t jobs) {
  std::vector<Prepared> out(indices.size());
  ParallelFor(indices.size(), jobs, [&](size_t k) {
    out[k] = PrepareOne(metric, signals[indices[k]]);
  });
  return out;
}

// Scores one pair; returns an error message instead of throwing.
std::optional<double> ScorePair(const Metric& metric, const Prepared& ref,
                                const Prepared& analyzed,
                                std::string& message) {
  if (!ref.features) {
    message = ref.error;
    return std::nullopt;
  }
  if (!analyzed.features) {
    message = analyzed.error;
    return std::nullopt;
  }
  try {
    const double v = metric.Compare(*ref.features, *analyzed.features);
    if (!std::isfinite(v) || v < 0.0) {
      message = "metric returned " + std::to_string(v);
      return std::nullopt;
    }
    return v;
  } catch (const Error& e) {
    message = e.what();
    return std::nullopt;
  }
}

// Fills values/messages (row-major over `order`) for all n^2 pairs. When
// the features of every signal do not fit in `max_bytes`, rows and columns
// are processed in blocks and column features are recomputed per block.
void ScoreAllPairs(const Metric& metric, const std::vector<Signal>& signals,
                   const std::vector<size_t>& order, size_t jobs,
                   size_t max_bytes,
                   std::vector<std::optional<double>>& values,
                   std::vector<std::string>& messages) {
  const size_t n = order.size();
  const Prepared probe = PrepareOne(metric, signals[order[0]]);
  const size_t per_feature =
      probe.features ? std::max<size_t>(1, probe.features->memory_bytes()) : 1;
  const size_t block =
      std::clamp<size_t>(max_bytes / (2 * per_feature), 1, n);

  auto slice = [&](size_t begin) {
    std::vector<size_t> idx;
    for (size_t k = begin; k < std::min(n, begin + block); ++k) {
      idx.push_back(order[k]);
    }
    return idx;
  };
  for (size_t row0 = 0; row0 < n; row0 += block) {
    const std::vector<Prepared> rows =
        PrepareAll(metric, signals, slice(row0), jobs);
    for (size_t col0 = 0; col0 < n; col0 += block) {
      std::vector<Prepared> cols_storage;
      if (col0 != row0) {
        cols_storage = PrepareAll(metric, signals, slice(col0), jobs);
      }
      const std::vector<Prepared>& cols =
          col0 == row0 ? rows : cols_storage;
      ParallelFor(rows.size(), jobs, [&](size_t r) {
        for (size_t c = 0; c < cols.size(); ++c) {
          const size_t slot = (row0 + r) * n + col0 + c;
          values[slot] = ScorePair(metric, rows[r], cols[c], messages[slot]);
        }
      });
    }
  }
}

double PopulationStd(const std::vector<double>& values, double mean) {
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

double Mean(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

}  // namespace

SignalSource MakeCorpusSource(std::filesystem::path base_dir,
                              PreprocessConfig cfg) {
  return [base_dir = std::move(base_dir), cfg](const RirEntry& entry) {
    return ExtractLateReverb(ReadRir(entry, base_dir).signal, cfg).late;
  };
}

std::map<std::string, EntryLabel> LabelEntries(
    const std::vector<RirEntry>& entries, const std::vector<PanelBin>& bins) {
  std::map<std::string, EntryLabel> index;
  for (const Partition& p : PartitionByPanels(entries, bins)) {
    for (const RirEntry& e : p.entries) {
      index[e.id] = EntryLabel{p.label, p.bin_index, e.mic_position,
                               e.n_reflective_panels};
    }
  }
  return index;
}

std::vector<PairwiseStudy> PairwiseMatrices(
    const std::vector<RirEntry>& entries,
    const std::vector<const Metric*>& metrics, const SignalSource& source,
    const StudyOptions& options) {
  if (entries.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "a pairwise study needs at least two entries");
  }
  std::set<std::string> ids;
  for (const RirEntry& e : entries) {
    if (!ids.insert(e.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate id '" + e.id + "'");
    }
  }
  const std::map<std::string, EntryLabel> index =
      LabelEntries(entries, options.bins);
  const std::vector<Signal> signals =
      LoadCommonLength(entries, source, options.jobs);

  // Output order is by id, independent of manifest order and scheduling.
  std::vector<size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return entries[a].id < entries[b].id;
  });

  const size_t n = entries.size();
  std::vector<PairwiseStudy> studies;
  for (const Metric* metric : metrics) {
    std::vector<std::optional<double>> values(n * n);
    std::vector<std::string> messages(n * n);
    ScoreAllPairs(*metric, signals, order, options.jobs,
                  options.max_feature_bytes, values, messages);

    PairwiseStudy study;
    study.metric = metric->kind();
    study.seed = options.seed;
    study.config_digest = metric->config_digest();
    study.index = index;
    for (size_t row = 0; row < n; ++row) {
      for (size_t col = 0; col < n; ++col) {
        const RirEntry& ref = entries[order[row]];
        const RirEntry& analyzed = entries[order[col]];
        if (values[row * n + col]) {
          MetricResult r;
          r.value = *values[row * n + col];
          r.metric = metric->kind();
          r.ref_id = ref.id;
          r.analyzed_id = analyzed.id;
          r.config_digest = study.config_digest;
          study.results.push_back(std::move(r));
        } else {
          study.failures.push_back(
              {ref.id, analyzed.id, messages[row * n + col]});
        }
      }
    }
    if (!study.failures.empty()) {
      Warn(std::string(MetricName(metric->kind())) + ": " +
           std::to_string(study.failures.size()) +
           " pairs failed and are excluded from aggregation");
    }
    studies.push_back(std::move(study));
  }
  return studies;
}

PairwiseStudy PairwiseMatrix(const std::vector<RirEntry>& entries,
                             const Metric& metric, const SignalSource& source,
                             const StudyOptions& options) {
  return std::move(PairwiseMatrices(entries, {&metric}, source, options)[0]);
}

std::vector<double> Standardize(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kDegenerateDistribution,
                "standardization needs at least two values");
  }
  const double mean = Mean(values);
  const double sd = PopulationStd(values, mean);
  if (!(sd > 0.0)) {
    throw Error(ErrorCode::kDegenerateDistribution,
                "values have zero variance");
  }
  std::vector<double> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - mean) / sd;
  }
  return out;
}

void StandardizeStudy(PairwiseStudy& study) {
  std::vector<double> raw;
  raw.reserve(study.results.size());
  for (const MetricResult& r : study.results) raw.push_back(r.value);
  const std::vector<double> z = Standardize(raw);
  for (size_t i = 0; i < z.size(); ++i) study.results[i].value_std = z[i];
}

double Median(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInsufficientData, "median of an empty set");
  }
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

MedianMatrix MedianByGroup(const PairwiseStudy& study, GroupKey key,
                           const MedianOptions& options) {
  auto passes = [&](const EntryLabel& label) {
    return !options.panel_filter ||
           (label.n_reflective_panels >= options.panel_filter->lo &&
            label.n_reflective_panels <= options.panel_filter->hi);
  };
  // Group order: partitions by bin, mics ascending.
  std::map<std::pair<size_t, std::string>, size_t> group_slot;
  for (const auto& [id, label] : study.index) {
    if (!passes(label)) continue;
    if (key == GroupKey::kPartition) {
      group_slot.emplace(std::make_pair(label.partition_index, label.partition),
                         0);
    } else {
      group_slot.emplace(
          std::make_pair(static_cast<size_t>(label.mic_position),
                         std::to_string(label.mic_position)),
          0);
    }
  }
  if (group_slot.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "no entries left after filtering");
  }
  MedianMatrix out;
  size_t slot = 0;
  for (auto& [k, s] : group_slot) {
    s = slot++;
    out.row_labels.push_back(k.second);
  }
  out.col_labels = out.row_labels;
  auto group_of = [&](const EntryLabel& label) {
    return key == GroupKey::kPartition
               ? group_slot.at({label.partition_index, label.partition})
               : group_slot.at({static_cast<size_t>(label.mic_position),
                                std::to_string(label.mic_position)});
  };

  const size_t g = group_slot.size();
  std::vector<std::vector<double>> cells(g * g);
  for (const MetricResult& r : study.results) {
    if (!r.value_std) {
      throw Error(ErrorCode::kInvalidArgument,
                  "study must be standardized before aggregation");
    }
    if (!options.include_self_pairs && r.ref_id == r.analyzed_id) continue;
    const auto ref = study.index.find(r.ref_id);
    const auto ana = study.index.find(r.analyzed_id);
    if (ref == study.index.end() || ana == study.index.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "result references an unlabeled id");
    }
    if (!passes(ref->second) || !passes(ana->second)) continue;
    cells[group_of(ref->second) * g + group_of(ana->second)].push_back(
        *r.value_std);
  }

  const Eigen::Index gi = static_cast<Eigen::Index>(g);
  out.values = RealMatrix::Constant(gi, gi,
                                    std::numeric_limits<double>::quiet_NaN());
  out.counts = Eigen::MatrixXi::Zero(gi, gi);
  for (size_t r = 0; r < g; ++r) {
    for (size_t c = 0; c < g; ++c) {
      std::vector<double>& cell = cells[r * g + c];
      if (cell.empty()) continue;
      out.counts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          static_cast<int>(cell.size());
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Median(std::move(cell));
    }
  }
  return out;
}

std::vector<SweepCurve> SweepExperiments(
    const RirEntry& target, const std::vector<RirEntry>& pool,
    size_t n_per_group, const std::vector<const Metric*>& metrics,
    const SignalSource& source, uint64_t seed, size_t jobs) {
  const auto target_in_pool =
      std::find_if(pool.begin(), pool.end(),
                   [&](const RirEntry& e) { return e.id == target.id; });
  if (target_in_pool == pool.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "target '" + target.id + "' is not part of the sweep pool");
  }
  if (n_per_group == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_per_group must be >= 1");
  }
  std::map<int, std::vector<const RirEntry*>> groups;
  for (const RirEntry& e : pool) {
    if (e.mic_position != target.mic_position) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pool entry '" + e.id + "' is at mic " +
                      std::to_string(e.mic_position) + ", target at mic " +
                      std::to_string(target.mic_position));
    }
    groups[e.n_reflective_panels].push_back(&e);
  }

  // Sampled entries, target first; each group's slice follows.
  std::vector<RirEntry> selected = {target};
  std::vector<std::pair<int, std::pair<size_t, size_t>>> spans;
  for (const auto& [panels, members] : groups) {
    const size_t take = std::min(n_per_group, members.size());
    const size_t begin = selected.size();
    for (size_t i : SampleIndices(members.size(), take,
                                  DeriveSeed(seed, static_cast<uint64_t>(
                                                       panels)))) {
      selected.push_back(*members[i]);
    }
    spans.push_back({panels, {begin, selected.size()}});
  }

  const std::vector<Signal> signals =
      LoadCommonLength(selected, source, jobs);
  std::vector<SweepCurve> curves;
  for (const Metric* metric : metrics) {
    const Prepared target_features = PrepareOne(*metric, signals[0]);
    if (!target_features.features) {
      throw Error(ErrorCode::kDegenerateSignal,
                  "target '" + target.id + "': " + target_features.error);
    }
    // Candidates are prepared, scored and dropped one at a time.
    std::vector<std::optional<double>> values(selected.size());
    std::vector<std::string> messages(selected.size());
    ParallelFor(selected.size() - 1, jobs, [&](size_t k) {
      const Prepared candidate = PrepareOne(*metric, signals[k + 1]);
      values[k + 1] =
          ScorePair(*metric, target_features, candidate, messages[k + 1]);
    });

    SweepCurve curve;
    size_t failures = 0;
    for (const auto& [panels, range] : spans) {
      std::vector<double> group;
      for (size_t k = range.first; k < range.second; ++k) {
        if (values[k]) {
          group.push_back(*values[k]);
        } else {
          ++failures;
        }
      }
      if (group.empty()) continue;
      const double mean = Mean(group);
      curve.delta.push_back(panels - target.n_reflective_panels);
      curve.std.push_back(PopulationStd(group, mean));
      curve.count.push_back(group.size());
      curve.median.push_back(Median(std::move(group)));
    }
    if (failures > 0) {
      Warn(std::string(MetricName(metric->kind())) + " sweep: " +
           std::to_string(failures) + " comparisons failed");
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

SweepCurve SweepExperiment(const RirEntry& target,
                           const std::vector<RirEntry>& pool,
                           size_t n_per_group, const Metric& metric,
                           const SignalSource& source, uint64_t seed,
                           size_t jobs) {
  return std::move(SweepExperiments(target, pool, n_per_group, {&metric},
                                    source, seed, jobs)[0]);
}

SweepCurve NormalizeMinMax(const SweepCurve& curve) {
  if (curve.median.empty()) {
    throw Error(ErrorCode::kDegenerateDistribution, "empty sweep curve");
  }
  const auto [lo, hi] =
      std::minmax_element(curve.median.begin(), curve.median.end());
  const double min = *lo;
  const double range = *hi - *lo;
  if (!(range > 0.0)) {
    throw Error(ErrorCode::kDegenerateDistribution,
                "sweep medians are flat; cannot min-max normalize");
  }
  SweepCurve out = curve;
  for (double& m : out.median) m = (m - min) / range;
  for (double& s : out.std) s /= range;
  out.normalized = true;
  return out;
}

}  // namespace revsim
