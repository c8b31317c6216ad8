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

#include "revsim/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "revsim/error.h"
#include "revsim/io_util.h"
#include "revsim/parallel.h"
#include "revsim/report.h"
#include "revsim/rng.h"
#include "revsim/wav.h"

namespace revsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Re-throws any library error with the name of the stage that failed.
template <typename Fn>
decltype(auto) Stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), name + ": " + e.message());
  }
}

[[noreturn]] void ConfigError(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

void CheckKeys(const json& obj, const std::string& where,
               const std::set<std::string>& allowed) {
  if (!obj.is_object()) ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) ConfigError("unknown key '" + where + "." + key + "'");
  }
}

template <typename T>
T Get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    ConfigError("'" + where + "." + key + "' has the wrong type");
  }
}

size_t GetCount(const json& obj, const std::string& key,
                const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<int64_t>() < 0) {
    ConfigError("'" + where + "." + key + "' must be a non-negative integer");
  }
  return v.get<size_t>();
}

PanelRange ParsePanelRange(const std::string& text) {
  int lo = 0, hi = 0;
  char dash = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d %c %d %c", &lo, &dash, &hi, &extra) != 3 ||
      dash != '-' || lo > hi) {
    ConfigError("panel range '" + text + "' must look like 35-49");
  }
  return {lo, hi};
}

GroupKey ParseGroupKey(const std::string& text) {
  if (text == "partition") return GroupKey::kPartition;
  if (text == "mic" || text == "mic_position") return GroupKey::kMicPosition;
  ConfigError("group key '" + text + "' must be 'partition' or 'mic'");
}

std::string GroupKeyName(GroupKey key) {
  return key == GroupKey::kPartition ? "partition" : "mic";
}

BandSet BandsFromCenters(const std::vector<double>& centers) {
  std::vector<Band> bands;
  for (double c : centers) {
    if (!(c > 0.0)) ConfigError("band centers must be positive");
    bands.push_back({c, c * std::pow(2.0, -1.0 / 6.0),
                     c * std::pow(2.0, 1.0 / 6.0)});
  }
  return BandSet(std::move(bands));
}

std::string ExtraValue(const RirEntry& entry, const std::string& key) {
  for (const auto& [k, v] : entry.extra) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::kManifestFormat,
              "entry '" + entry.id + "' has no '" + key + "' column");
}

size_t Jobs(const RunConfig& config) {
  if (config.jobs > 0) return config.jobs;
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

std::vector<RirEntry> LoadEntries(const RunConfig& config) {
  if (config.manifest.empty()) ConfigError("no manifest configured");
  return Stage("load manifest", [&] { return LoadManifest(config.manifest); });
}

void RequireTmix(const RunConfig& config) {
  if (!config.t_mix_set) {
    ConfigError("preprocess.t_mix_ms must be set (config or --t-mix-ms)");
  }
}

std::vector<std::unique_ptr<Metric>> MakeMetrics(const RunConfig& config) {
  std::vector<std::unique_ptr<Metric>> out;
  for (MetricKind kind : config.metrics) {
    out.push_back(MakeMetric(kind, config.metric_configs));
  }
  return out;
}

std::vector<const Metric*> Pointers(
    const std::vector<std::unique_ptr<Metric>>& metrics) {
  std::vector<const Metric*> out;
  for (const auto& m : metrics) out.push_back(m.get());
  return out;
}

}  // namespace

void RunConfig::Validate() const {
  if (metrics.empty()) ConfigError("at least one metric must be selected");
  if (n_per_group == 0) ConfigError("sweep.n_per_group must be >= 1");
  if (max_feature_mb == 0) ConfigError("max_feature_mb must be >= 1");
  if (!(preprocess.t_mix_ms >= 0.0) || !std::isfinite(preprocess.t_mix_ms)) {
    ConfigError("preprocess.t_mix_ms must be a finite value >= 0");
  }
  try {
    preprocess.onset.Validate();
    metric_configs.pc.Validate();
    metric_configs.mss.Validate();
  } catch (const Error& e) {
    ConfigError(e.message());
  }
  if (metric_configs.edc.bands.empty()) ConfigError("edc band set is empty");
  if (bins.empty()) ConfigError("sampling.bins is empty");
  std::vector<PanelBin> sorted = bins;
  std::sort(sorted.begin(), sorted.end(),
            [](const PanelBin& a, const PanelBin& b) { return a.lo < b.lo; });
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].lo > sorted[i].hi) {
      ConfigError("panel bin " + sorted[i].Label() + " is empty");
    }
    if (i > 0 && sorted[i].lo <= sorted[i - 1].hi) {
      ConfigError("panel bins " + sorted[i - 1].Label() + " and " +
                  sorted[i].Label() + " overlap");
    }
  }
}

std::vector<MetricKind> ParseMetricList(const std::string& list) {
  std::vector<MetricKind> out;
  size_t begin = 0;
  while (begin <= list.size()) {
    const size_t end = std::min(list.find(',', begin), list.size());
    const std::string name = Trim(list.substr(begin, end - begin));
    if (!name.empty()) {
      const MetricKind kind = ParseMetricKind(name);
      if (std::find(out.begin(), out.end(), kind) != out.end()) {
        ConfigError("metric '" + name + "' listed twice");
      }
      out.push_back(kind);
    }
    begin = end + 1;
  }
  if (out.empty()) ConfigError("empty metric list");
  return out;
}

RunConfig ParseRunConfig(const std::string& json_text,
                         const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  CheckKeys(root, "config",
            {"manifest", "metrics", "seed", "jobs", "output_dir",
             "max_feature_mb", "preprocess", "pc", "mss", "edc", "sampling",
             "aggregate", "sweep"});
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  RunConfig cfg;
  if (root.contains("manifest")) {
    cfg.manifest = resolve(Get<std::string>(root, "manifest", "config"));
  }
  if (root.contains("output_dir")) {
    cfg.output_dir = resolve(Get<std::string>(root, "output_dir", "config"));
  }
  if (root.contains("metrics")) {
    const json& m = root["metrics"];
    std::string list;
    if (m.is_string()) {
      list = m.get<std::string>();
    } else if (m.is_array()) {
      for (const json& name : m) {
        if (!name.is_string()) ConfigError("metrics must be names");
        list += name.get<std::string>() + ",";
      }
    } else {
      ConfigError("metrics must be a list of names");
    }
    cfg.metrics = ParseMetricList(list);
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) {
      ConfigError("seed must be a non-negative integer");
    }
    cfg.seed = root["seed"].get<uint64_t>();
  }
  if (root.contains("jobs")) cfg.jobs = GetCount(root, "jobs", "config");
  if (root.contains("max_feature_mb")) {
    cfg.max_feature_mb = GetCount(root, "max_feature_mb", "config");
  }
  if (root.contains("preprocess")) {
    const json& p = root["preprocess"];
    CheckKeys(p, "preprocess", {"frame_length", "hop", "t_mix_ms"});
    if (p.contains("frame_length")) {
      cfg.preprocess.onset.frame_length =
          GetCount(p, "frame_length", "preprocess");
    }
    if (p.contains("hop")) {
      cfg.preprocess.onset.hop = GetCount(p, "hop", "preprocess");
    }
    if (p.contains("t_mix_ms")) {
      cfg.preprocess.t_mix_ms = Get<double>(p, "t_mix_ms", "preprocess");
      cfg.t_mix_set = true;
    }
  }
  if (root.contains("pc")) {
    const json& p = root["pc"];
    PcConfig& pc = cfg.metric_configs.pc;
    CheckKeys(p, "pc",
              {"stft_window", "stft_hop", "kernel_side", "stride", "epsilon"});
    if (p.contains("stft_window")) pc.stft_window = GetCount(p, "stft_window", "pc");
    if (p.contains("stft_hop")) pc.stft_hop = GetCount(p, "stft_hop", "pc");
    if (p.contains("kernel_side")) pc.kernel_side = GetCount(p, "kernel_side", "pc");
    if (p.contains("stride")) pc.stride = GetCount(p, "stride", "pc");
    if (p.contains("epsilon")) pc.epsilon = Get<double>(p, "epsilon", "pc");
  }
  if (root.contains("mss")) {
    const json& m = root["mss"];
    MssConfig& mss = cfg.metric_configs.mss;
    CheckKeys(m, "mss", {"resolutions", "log_epsilon"});
    if (m.contains("resolutions")) {
      mss.resolutions.clear();
      for (const json& r : m["resolutions"]) {
        if (!r.is_array() || r.size() != 3) {
          ConfigError("mss.resolutions entries are [fft_size, hop, window]");
        }
        mss.resolutions.push_back(
            {r[0].get<size_t>(), r[1].get<size_t>(), r[2].get<size_t>()});
      }
    }
    if (m.contains("log_epsilon")) {
      mss.log_epsilon = Get<double>(m, "log_epsilon", "mss");
    }
  }
  if (root.contains("edc")) {
    const json& e = root["edc"];
    CheckKeys(e, "edc", {"bands", "floor_db"});
    if (e.contains("bands")) {
      const json& b = e["bands"];
      if (b.is_string()) {
        if (b.get<std::string>() != "third-octave") {
          ConfigError("edc.bands must be 'third-octave' or a list of centers");
        }
        cfg.metric_configs.edc.bands = ThirdOctaveBands();
      } else {
        cfg.metric_configs.edc.bands =
            BandsFromCenters(Get<std::vector<double>>(e, "bands", "edc"));
      }
    }
    if (e.contains("floor_db")) {
      cfg.metric_configs.edc.floor_db = Get<double>(e, "floor_db", "edc");
    }
  }
  if (root.contains("sampling")) {
    const json& s = root["sampling"];
    CheckKeys(s, "sampling", {"per_mic", "bins"});
    if (s.contains("per_mic")) cfg.per_mic = GetCount(s, "per_mic", "sampling");
    if (s.contains("bins")) {
      cfg.bins.clear();
      for (const json& b : s["bins"]) {
        if (!b.is_string()) ConfigError("sampling.bins entries look like \"0-4\"");
        const PanelRange r = ParsePanelRange(b.get<std::string>());
        cfg.bins.push_back({r.lo, r.hi});
      }
    }
  }
  if (root.contains("aggregate")) {
    const json& a = root["aggregate"];
    CheckKeys(a, "aggregate", {"group_key", "panel_filter", "include_self_pairs"});
    if (a.contains("group_key")) {
      cfg.group_key = ParseGroupKey(Get<std::string>(a, "group_key", "aggregate"));
    }
    if (a.contains("panel_filter") && !a["panel_filter"].is_null()) {
      cfg.panel_filter =
          ParsePanelRange(Get<std::string>(a, "panel_filter", "aggregate"));
    }
    if (a.contains("include_self_pairs")) {
      cfg.include_self_pairs = Get<bool>(a, "include_self_pairs", "aggregate");
    }
  }
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    CheckKeys(s, "sweep", {"target_id", "n_per_group"});
    if (s.contains("target_id")) {
      cfg.target_id = Get<std::string>(s, "target_id", "sweep");
    }
    if (s.contains("n_per_group")) {
      cfg.n_per_group = GetCount(s, "n_per_group", "sweep");
    }
  }
  cfg.Validate();
  return cfg;
}

RunConfig LoadRunConfig(const fs::path& path) {
  const std::string text = ReadFileBytes(path);
  try {
    return ParseRunConfig(text, path.parent_path());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

fs::path ResolveOutputDir(const fs::path& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    return fs::path(env);
  }
  return fs::path("revsim_out");
}

int SynthGroupPanels(size_t group, size_t groups) {
  if (groups <= 1) return 0;
  return static_cast<int>(std::lround(static_cast<double>(group) *
                                      kMaxReflectivePanels /
                                      static_cast<double>(groups - 1)));
}

double SynthGroupT60(size_t group, const SynthOptions& options) {
  if (options.groups <= 1) return options.t60_min_s;
  const double frac =
      static_cast<double>(group) / static_cast<double>(options.groups - 1);
  return options.t60_min_s *
         std::pow(options.t60_max_s / options.t60_min_s, frac);
}

std::vector<RirEntry> SynthManifest(const SynthOptions& options) {
  if (options.groups == 0 || options.per_group == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "synth needs at least one group and one RIR per group");
  }
  if (options.groups > kMaxReflectivePanels + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "at most " + std::to_string(kMaxReflectivePanels + 1) +
                    " groups fit the panel range");
  }
  if (!(options.t60_min_s > 0.0) || !(options.t60_max_s >= options.t60_min_s)) {
    throw Error(ErrorCode::kInvalidArgument,
                "need 0 < t60_min <= t60_max");
  }
  if (!(options.predelay_ms >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "predelay must be >= 0");
  }
  std::vector<RirEntry> entries;
  uint64_t index = 0;
  char id[64];
  for (size_t g = 0; g < options.groups; ++g) {
    const double t60 = SynthGroupT60(g, options);
    for (size_t k = 0; k < options.per_group; ++k, ++index) {
      std::snprintf(id, sizeof(id), "g%03zu_r%03zu", g, k);
      RirEntry e;
      e.id = id;
      e.path = "rirs/" + e.id + ".wav";
      e.n_reflective_panels = SynthGroupPanels(g, options.groups);
      e.mic_position = static_cast<int>(k % kNumMicPositions) + 1;
      e.extra = {{"t60_s", FormatDouble(t60)},
                 {"synth_seed", std::to_string(DeriveSeed(options.seed, index))}};
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

Signal SynthEntrySignal(const RirEntry& entry, const SynthOptions& options) {
  SynthSpec spec;
  spec.t60_s = std::stod(ExtraValue(entry, "t60_s"));
  spec.seed = std::stoull(ExtraValue(entry, "synth_seed"));
  spec.length_s = options.length_s;
  spec.sample_rate = options.sample_rate;
  const Signal tail = SynthRir(spec);
  const size_t predelay = static_cast<size_t>(
      std::lround(options.predelay_ms * options.sample_rate / 1000.0));
  std::vector<double> samples(predelay, 0.0);
  samples.insert(samples.end(), tail.samples().begin(), tail.samples().end());
  return Signal(std::move(samples), options.sample_rate);
}

fs::path CmdSynth(const SynthOptions& options) {
  const fs::path out = ResolveOutputDir(options.output_dir);
  const std::vector<RirEntry> entries =
      Stage("synth", [&] { return SynthManifest(options); });
  Stage("synth", [&] {
    ParallelFor(entries.size(), std::max<unsigned>(1, std::thread::hardware_concurrency()),
                [&](size_t i) {
                  WriteWav(out / entries[i].path,
                           SynthEntrySignal(entries[i], options));
                });
  });
  const fs::path manifest = out / "manifest.csv";
  Stage("write manifest", [&] { WriteManifest(manifest, entries); });
  return manifest;
}

void CmdPreprocess(const RunConfig& config) {
  RequireTmix(config);
  const std::vector<RirEntry> entries = LoadEntries(config);
  const fs::path out = ResolveOutputDir(config.output_dir);
  const fs::path base = config.manifest.parent_path();
  std::vector<std::optional<PreprocessResult>> results(entries.size());
  std::vector<size_t> lengths(entries.size());
  Stage("preprocess", [&] {
    ParallelFor(entries.size(), Jobs(config), [&](size_t i) {
      try {
        const Rir rir = ReadRir(entries[i], base);
        lengths[i] = rir.signal.size();
        results[i] = ExtractLateReverb(rir.signal, config.preprocess);
        WriteWav(out / "late" / (entries[i].id + ".wav"), results[i]->late);
      } catch (const Error& e) {
        throw Error(e.code(), "entry '" + entries[i].id + "': " + e.message());
      }
    });
  });
  std::string report =
      "id,onset_sample,start_sample,input_length,output_length,sample_rate\n";
  std::vector<RirEntry> late_entries = entries;
  for (size_t i = 0; i < entries.size(); ++i) {
    const PreprocessResult& r = *results[i];
    const size_t start = r.trim.onset_sample +
                         MixingTimeSamples(r.trim.t_mix_ms, r.late.sample_rate());
    report += CsvField(entries[i].id) + "," +
              std::to_string(r.trim.onset_sample) + "," +
              std::to_string(start) + "," + std::to_string(lengths[i]) + "," +
              std::to_string(r.late.size()) + "," +
              std::to_string(r.late.sample_rate()) + "\n";
    late_entries[i].path = entries[i].id + ".wav";
  }
  Stage("write", [&] {
    WriteFileAtomic(out / "onsets.csv", report);
    WriteManifest(out / "late" / "manifest.csv", late_entries);
  });
}

ComputeSummary CmdCompute(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  RequireTmix(config);
  const std::vector<RirEntry> manifest = LoadEntries(config);
  const fs::path out = ResolveOutputDir(config.output_dir);

  std::vector<RirEntry> entries;
  Stage("sample", [&] {
    if (config.per_mic == 0) {
      entries = manifest;
      PartitionByPanels(entries, config.bins);  // validates coverage
      return;
    }
    for (const Partition& p : PartitionByPanels(manifest, config.bins)) {
      for (RirEntry& e : SampleSubset(p, config.per_mic, config.seed)) {
        entries.push_back(std::move(e));
      }
    }
  });

  const auto metrics = MakeMetrics(config);
  StudyOptions options;
  options.jobs = Jobs(config);
  options.seed = config.seed;
  options.bins = config.bins;
  options.max_feature_bytes = config.max_feature_mb << 20;
  std::vector<PairwiseStudy> studies = Stage("compute", [&] {
    return PairwiseMatrices(
        entries, Pointers(metrics),
        MakeCorpusSource(config.manifest.parent_path(), config.preprocess),
        options);
  });

  ComputeSummary summary;
  summary.entries = entries.size();
  std::vector<MetricResult> all;
  std::string failures = "metric,ref_id,analyzed_id,message\n";
  for (PairwiseStudy& study : studies) {
    Stage("standardize " + std::string(MetricName(study.metric)),
          [&] { StandardizeStudy(study); });
    summary.pairs += study.results.size() + study.failures.size();
    summary.errors += study.failures.size();
    for (const PairFailure& f : study.failures) {
      failures += std::string(MetricName(study.metric)) + "," +
                  CsvField(f.ref_id) + "," + CsvField(f.analyzed_id) + "," +
                  CsvField(f.message) + "\n";
    }
    all.insert(all.end(), study.results.begin(), study.results.end());
  }
  Stage("write", [&] {
    WriteFileAtomic(out / "results_raw.csv", FormatResultsCsv(all, false));
    WriteFileAtomic(out / "results_std.csv", FormatResultsCsv(all, true));
    if (summary.errors > 0) WriteFileAtomic(out / "failures.csv", failures);
  });
  summary.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return summary;
}

void CmdAggregate(const RunConfig& config, const fs::path& results_csv) {
  const fs::path out = ResolveOutputDir(config.output_dir);
  const fs::path input =
      results_csv.empty() ? out / "results_std.csv" : results_csv;
  const std::vector<MetricResult> results = Stage("read results", [&] {
    return ParseResultsCsv(ReadFileBytes(input), input.string());
  });
  const std::vector<RirEntry> manifest = LoadEntries(config);

  std::set<std::string> used;
  for (const MetricResult& r : results) {
    used.insert(r.ref_id);
    used.insert(r.analyzed_id);
  }
  std::vector<RirEntry> entries;
  for (const RirEntry& e : manifest) {
    if (used.count(e.id)) entries.push_back(e);
  }
  if (entries.size() != used.size()) {
    for (const RirEntry& e : entries) used.erase(e.id);
    throw Error(ErrorCode::kInvalidArgument,
                "aggregate: id '" + *used.begin() +
                    "' from the results is not in the manifest");
  }
  const auto index = Stage("label", [&] { return LabelEntries(entries, config.bins); });

  MedianOptions options;
  options.panel_filter = config.panel_filter;
  options.include_self_pairs = config.include_self_pairs;
  std::vector<std::pair<MetricKind, MedianMatrix>> matrices;
  for (MetricKind kind : kAllMetrics) {
    if (std::find(config.metrics.begin(), config.metrics.end(), kind) ==
        config.metrics.end()) {
      continue;
    }
    PairwiseStudy study;
    study.metric = kind;
    study.index = index;
    for (const MetricResult& r : results) {
      if (r.metric == kind) study.results.push_back(r);
    }
    if (study.results.empty()) continue;
    const bool have_std =
        std::all_of(study.results.begin(), study.results.end(),
                    [](const MetricResult& r) { return r.value_std.has_value(); });
    const std::string name(MetricName(kind));
    if (!have_std) Stage("standardize " + name, [&] { StandardizeStudy(study); });
    matrices.emplace_back(kind, Stage("aggregate " + name, [&] {
                            return MedianByGroup(study, config.group_key, options);
                          }));
  }
  if (matrices.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "aggregate: no results for the selected metrics");
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& [kind, m] : matrices) {
    for (Eigen::Index i = 0; i < m.values.size(); ++i) {
      if (std::isfinite(m.values.data()[i])) {
        lo = std::min(lo, m.values.data()[i]);
        hi = std::max(hi, m.values.data()[i]);
      }
    }
  }
  Stage("write", [&] {
    for (const auto& [kind, m] : matrices) {
      const std::string stem =
          "median_" + GroupKeyName(config.group_key) + "_" +
          std::string(MetricName(kind));
      WriteFileAtomic(out / (stem + ".csv"), FormatMedianMatrixCsv(m));
      WriteFileAtomic(out / (stem + ".svg"),
                      HeatmapSvg(m, std::string(MetricName(kind)), lo, hi));
    }
  });
}

void CmdSweep(const RunConfig& config) {
  config.Validate();
  RequireTmix(config);
  if (config.target_id.empty()) ConfigError("no sweep target id configured");
  const std::vector<RirEntry> manifest = LoadEntries(config);
  const fs::path out = ResolveOutputDir(config.output_dir);
  const auto target_it =
      std::find_if(manifest.begin(), manifest.end(),
                   [&](const RirEntry& e) { return e.id == config.target_id; });
  if (target_it == manifest.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sweep: unknown target id '" + config.target_id + "'");
  }
  const RirEntry target = *target_it;
  std::vector<RirEntry> pool;
  for (const RirEntry& e : manifest) {
    if (e.mic_position == target.mic_position) pool.push_back(e);
  }
  if (pool.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "sweep: no other entries at mic " +
                    std::to_string(target.mic_position));
  }
  const auto metrics = MakeMetrics(config);
  const std::vector<SweepCurve> curves = Stage("sweep", [&] {
    return SweepExperiments(
        target, pool, config.n_per_group, Pointers(metrics),
        MakeCorpusSource(config.manifest.parent_path(), config.preprocess),
        config.seed, Jobs(config));
  });
  std::vector<std::pair<std::string, SweepCurve>> normalized;
  for (size_t i = 0; i < curves.size(); ++i) {
    const std::string name(MetricName(config.metrics[i]));
    normalized.emplace_back(
        name, Stage("normalize " + name, [&] { return NormalizeMinMax(curves[i]); }));
  }
  Stage("write", [&] {
    for (size_t i = 0; i < curves.size(); ++i) {
      const std::string& name = normalized[i].first;
      WriteFileAtomic(out / ("sweep_" + name + "_raw.csv"),
                      FormatSweepCsv(curves[i]));
      WriteFileAtomic(out / ("sweep_" + name + ".csv"),
                      FormatSweepCsv(normalized[i].second));
    }
    WriteFileAtomic(out / "sweep.svg",
                    SweepSvg(normalized, target.n_reflective_panels));
  });
}

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"revsim: late-reverberation similarity metrics and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, metrics_flag, output_dir;
  std::optional<uint64_t> seed;
  std::optional<size_t> jobs;
  app.add_option("--config", config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Random seed (overrides the config)");
  app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  app.add_option("--metrics", metrics_flag, "Comma-separated, e.g. PC,EDC");
  app.add_option("--output-dir", output_dir,
                 std::string("Output directory (default: $") + kOutputDirEnv +
                     " or ./revsim_out)");

  std::string manifest_flag;
  std::optional<double> t_mix_flag;
  auto add_corpus_flags = [&](CLI::App* cmd) {
    cmd->add_option("--manifest", manifest_flag, "Corpus manifest CSV");
    cmd->add_option("--t-mix-ms", t_mix_flag, "Mixing time in milliseconds");
  };

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
  synth_cmd->add_option("--groups", synth.groups, "Panel-count groups")
      ->capture_default_str();
  synth_cmd->add_option("--per-group", synth.per_group, "RIRs per group")
      ->capture_default_str();
  synth_cmd->add_option("--t60-min", synth.t60_min_s, "T60 of group 0 [s]")
      ->capture_default_str();
  synth_cmd->add_option("--t60-max", synth.t60_max_s, "T60 of the last group [s]")
      ->capture_default_str();
  synth_cmd->add_option("--length", synth.length_s, "Decay length [s]")
      ->capture_default_str();
  synth_cmd->add_option("--predelay-ms", synth.predelay_ms, "Leading silence")
      ->capture_default_str();
  synth_cmd->add_option("--sample-rate", synth.sample_rate)->capture_default_str();

  CLI::App* pre_cmd =
      app.add_subcommand("preprocess", "Trim RIRs to their late reverberation");
  add_corpus_flags(pre_cmd);

  std::optional<size_t> per_mic;
  CLI::App* compute_cmd =
      app.add_subcommand("compute", "Score every ordered pair of the corpus");
  add_corpus_flags(compute_cmd);
  compute_cmd->add_option("--per-mic", per_mic,
                          "Entries per mic and partition (0 = all)");

  std::string results_flag, group_flag, filter_flag;
  bool exclude_self = false;
  CLI::App* agg_cmd =
      app.add_subcommand("aggregate", "Median matrices from a results CSV");
  agg_cmd->add_option("--manifest", manifest_flag, "Corpus manifest CSV");
  agg_cmd->add_option("--results", results_flag,
                      "Results CSV (default: <output-dir>/results_std.csv)");
  agg_cmd->add_option("--group-by", group_flag, "partition or mic");
  agg_cmd->add_option("--panel-filter", filter_flag, "Panel range, e.g. 35-49");
  agg_cmd->add_flag("--exclude-self", exclude_self, "Drop (i, i) pairs");

  std::string target_flag;
  std::optional<size_t> n_per_group;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Score one target against every panel count");
  add_corpus_flags(sweep_cmd);
  sweep_cmd->add_option("--target", target_flag, "Target entry id");
  sweep_cmd->add_option("--n-per-group", n_per_group, "RIRs per panel count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config = LoadRunConfig(config_path);
    if (seed) config.seed = *seed;
    if (jobs) config.jobs = *jobs;
    if (!metrics_flag.empty()) config.metrics = ParseMetricList(metrics_flag);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!manifest_flag.empty()) config.manifest = manifest_flag;
    if (t_mix_flag) {
      config.preprocess.t_mix_ms = *t_mix_flag;
      config.t_mix_set = true;
    }
    if (per_mic) config.per_mic = *per_mic;
    if (!group_flag.empty()) config.group_key = ParseGroupKey(group_flag);
    if (!filter_flag.empty()) config.panel_filter = ParsePanelRange(filter_flag);
    if (exclude_self) config.include_self_pairs = false;
    if (!target_flag.empty()) config.target_id = target_flag;
    if (n_per_group) config.n_per_group = *n_per_group;
    config.Validate();

    if (*synth_cmd) {
      synth.seed = config.seed;
      synth.output_dir = config.output_dir;
      const fs::path manifest = CmdSynth(synth);
      std::cout << "wrote " << synth.groups * synth.per_group
                << " RIRs and " << manifest.string() << "\n";
    } else if (*pre_cmd) {
      CmdPreprocess(config);
    } else if (*compute_cmd) {
      const ComputeSummary s = CmdCompute(config);
      std::printf("entries %zu, pairs %zu, errors %zu, wall time %.2f s\n",
                  s.entries, s.pairs, s.errors, s.seconds);
    } else if (*agg_cmd) {
      CmdAggregate(config, results_flag);
    } else if (*sweep_cmd) {
      CmdSweep(config);
    }
  } catch (const Error& e) {
    std::cerr << "revsim: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "revsim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace revsim
