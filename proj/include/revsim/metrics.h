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

// Late-reverberation similarity metrics. Each takes a reference RIR `h` and
// an analyzed RIR `h_hat` of equal length and sample rate and returns a
// non-negative distance that is exactly zero for identical inputs.
//
//   PC   averaged power convergence: Frobenius norm of (P - P^) / (P P^ + eps)
//        where P, P^ are power spectrograms smoothed by a strided 2D Hann
//        kernel.
//   EDC  band-averaged relative squared error between 0 dB normalized
//        energy decay curves.
//   MSS  multi-resolution spectral convergence + log-magnitude loss.
//   ESR  error-to-signal ratio.

#ifndef REVSIM_METRICS_H_
#define REVSIM_METRICS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revsim/dsp_core.h"

namespace revsim {

enum class MetricKind { kPc, kEdc, kMss, kEsr };

inline constexpr MetricKind kAllMetrics[] = {MetricKind::kPc, MetricKind::kEdc,
                                             MetricKind::kMss,
                                             MetricKind::kEsr};

std::string_view MetricName(MetricKind kind);
// Accepts "PC", "EDC", "MSS", "ESR" in any case. Throws kConfig otherwise.
MetricKind ParseMetricKind(std::string_view name);

struct PcConfig {
  size_t stft_window = 1024;
  size_t stft_hop = 256;
  size_t kernel_side = 64;
  size_t stride = 4;
  // Added to the elementwise product in the denominator.
  double epsilon = 1e-12;

  void Validate() const;
};

struct MssResolution {
  size_t fft_size;
  size_t hop;
  size_t window_length;
};

struct MssConfig {
  std::vector<MssResolution> resolutions = {
      {512, 128, 512}, {1024, 256, 1024}, {2048, 512, 2048}};
  double log_epsilon = 1e-8;

  void Validate() const;
};

struct EdcConfig {
  BandSet bands = ThirdOctaveBands();
  double floor_db = kDefaultEdcFloorDb;
};

struct MetricResult {
  double value = 0.0;
  MetricKind metric = MetricKind::kPc;
  std::string ref_id;
  std::string analyzed_id;
  std::string config_digest;
  // Filled in by evaluation::StandardizeStudy.
  std::optional<double> value_std;
};

// Stable 16-hex-digit FNV-1a digest of a canonical config description.
std::string ConfigDigest(const PcConfig& cfg);
std::string ConfigDigest(const MssConfig& cfg);
std::string ConfigDigest(const EdcConfig& cfg);
std::string EsrConfigDigest();

// Strided Hann-smoothed power spectrogram, frequency x time.
RealMatrix SmoothedPowerMap(const Signal& signal, const PcConfig& cfg);

double PcLoss(const Signal& h, const Signal& h_hat, const PcConfig& cfg = {});
double PcLossFromMaps(const RealMatrix& power, const RealMatrix& power_hat,
                      double epsilon);

// Bands above Nyquist are dropped. Reference bands without energy are
// skipped with a warning; throws kDegenerateSignal if nothing is left.
double EdcLoss(const Signal& h, const Signal& h_hat, const BandSet& bands,
               double floor_db = kDefaultEdcFloorDb);
double EdcLoss(const Signal& h, const Signal& h_hat, const EdcConfig& cfg);
double EdcLossFromCurves(const EdcCurves& ref, const EdcCurves& analyzed);

// || |H| - |H^| ||_F / || |H| ||_F.
double SpectralConvergence(const RealMatrix& mag, const RealMatrix& mag_hat);
// (1 / n_frames) || ln(|H| + eps) - ln(|H^| + eps) ||_1.
double LogMagnitudeLoss(const RealMatrix& mag, const RealMatrix& mag_hat,
                        size_t n_frames, double log_epsilon);

double MssLoss(const Signal& h, const Signal& h_hat,
               const MssConfig& cfg = {});

double EsrLoss(const Signal& h, const Signal& h_hat);

// Throws kPairMismatch unless both signals share length and sample rate.
void CheckPair(const Signal& h, const Signal& h_hat);

// Per-signal precomputation that a metric reuses across every pair the
// signal takes part in.
class MetricFeatures {
 public:
  MetricFeatures(size_t length, int sample_rate)
      : length_(length), sample_rate_(sample_rate) {}
  virtual ~MetricFeatures() = default;

  size_t length() const { return length_; }
  int sample_rate() const { return sample_rate_; }
  // Approximate heap footprint, used to bound feature caches.
  virtual size_t memory_bytes() const { return sizeof(*this); }

 private:
  size_t length_;
  int sample_rate_;
};

// Distance split into a per-signal Prepare step and a per-pair Compare step.
// Compare(Prepare(h), Prepare(h_hat)) is bit-identical to the corresponding
// free function.
class Metric {
 public:
  virtual ~Metric() = default;

  virtual MetricKind kind() const = 0;
  virtual std::string config_digest() const = 0;
  virtual std::shared_ptr<const MetricFeatures> Prepare(
      const Signal& signal) const = 0;
  virtual double Compare(const MetricFeatures& ref,
                         const MetricFeatures& analyzed) const = 0;

  double operator()(const Signal& h, const Signal& h_hat) const;
};

std::unique_ptr<Metric> MakePcMetric(const PcConfig& cfg = {});
std::unique_ptr<Metric> MakeEdcMetric(const EdcConfig& cfg = {});
std::unique_ptr<Metric> MakeMssMetric(const MssConfig& cfg = {});
std::unique_ptr<Metric> MakeEsrMetric();

struct MetricConfigs {
  PcConfig pc;
  EdcConfig edc;
  MssConfig mss;
};

std::unique_ptr<Metric> MakeMetric(MetricKind kind,
                                   const MetricConfigs& configs = {});

}  // namespace revsim

#endif  // REVSIM_METRICS_H_
