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

#include "revsim/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "revsim/error.h"

namespace revsim {

namespace {

std::string Fnv1aHex(std::string_view text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CheckFeaturePair(const MetricFeatures& ref,
                      const MetricFeatures& analyzed) {
  if (ref.length() != analyzed.length() ||
      ref.sample_rate() != analyzed.sample_rate()) {
    throw Error(ErrorCode::kPairMismatch,
                "signals differ in length or sample rate (" +
                    std::to_string(ref.length()) + " @ " +
                    std::to_string(ref.sample_rate()) + " Hz vs " +
                    std::to_string(analyzed.length()) + " @ " +
                    std::to_string(analyzed.sample_rate()) + " Hz)");
  }
}

// --- PC ---------------------------------------------------------------------

struct PcFeatures : MetricFeatures {
  PcFeatures(const Signal& s, RealMatrix map)
      : MetricFeatures(s.size(), s.sample_rate()), power(std::move(map)) {}
  size_t memory_bytes() const override {
    return sizeof(*this) + sizeof(double) * static_cast<size_t>(power.size());
  }
  RealMatrix power;
};

class PcMetric : public Metric {
 public:
  explicit PcMetric(const PcConfig& cfg) : cfg_(cfg) { cfg_.Validate(); }

  MetricKind kind() const override { return MetricKind::kPc; }
  std::string config_digest() const override { return ConfigDigest(cfg_); }

  std::shared_ptr<const MetricFeatures> Prepare(
      const Signal& signal) const override {
    return std::make_shared<PcFeatures>(signal,
                                        SmoothedPowerMap(signal, cfg_));
  }

  double Compare(const MetricFeatures& ref,
                 const MetricFeatures& analyzed) const override {
    CheckFeaturePair(ref, analyzed);
    return PcLossFromMaps(static_cast<const PcFeatures&>(ref).power,
                          static_cast<const PcFeatures&>(analyzed).power,
                          cfg_.epsilon);
  }

 private:
  PcConfig cfg_;
};

// --- EDC --------------------------------------------------------------------

struct EdcFeatures : MetricFeatures {
  EdcFeatures(const Signal& s, EdcCurves c)
      : MetricFeatures(s.size(), s.sample_rate()), curves(std::move(c)) {}
  size_t memory_bytes() const override {
    return sizeof(*this) +
           sizeof(double) * static_cast<size_t>(curves.curves.size());
  }
  EdcCurves curves;
};

class EdcMetric : public Metric {
 public:
  explicit EdcMetric(const EdcConfig& cfg) : cfg_(cfg) {}

  MetricKind kind() const override { return MetricKind::kEdc; }
  std::string config_digest() const override { return ConfigDigest(cfg_); }

  std::shared_ptr<const MetricFeatures> Prepare(
      const Signal& signal) const override {
    return std::make_shared<EdcFeatures>(
        signal, BandEdcCurves(signal, cfg_.bands, cfg_.floor_db));
  }

  double Compare(const MetricFeatures& ref,
                 const MetricFeatures& analyzed) const override {
    CheckFeaturePair(ref, analyzed);
    return EdcLossFromCurves(static_cast<const EdcFeatures&>(ref).curves,
                             static_cast<const EdcFeatures&>(analyzed).curves);
  }

 private:
  EdcConfig cfg_;
};

// --- MSS --------------------------------------------------------------------

struct MssFeatures : MetricFeatures {
  explicit MssFeatures(const Signal& s)
      : MetricFeatures(s.size(), s.sample_rate()) {}
  size_t memory_bytes() const override {
    size_t bytes = sizeof(*this);
    for (const RealMatrix& m : magnitudes) {
      bytes += sizeof(double) * static_cast<size_t>(m.size());
    }
    return bytes;
  }
  std::vector<RealMatrix> magnitudes;
};

class MssMetric : public Metric {
 public:
  explicit MssMetric(const MssConfig& cfg) : cfg_(cfg) { cfg_.Validate(); }

  MetricKind kind() const override { return MetricKind::kMss; }
  std::string config_digest() const override { return ConfigDigest(cfg_); }

  std::shared_ptr<const MetricFeatures> Prepare(
      const Signal& signal) const override {
    auto features = std::make_shared<MssFeatures>(signal);
    for (const MssResolution& r : cfg_.resolutions) {
      features->magnitudes.push_back(MagnitudeSpectrogram(
          Stft(signal, StftParams{r.window_length, r.hop, r.fft_size})));
    }
    return features;
  }

  double Compare(const MetricFeatures& ref,
                 const MetricFeatures& analyzed) const override {
    CheckFeaturePair(ref, analyzed);
    const auto& a = static_cast<const MssFeatures&>(ref);
    const auto& b = static_cast<const MssFeatures&>(analyzed);
    double total = 0.0;
    for (size_t m = 0; m < a.magnitudes.size(); ++m) {
      const RealMatrix& mag = a.magnitudes[m];
      const RealMatrix& mag_hat = b.magnitudes[m];
      total += SpectralConvergence(mag, mag_hat) +
               LogMagnitudeLoss(mag, mag_hat,
                                static_cast<size_t>(mag.cols()),
                                cfg_.log_epsilon);
    }
    return total / static_cast<double>(a.magnitudes.size());
  }

 private:
  MssConfig cfg_;
};

// --- ESR --------------------------------------------------------------------

struct EsrFeatures : MetricFeatures {
  explicit EsrFeatures(const Signal& s)
      : MetricFeatures(s.size(), s.sample_rate()), samples(s.data()) {}
  size_t memory_bytes() const override {
    return sizeof(*this) + sizeof(double) * samples.size();
  }
  std::vector<double> samples;
};

double EsrFromSamples(std::span<const double> h, std::span<const double> h_hat) {
  double error = 0.0;
  double energy = 0.0;
  for (size_t i = 0; i < h.size(); ++i) {
    const double d = h[i] - h_hat[i];
    error += d * d;
    energy += h[i] * h[i];
  }
  if (!(energy > 0.0)) {
    throw Error(ErrorCode::kDegenerateSignal,
                "reference signal has zero energy");
  }
  return error / energy;
}

class EsrMetric : public Metric {
 public:
  MetricKind kind() const override { return MetricKind::kEsr; }
  std::string config_digest() const override { return EsrConfigDigest(); }

  std::shared_ptr<const MetricFeatures> Prepare(
      const Signal& signal) const override {
    return std::make_shared<EsrFeatures>(signal);
  }

  double Compare(const MetricFeatures& ref,
                 const MetricFeatures& analyzed) const override {
    CheckFeaturePair(ref, analyzed);
    return EsrFromSamples(static_cast<const EsrFeatures&>(ref).samples,
                          static_cast<const EsrFeatures&>(analyzed).samples);
  }
};

}  // namespace

std::string_view MetricName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kPc:
      return "PC";
    case MetricKind::kEdc:
      return "EDC";
    case MetricKind::kMss:
      return "MSS";
    case MetricKind::kEsr:
      return "ESR";
  }
  return "?";
}

MetricKind ParseMetricKind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  for (MetricKind kind : kAllMetrics) {
    if (upper == MetricName(kind)) return kind;
  }
  throw Error(ErrorCode::kConfig,
              "unknown metric '" + std::string(name) +
                  "' (expected PC, EDC, MSS or ESR)");
}

void PcConfig::Validate() const {
  if (stft_window == 0 || stft_hop == 0 || kernel_side == 0 || stride == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "PC config sizes must all be >= 1");
  }
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "PC epsilon must be positive");
  }
}

void MssConfig::Validate() const {
  if (resolutions.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "MSS needs at least one resolution");
  }
  for (const MssResolution& r : resolutions) {
    if (r.window_length == 0 || r.hop == 0 || r.window_length > r.fft_size) {
      throw Error(ErrorCode::kInvalidArgument,
                  "MSS resolution needs 1 <= window_length <= fft_size and "
                  "hop >= 1");
    }
  }
  if (!(log_epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "MSS log epsilon must be positive");
  }
}

std::string ConfigDigest(const PcConfig& cfg) {
  std::ostringstream os;
  os << "PC;window=" << cfg.stft_window << ";hop=" << cfg.stft_hop
     << ";kernel=" << cfg.kernel_side << ";stride=" << cfg.stride
     << ";epsilon=" << Num(cfg.epsilon);
  return Fnv1aHex(os.str());
}

std::string ConfigDigest(const MssConfig& cfg) {
  std::ostringstream os;
  os << "MSS";
  for (const MssResolution& r : cfg.resolutions) {
    os << ";(" << r.fft_size << ',' << r.hop << ',' << r.window_length << ')';
  }
  os << ";log_epsilon=" << Num(cfg.log_epsilon);
  return Fnv1aHex(os.str());
}

std::string ConfigDigest(const EdcConfig& cfg) {
  std::ostringstream os;
  os << "EDC;floor=" << Num(cfg.floor_db);
  for (const Band& b : cfg.bands.bands()) {
    os << ";(" << Num(b.lower_hz) << ',' << Num(b.center_hz) << ','
       << Num(b.upper_hz) << ')';
  }
  return Fnv1aHex(os.str());
}

std::string EsrConfigDigest() { return Fnv1aHex("ESR"); }

void CheckPair(const Signal& h, const Signal& h_hat) {
  CheckFeaturePair(MetricFeatures(h.size(), h.sample_rate()),
                   MetricFeatures(h_hat.size(), h_hat.sample_rate()));
}

RealMatrix SmoothedPowerMap(const Signal& signal, const PcConfig& cfg) {
  cfg.Validate();
  const RealMatrix power =
      PowerSpectrogram(Stft(signal, cfg.stft_window, cfg.stft_hop));
  return Conv2dStrided(power, HannKernel2d(cfg.kernel_side), cfg.stride);
}

double PcLossFromMaps(const RealMatrix& power, const RealMatrix& power_hat,
                      double epsilon) {
  if (power.rows() != power_hat.rows() || power.cols() != power_hat.cols()) {
    throw Error(ErrorCode::kPairMismatch, "smoothed power maps differ in shape");
  }
  double sum_sq = 0.0;
  for (Eigen::Index j = 0; j < power.cols(); ++j) {
    for (Eigen::Index i = 0; i < power.rows(); ++i) {
      const double p = power(i, j);
      const double q = power_hat(i, j);
      const double ratio = (p - q) / (p * q + epsilon);
      sum_sq += ratio * ratio;
    }
  }
  return std::sqrt(sum_sq);
}

double PcLoss(const Signal& h, const Signal& h_hat, const PcConfig& cfg) {
  CheckPair(h, h_hat);
  return (*MakePcMetric(cfg))(h, h_hat);
}

double EdcLossFromCurves(const EdcCurves& ref, const EdcCurves& analyzed) {
  if (ref.centers != analyzed.centers ||
      ref.curves.cols() != analyzed.curves.cols()) {
    throw Error(ErrorCode::kPairMismatch, "EDC curve sets differ in shape");
  }
  double total = 0.0;
  size_t used = 0;
  for (Eigen::Index b = 0; b < ref.curves.rows(); ++b) {
    const double* e = ref.curves.row(b).data();
    const double* e_hat = analyzed.curves.row(b).data();
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index t = 0; t < ref.curves.cols(); ++t) {
      const double d = e[t] - e_hat[t];
      num += d * d;
      den += e[t] * e[t];
    }
    if (!(ref.energies[static_cast<size_t>(b)] > 0.0) || !(den > 0.0)) {
      Warn("skipping EDC band " +
           std::to_string(ref.centers[static_cast<size_t>(b)]) +
           " Hz: reference band has no decaying energy");
      continue;
    }
    total += num / den;
    ++used;
  }
  if (used == 0) {
    throw Error(ErrorCode::kDegenerateSignal,
                "no usable EDC band in the reference signal");
  }
  return total / static_cast<double>(used);
}

double EdcLoss(const Signal& h, const Signal& h_hat, const BandSet& bands,
               double floor_db) {
  return EdcLoss(h, h_hat, EdcConfig{bands, floor_db});
}

double EdcLoss(const Signal& h, const Signal& h_hat, const EdcConfig& cfg) {
  CheckPair(h, h_hat);
  return (*MakeEdcMetric(cfg))(h, h_hat);
}

double SpectralConvergence(const RealMatrix& mag, const RealMatrix& mag_hat) {
  if (mag.rows() != mag_hat.rows() || mag.cols() != mag_hat.cols()) {
    throw Error(ErrorCode::kPairMismatch, "magnitude spectrograms differ");
  }
  const double ref_norm = mag.norm();
  if (!(ref_norm > 0.0)) {
    throw Error(ErrorCode::kDegenerateSignal,
                "reference magnitude spectrogram is all zero");
  }
  return (mag - mag_hat).norm() / ref_norm;
}

double LogMagnitudeLoss(const RealMatrix& mag, const RealMatrix& mag_hat,
                        size_t n_frames, double log_epsilon) {
  if (mag.rows() != mag_hat.rows() || mag.cols() != mag_hat.cols()) {
    throw Error(ErrorCode::kPairMismatch, "magnitude spectrograms differ");
  }
  if (n_frames == 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame count must be >= 1");
  }
  double l1 = 0.0;
  for (Eigen::Index j = 0; j < mag.cols(); ++j) {
    for (Eigen::Index i = 0; i < mag.rows(); ++i) {
      l1 += std::abs(std::log(mag(i, j) + log_epsilon) -
                     std::log(mag_hat(i, j) + log_epsilon));
    }
  }
  return l1 / static_cast<double>(n_frames);
}

double MssLoss(const Signal& h, const Signal& h_hat, const MssConfig& cfg) {
  CheckPair(h, h_hat);
  return (*MakeMssMetric(cfg))(h, h_hat);
}

double EsrLoss(const Signal& h, const Signal& h_hat) {
  CheckPair(h, h_hat);
  return EsrFromSamples(h.samples(), h_hat.samples());
}

double Metric::operator()(const Signal& h, const Signal& h_hat) const {
  CheckPair(h, h_hat);
  return Compare(*Prepare(h), *Prepare(h_hat));
}

std::unique_ptr<Metric> MakePcMetric(const PcConfig& cfg) {
  return std::make_unique<PcMetric>(cfg);
}

std::unique_ptr<Metric> MakeEdcMetric(const EdcConfig& cfg) {
  return std::make_unique<EdcMetric>(cfg);
}

std::unique_ptr<Metric> MakeMssMetric(const MssConfig& cfg) {
  return std::make_unique<MssMetric>(cfg);
}

std::unique_ptr<Metric> MakeEsrMetric() {
  return std::make_unique<EsrMetric>();
}

std::unique_ptr<Metric> MakeMetric(MetricKind kind,
                                   const MetricConfigs& configs) {
  switch (kind) {
    case MetricKind::kPc:
      return MakePcMetric(configs.pc);
    case MetricKind::kEdc:
      return MakeEdcMetric(configs.edc);
    case MetricKind::kMss:
      return MakeMssMetric(configs.mss);
    case MetricKind::kEsr:
      return MakeEsrMetric();
  }
  throw Error(ErrorCode::kConfig, "unknown metric kind");
}

}  // namespace revsim
