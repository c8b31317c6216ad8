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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "revsim/evaluation.h"
#include "revsim/fft.h"
#include "test_util.h"

namespace revsim {
namespace {

using testing::Decay;
using testing::Noise;
using testing::RelativeError;
using testing::ThrownCode;

// Quiet warnings for tests that intentionally trigger skipped bands.
class QuietWarnings {
 public:
  QuietWarnings() { SetWarningsEnabled(false); }
  ~QuietWarnings() { SetWarningsEnabled(true); }
};

TEST(MetricNameTest, RoundTrip) {
  for (MetricKind k : kAllMetrics) EXPECT_EQ(ParseMetricKind(MetricName(k)), k);
  EXPECT_EQ(ParseMetricKind("edc"), MetricKind::kEdc);
  EXPECT_EQ(ThrownCode([] { ParseMetricKind("SNR"); }), ErrorCode::kConfig);
}

TEST(ZeroIdentityTest, AllMetricsOnEqualInputs) {
  const Signal h = Decay(0.8, 1.0, 1);
  EXPECT_EQ(PcLoss(h, h), 0.0);
  EXPECT_EQ(EdcLoss(h, h, EdcConfig{}), 0.0);
  EXPECT_EQ(MssLoss(h, h), 0.0);
  EXPECT_EQ(EsrLoss(h, h), 0.0);
}

TEST(PairCheckTest, MismatchedInputsAreRejected) {
  const Signal a = Noise(48000, 1);
  const Signal shorter = Noise(47000, 2);
  const Signal other_rate = Noise(48000, 2, 44100);
  for (const Signal* b : {&shorter, &other_rate}) {
    EXPECT_EQ(ThrownCode([&] { PcLoss(a, *b); }), ErrorCode::kPairMismatch);
    EXPECT_EQ(ThrownCode([&] { EdcLoss(a, *b, EdcConfig{}); }),
              ErrorCode::kPairMismatch);
    EXPECT_EQ(ThrownCode([&] { MssLoss(a, *b); }), ErrorCode::kPairMismatch);
    EXPECT_EQ(ThrownCode([&] { EsrLoss(a, *b); }), ErrorCode::kPairMismatch);
  }
}

TEST(PcLossTest, SymmetricOnIndependentNoise) {
  const Signal h = Noise(48000, 10);
  const Signal g = Noise(48000, 11);
  const double ab = PcLoss(h, g);
  EXPECT_GT(ab, 0.0);
  EXPECT_EQ(ab, PcLoss(g, h));
}

TEST(PcLossTest, DoubledSignalMatchesElementwiseOracle) {
  const Signal h = Decay(1.0, 1.0, 12);
  const PcConfig cfg;
  const RealMatrix p = SmoothedPowerMap(h, cfg);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p.data()[i];
    const double r = (v - 4.0 * v) / (4.0 * v * v + cfg.epsilon);
    acc += r * r;
  }
  EXPECT_LT(RelativeError(PcLoss(h, h.Scaled(2.0)), std::sqrt(acc)), 1e-9);
}

TEST(PcLossTest, MapShape) {
  const RealMatrix p = SmoothedPowerMap(Noise(48000, 3), PcConfig{});
  // 513 bins, 184 frames -> (513-64)/4+1 x (184-64)/4+1.
  EXPECT_EQ(p.rows(), 113);
  EXPECT_EQ(p.cols(), 31);
  EXPECT_GE(p.minCoeff(), 0.0);
}

TEST(PcLossTest, TooShortAndBadConfig) {
  EXPECT_EQ(ThrownCode([] { PcLoss(Noise(4096, 1), Noise(4096, 2)); }),
            ErrorCode::kInvalidArgument);
  PcConfig bad;
  bad.epsilon = 0.0;
  EXPECT_EQ(ThrownCode([&] { bad.Validate(); }), ErrorCode::kInvalidArgument);
  bad = {};
  bad.stride = 0;
  EXPECT_EQ(ThrownCode([&] { bad.Validate(); }), ErrorCode::kInvalidArgument);
}

// Independent per-band EDC loss: own zero-padded FFT masking, cumulative sums
// and dB.
double EdcOracle(const Signal& h, const Signal& g, const BandSet& bands,
                 double floor_db) {
  const size_t n = h.size();
  const size_t padded = FastFftSize(2 * n);
  RealFft fft(padded);
  auto curves = [&](const Signal& x) {
    std::vector<double> in(x.data());
    in.resize(padded, 0.0);
    std::vector<std::complex<double>> spec(fft.num_bins());
    fft.Forward(in, spec);
    std::vector<std::vector<double>> out;
    for (const Band& b : bands.bands()) {
      std::vector<std::complex<double>> masked(spec.size());
      for (size_t k = 0; k < spec.size(); ++k) {
        const double f = static_cast<double>(k) * x.sample_rate() / padded;
        if (f >= b.lower_hz && f < b.upper_hz) masked[k] = spec[k];
      }
      std::vector<double> y(padded);
      fft.Inverse(masked, y);
      std::vector<double> edc(n);
      long double acc = 0.0L;
      for (size_t t = n; t-- > 0;) {
        acc += static_cast<long double>(y[t]) * y[t];
        edc[t] = static_cast<double>(acc);
      }
      std::vector<double> db(n);
      for (size_t t = 0; t < n; ++t) {
        db[t] = std::max(floor_db, 10.0 * std::log10(edc[t] / edc[0]));
      }
      db[0] = 0.0;
      out.push_back(std::move(db));
    }
    return out;
  };
  const auto e = curves(h);
  const auto e_hat = curves(g);
  double total = 0.0;
  for (size_t b = 0; b < e.size(); ++b) {
    double num = 0.0, den = 0.0;
    for (size_t t = 0; t < n; ++t) {
      num += (e[b][t] - e_hat[b][t]) * (e[b][t] - e_hat[b][t]);
      den += e[b][t] * e[b][t];
    }
    total += num / den;
  }
  return total / static_cast<double>(e.size());
}

TEST(EdcLossTest, MatchesNaiveBandOracle) {
  const Signal h = Decay(1.0, 2.0, 20);
  const Signal g = Decay(2.0, 2.0, 21);
  const BandSet bands = ThirdOctaveBands();
  const double got = EdcLoss(h, g, bands);
  EXPECT_GT(got, 0.0);
  EXPECT_LT(RelativeError(got, EdcOracle(h, g, bands, kDefaultEdcFloorDb)),
            1e-6);
}

TEST(EdcLossTest, GainInvariance) {
  const Signal h = Decay(0.7, 1.0, 22);
  const Signal g = Decay(1.1, 1.0, 23);
  const double base = EdcLoss(h, g, EdcConfig{});
  for (double gain : {0.01, 0.5, 3.0, 100.0}) {
    EXPECT_LT(RelativeError(EdcLoss(h, g.Scaled(gain), EdcConfig{}), base),
              1e-9);
    EXPECT_LT(RelativeError(EdcLoss(h.Scaled(gain), g, EdcConfig{}), base),
              1e-9);
  }
  EXPECT_LT(EdcLoss(h, h.Scaled(5.0), EdcConfig{}), 1e-18);
}

TEST(EdcLossTest, SkipsEmptyReferenceBands) {
  QuietWarnings quiet;
  const BandSet bands({{500.0, 450.0, 560.0}, {1000.0, 900.0, 1120.0}});
  const Signal h = Decay(0.5, 1.0, 24);
  const Signal g = Decay(1.0, 1.0, 25);
  const EdcCurves full = BandEdcCurves(h, bands);
  const EdcCurves other = BandEdcCurves(g, bands);
  // Empty the first reference band the way BandEdcCurves marks silence.
  EdcCurves partial = full;
  partial.energies[0] = 0.0;
  partial.curves.row(0).setConstant(kDefaultEdcFloorDb);
  partial.curves(0, 0) = 0.0;
  const double second_only =
      EdcLoss(h, g, BandSet({bands.bands()[1]}));
  EXPECT_DOUBLE_EQ(EdcLossFromCurves(partial, other), second_only);
  EXPECT_NE(EdcLossFromCurves(full, other), second_only);

  EdcCurves silent = partial;
  silent.energies[1] = 0.0;
  EXPECT_EQ(ThrownCode([&] { EdcLossFromCurves(silent, other); }),
            ErrorCode::kDegenerateSignal);
  const Signal zeros(std::vector<double>(48000, 0.0), 48000);
  EXPECT_EQ(ThrownCode([&] { EdcLoss(zeros, g, bands); }),
            ErrorCode::kDegenerateSignal);
}

TEST(EdcLossTest, DropsBandsAboveNyquist) {
  QuietWarnings quiet;
  const Signal h = Decay(0.5, 1.0, 26, 16000);
  const Signal g = Decay(0.9, 1.0, 27, 16000);
  const BandSet bands = ThirdOctaveBands();
  EXPECT_DOUBLE_EQ(EdcLoss(h, g, bands),
                   EdcLoss(h, g, bands.BelowNyquist(16000)));
}

TEST(SpectralConvergenceTest, Examples) {
  const RealMatrix h = RealMatrix::Random(20, 10).cwiseAbs();
  EXPECT_EQ(SpectralConvergence(h, h), 0.0);
  EXPECT_EQ(SpectralConvergence(h, RealMatrix::Zero(20, 10)), 1.0);
  for (double g : {0.0, 0.3, 1.0, 2.5}) {
    EXPECT_NEAR(SpectralConvergence(h, g * h), std::abs(1.0 - g), 1e-12);
  }
  EXPECT_EQ(ThrownCode([&] {
              SpectralConvergence(RealMatrix::Zero(2, 2), RealMatrix::Ones(2, 2));
            }),
            ErrorCode::kDegenerateSignal);
}

TEST(LogMagnitudeTest, Examples) {
  const RealMatrix h = RealMatrix::Constant(7, 5, 3.0);
  EXPECT_EQ(LogMagnitudeLoss(h, h, 5, 1e-8), 0.0);
  // B * |ln g| for a constant-magnitude spectrogram.
  EXPECT_NEAR(LogMagnitudeLoss(h, 2.0 * h, 5, 1e-8), 7 * std::log(2.0), 1e-7);
  const RealMatrix e = RealMatrix::Constant(1, 1, std::exp(1.0));
  EXPECT_NEAR(LogMagnitudeLoss(e, RealMatrix::Ones(1, 1), 1, 1e-8), 1.0, 1e-7);
}

// Sum of SC and SM at one resolution, recomputed from spectrograms.
double ResolutionOracle(const Signal& h, const Signal& g,
                        const MssResolution& r, double eps) {
  const RealMatrix a = MagnitudeSpectrogram(Stft(h, {r.window_length, r.hop, r.fft_size}));
  const RealMatrix b = MagnitudeSpectrogram(Stft(g, {r.window_length, r.hop, r.fft_size}));
  double num = 0.0, den = 0.0, l1 = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    num += std::pow(a.data()[i] - b.data()[i], 2);
    den += a.data()[i] * a.data()[i];
    l1 += std::abs(std::log(a.data()[i] + eps) - std::log(b.data()[i] + eps));
  }
  return std::sqrt(num / den) + l1 / static_cast<double>(a.cols());
}

TEST(MssLossTest, MatchesPerResolutionOracle) {
  const Signal h = Noise(24000, 30);
  const Signal g = Noise(24000, 31);
  const MssConfig cfg;
  double sum = 0.0;
  for (const MssResolution& r : cfg.resolutions) {
    sum += ResolutionOracle(h, g, r, cfg.log_epsilon);
  }
  EXPECT_LT(RelativeError(MssLoss(h, g, cfg), sum / 3.0), 1e-9);
}

TEST(MssLossTest, SingleResolutionIsPlainSum) {
  const Signal h = Decay(0.5, 0.5, 32);
  const Signal g = Decay(0.8, 0.5, 33);
  MssConfig cfg;
  cfg.resolutions = {{1024, 256, 1024}};
  const RealMatrix a = MagnitudeSpectrogram(Stft(h, {1024, 256, 1024}));
  const RealMatrix b = MagnitudeSpectrogram(Stft(g, {1024, 256, 1024}));
  EXPECT_EQ(MssLoss(h, g, cfg),
            SpectralConvergence(a, b) +
                LogMagnitudeLoss(a, b, static_cast<size_t>(a.cols()), 1e-8));
}

TEST(MssLossTest, ZeroPaddedFftSize) {
  const Signal h = Noise(8000, 34);
  MssConfig cfg;
  cfg.resolutions = {{512, 100, 300}};
  EXPECT_EQ(MssLoss(h, h, cfg), 0.0);
  EXPECT_LT(RelativeError(MssLoss(h, Noise(8000, 35), cfg),
                          ResolutionOracle(h, Noise(8000, 35),
                                           cfg.resolutions[0], 1e-8)),
            1e-12);
  cfg.resolutions = {{256, 64, 512}};
  EXPECT_EQ(ThrownCode([&] { cfg.Validate(); }), ErrorCode::kInvalidArgument);
  cfg.resolutions.clear();
  EXPECT_EQ(ThrownCode([&] { cfg.Validate(); }), ErrorCode::kInvalidArgument);
}

TEST(EsrLossTest, Examples) {
  const Signal h = Noise(1000, 40);
  EXPECT_EQ(EsrLoss(h, h), 0.0);
  EXPECT_EQ(EsrLoss(h, h.Scaled(0.0)), 1.0);
  EXPECT_EQ(ThrownCode([&] { EsrLoss(h.Scaled(0.0), h); }),
            ErrorCode::kDegenerateSignal);
}

TEST(EsrLossTest, JointScalingInvariance) {
  const Signal h = Noise(5000, 41);
  const Signal g = Noise(5000, 42);
  // Powers of two scale exactly.
  for (double s : {0.25, 2.0, -4.0}) {
    EXPECT_EQ(EsrLoss(h.Scaled(s), g.Scaled(s)), EsrLoss(h, g));
  }
  EXPECT_LT(RelativeError(EsrLoss(h.Scaled(0.3), g.Scaled(0.3)), EsrLoss(h, g)),
            1e-12);
}

TEST(EsrLossTest, IndependentNoiseAveragesTwo) {
  double sum = 0.0;
  for (uint64_t t = 0; t < 100; ++t) {
    sum += EsrLoss(Noise(48000, 1000 + 2 * t), Noise(48000, 1001 + 2 * t));
  }
  EXPECT_NEAR(sum / 100.0, 2.0, 0.05);
}

TEST(MetricObjectTest, MatchesFreeFunctionsBitwise) {
  const Signal h = Decay(0.6, 0.6, 50);
  const Signal g = Decay(0.9, 0.6, 51);
  EXPECT_EQ((*MakePcMetric())(h, g), PcLoss(h, g));
  EXPECT_EQ((*MakeEdcMetric())(h, g), EdcLoss(h, g, EdcConfig{}));
  EXPECT_EQ((*MakeMssMetric())(h, g), MssLoss(h, g));
  EXPECT_EQ((*MakeEsrMetric())(h, g), EsrLoss(h, g));
  for (MetricKind k : kAllMetrics) EXPECT_EQ(MakeMetric(k)->kind(), k);
}

TEST(MetricObjectTest, FeaturesReportMemory) {
  const Signal h = Noise(48000, 52);
  for (MetricKind k : kAllMetrics) {
    const auto f = MakeMetric(k)->Prepare(h);
    EXPECT_GT(f->memory_bytes(), 0u);
    EXPECT_EQ(f->length(), h.size());
  }
  EXPECT_GT(MakeEdcMetric()->Prepare(h)->memory_bytes(),
            29u * 48000u * sizeof(double));
}

TEST(ConfigDigestTest, StableAndSensitive) {
  EXPECT_EQ(ConfigDigest(PcConfig{}), ConfigDigest(PcConfig{}));
  EXPECT_EQ(ConfigDigest(PcConfig{}).size(), 16u);
  PcConfig pc;
  pc.stride = 2;
  EXPECT_NE(ConfigDigest(pc), ConfigDigest(PcConfig{}));
  MssConfig mss;
  mss.log_epsilon = 1e-7;
  EXPECT_NE(ConfigDigest(mss), ConfigDigest(MssConfig{}));
  EdcConfig edc;
  edc.floor_db = -100;
  EXPECT_NE(ConfigDigest(edc), ConfigDigest(EdcConfig{}));
  EXPECT_EQ(MakePcMetric()->config_digest(), ConfigDigest(PcConfig{}));
  EXPECT_NE(EsrConfigDigest(), ConfigDigest(PcConfig{}));
}

// Medians over seeds of a metric against a T60 = 1 s reference; the curve
// should rise with |log(T60 / 1 s)| on each side of the minimum.
TEST(MonotonicityTest, PcAndEdcGrowWithDecayMismatch) {
  const std::vector<double> t60 = {0.5, 0.63, 0.79, 1.0, 1.26, 1.59, 2.0};
  const int seeds = 20;
  const auto pc = MakePcMetric();
  const auto edc = MakeEdcMetric();
  for (const Metric* metric : {pc.get(), edc.get()}) {
    std::vector<double> medians;
    for (double t : t60) {
      std::vector<double> values;
      for (int s = 0; s < seeds; ++s) {
        values.push_back((*metric)(Decay(1.0, 1.0, 5000 + s),
                                   Decay(t, 1.0, 6000 + 100 * s)));
      }
      medians.push_back(Median(values));
    }
    const size_t best = static_cast<size_t>(
        std::min_element(medians.begin(), medians.end()) - medians.begin());
    EXPECT_EQ(best, 3u) << MetricName(metric->kind());
    for (size_t i = 0; i < 3; ++i) {
      EXPECT_GT(medians[i], medians[i + 1]) << MetricName(metric->kind()) << i;
    }
    for (size_t i = 3; i + 1 < medians.size(); ++i) {
      EXPECT_LT(medians[i], medians[i + 1]) << MetricName(metric->kind()) << i;
    }
  }
}

}  // namespace
}  // namespace revsim
