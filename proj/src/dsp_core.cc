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

#include "revsim/dsp_core.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "revsim/error.h"
#include "revsim/fft.h"

namespace revsim {

namespace {

constexpr std::array<double, 29> kThirdOctaveCenters = {
    20.,   25.,   31.5,  40.,   50.,   63.,   80.,   100.,   125.,  160.,
    200.,  250.,  315.,  400.,  500.,  630.,  800.,  1000.,  1250., 1600.,
    2000., 2500., 3150., 4000., 5000., 6300., 8000., 10000., 12500.};

const double kSixthOctave = std::exp2(1.0 / 6.0);

void ApplyBandMask(std::span<const std::complex<double>> spectrum,
                   const Band& band, double bin_hz,
                   std::span<std::complex<double>> masked) {
  for (size_t k = 0; k < spectrum.size(); ++k) {
    const double f = static_cast<double>(k) * bin_hz;
    masked[k] = (f >= band.lower_hz && f < band.upper_hz)
                    ? spectrum[k]
                    : std::complex<double>(0.0, 0.0);
  }
}

void CheckBand(const Band& band, int sample_rate) {
  if (band.upper_hz > 0.5 * sample_rate) {
    throw Error(ErrorCode::kBandOutOfRange,
                "band at " + std::to_string(band.center_hz) +
                    " Hz has its upper edge above Nyquist");
  }
}

}  // namespace

Signal::Signal(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "signal must not be empty");
  }
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "signal contains non-finite samples");
    }
  }
}

Signal Signal::Head(size_t length) const {
  if (length == 0 || length > samples_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "head length out of range");
  }
  return Signal({samples_.begin(), samples_.begin() + length}, sample_rate_);
}

Signal Signal::Tail(size_t offset) const {
  if (offset >= samples_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "tail offset out of range");
  }
  return Signal({samples_.begin() + offset, samples_.end()}, sample_rate_);
}

Signal Signal::Scaled(double gain) const {
  std::vector<double> out(samples_);
  for (double& v : out) v *= gain;
  return Signal(std::move(out), sample_rate_);
}

BandSet::BandSet(std::vector<Band> bands) : bands_(std::move(bands)) {
  for (size_t i = 0; i < bands_.size(); ++i) {
    const Band& b = bands_[i];
    if (!(b.lower_hz > 0.0 && b.lower_hz < b.center_hz &&
          b.center_hz < b.upper_hz)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "band edges must satisfy 0 < lower < center < upper");
    }
    if (i > 0 && !(bands_[i - 1].center_hz < b.center_hz)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "band centers must be strictly increasing");
    }
  }
}

std::vector<double> BandSet::centers() const {
  std::vector<double> out;
  out.reserve(bands_.size());
  for (const Band& b : bands_) out.push_back(b.center_hz);
  return out;
}

BandSet BandSet::BelowNyquist(int sample_rate) const {
  std::vector<Band> kept;
  for (const Band& b : bands_) {
    if (b.upper_hz <= 0.5 * sample_rate) {
      kept.push_back(b);
    } else {
      Warn("dropping band " + std::to_string(b.center_hz) +
           " Hz: upper edge above Nyquist at " + std::to_string(sample_rate) +
           " Hz");
    }
  }
  return BandSet(std::move(kept));
}

std::vector<double> HannWindow(size_t length) {
  if (length == 0) {
    throw Error(ErrorCode::kInvalidArgument, "window length must be >= 1");
  }
  std::vector<double> w(length);
  const double n = static_cast<double>(length);
  for (size_t i = 0; i < length; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
  }
  return w;
}

RealMatrix HannKernel2d(size_t side) {
  const std::vector<double> w = HannWindow(side);
  const Eigen::Map<const Eigen::VectorXd> v(w.data(), w.size());
  return v * v.transpose();
}

size_t NumFrames(size_t signal_length, size_t window_length, size_t hop) {
  if (window_length == 0 || hop == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "window length and hop must be >= 1");
  }
  if (signal_length < window_length) {
    throw Error(ErrorCode::kInvalidArgument,
                "signal of " + std::to_string(signal_length) +
                    " samples is shorter than one window of " +
                    std::to_string(window_length));
  }
  return (signal_length - window_length) / hop + 1;
}

Spectrogram Stft(const Signal& signal, const StftParams& params) {
  const size_t fft_size =
      params.fft_size == 0 ? params.window_length : params.fft_size;
  if (fft_size < params.window_length) {
    throw Error(ErrorCode::kInvalidArgument,
                "fft size must be >= window length");
  }
  const size_t frames =
      NumFrames(signal.size(), params.window_length, params.hop);
  const std::vector<double> window = HannWindow(params.window_length);

  RealFft fft(fft_size);
  Spectrogram spec;
  spec.window_length = params.window_length;
  spec.hop = params.hop;
  spec.fft_size = fft_size;
  spec.bins.resize(static_cast<Eigen::Index>(fft.num_bins()),
                   static_cast<Eigen::Index>(frames));

  std::vector<double> frame(params.window_length);
  const std::span<const double> x = signal.samples();
  for (size_t f = 0; f < frames; ++f) {
    const size_t start = f * params.hop;
    for (size_t i = 0; i < params.window_length; ++i) {
      frame[i] = x[start + i] * window[i];
    }
    std::span<std::complex<double>> column(
        spec.bins.col(static_cast<Eigen::Index>(f)).data(), fft.num_bins());
    fft.Forward(frame, column);
  }
  return spec;
}

Spectrogram Stft(const Signal& signal, size_t window_length, size_t hop) {
  return Stft(signal, StftParams{window_length, hop, 0});
}

RealMatrix PowerSpectrogram(const Spectrogram& spec) {
  return spec.bins.cwiseAbs2();
}

RealMatrix MagnitudeSpectrogram(const Spectrogram& spec) {
  return spec.bins.cwiseAbs();
}

RealMatrix Conv2dStrided(const RealMatrix& input, const RealMatrix& kernel,
                         size_t stride) {
  if (stride == 0) {
    throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  }
  if (kernel.rows() == 0 || kernel.cols() == 0 ||
      kernel.rows() > input.rows() || kernel.cols() > input.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "kernel " + std::to_string(kernel.rows()) + "x" +
                    std::to_string(kernel.cols()) + " does not fit input " +
                    std::to_string(input.rows()) + "x" +
                    std::to_string(input.cols()));
  }
  const Eigen::Index s = static_cast<Eigen::Index>(stride);
  const Eigen::Index out_rows = (input.rows() - kernel.rows()) / s + 1;
  const Eigen::Index out_cols = (input.cols() - kernel.cols()) / s + 1;
  RealMatrix out(out_rows, out_cols);
  for (Eigen::Index j = 0; j < out_cols; ++j) {
    for (Eigen::Index i = 0; i < out_rows; ++i) {
      double acc = 0.0;
      for (Eigen::Index b = 0; b < kernel.cols(); ++b) {
        const double* in_col = input.col(j * s + b).data() + i * s;
        const double* k_col = kernel.col(b).data();
        for (Eigen::Index a = 0; a < kernel.rows(); ++a) {
          acc += in_col[a] * k_col[a];
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

BandSet ThirdOctaveBands() {
  std::vector<Band> bands;
  const size_t n = kThirdOctaveCenters.size();
  for (size_t i = 0; i < n; ++i) {
    const double fc = kThirdOctaveCenters[i];
    const double lower =
        i == 0 ? fc / kSixthOctave
               : std::sqrt(kThirdOctaveCenters[i - 1] * fc);
    const double upper =
        i + 1 == n ? fc * kSixthOctave
                   : std::sqrt(fc * kThirdOctaveCenters[i + 1]);
    bands.push_back({fc, lower, upper});
  }
  return BandSet(std::move(bands));
}

Signal Bandpass(const Signal& signal, const Band& band) {
  CheckBand(band, signal.sample_rate());
  return BandpassAll(signal, BandSet({band})).front();
}

Signal Bandpass(const Signal& signal, double center_hz) {
  if (!(center_hz > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "band center must be positive");
  }
  return Bandpass(signal,
                  Band{center_hz, center_hz / kSixthOctave,
                       center_hz * kSixthOctave});
}

std::vector<Signal> BandpassAll(const Signal& signal, const BandSet& bands) {
  for (const Band& b : bands.bands()) CheckBand(b, signal.sample_rate());
  RealFft fft(signal.size());
  std::vector<std::complex<double>> spectrum(fft.num_bins());
  std::vector<std::complex<double>> masked(fft.num_bins());
  fft.Forward(signal.samples(), spectrum);
  const double bin_hz =
      static_cast<double>(signal.sample_rate()) / signal.size();

  std::vector<Signal> out;
  out.reserve(bands.size());
  std::vector<double> band_samples(signal.size());
  for (const Band& b : bands.bands()) {
    ApplyBandMask(spectrum, b, bin_hz, masked);
    fft.Inverse(masked, band_samples);
    out.emplace_back(band_samples, signal.sample_rate());
  }
  return out;
}

std::vector<double> SchroederEdc(std::span<const double> samples) {
  std::vector<double> edc(samples.size());
  double acc = 0.0;
  for (size_t i = samples.size(); i-- > 0;) {
    acc += samples[i] * samples[i];
    edc[i] = acc;
  }
  return edc;
}

std::vector<double> EdcToDbNormalized(std::span<const double> edc,
                                      double floor_db) {
  if (edc.empty() || !(edc[0] > 0.0)) {
    throw Error(ErrorCode::kDegenerateSignal,
                "energy decay curve has zero total energy");
  }
  std::vector<double> db(edc.size());
  const double total = edc[0];
  db[0] = 0.0;
  for (size_t i = 1; i < edc.size(); ++i) {
    const double ratio = edc[i] / total;
    db[i] = ratio > 0.0 ? std::max(10.0 * std::log10(ratio), floor_db)
                        : floor_db;
  }
  return db;
}

EdcCurves BandEdcCurves(const Signal& signal, const BandSet& bands,
                        double floor_db) {
  const BandSet usable = bands.BelowNyquist(signal.sample_rate());
  EdcCurves out;
  out.centers = usable.centers();
  out.energies.reserve(usable.size());
  out.curves.resize(static_cast<Eigen::Index>(usable.size()),
                    static_cast<Eigen::Index>(signal.size()));
  if (usable.empty()) return out;

  // Zero-padding to at least twice the length makes the masking a linear
  // rather than circular filter: the pre-ringing of the onset lands in the
  // padding instead of wrapping onto the tail, where it would floor every
  // curve.
  const size_t n = signal.size();
  const size_t padded = FastFftSize(2 * n);
  std::vector<double> input(padded, 0.0);
  std::copy(signal.data().begin(), signal.data().end(), input.begin());
  RealFft fft(padded);
  std::vector<std::complex<double>> spectrum(fft.num_bins());
  std::vector<std::complex<double>> masked(fft.num_bins());
  fft.Forward(input, spectrum);
  const double bin_hz = static_cast<double>(signal.sample_rate()) / padded;

  std::vector<double> band_samples(padded);
  for (size_t b = 0; b < usable.size(); ++b) {
    ApplyBandMask(spectrum, usable.bands()[b], bin_hz, masked);
    fft.Inverse(masked, band_samples);
    const std::vector<double> edc =
        SchroederEdc(std::span<const double>(band_samples).first(n));
    out.energies.push_back(edc[0]);
    auto row = out.curves.row(static_cast<Eigen::Index>(b));
    if (edc[0] > 0.0) {
      const std::vector<double> db = EdcToDbNormalized(edc, floor_db);
      for (size_t t = 0; t < db.size(); ++t) {
        row(static_cast<Eigen::Index>(t)) = db[t];
      }
    } else {
      row.setConstant(floor_db);
      row(0) = 0.0;
    }
  }
  return out;
}

}  // namespace revsim
