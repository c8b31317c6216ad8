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

// Signal-processing primitives shared by all metrics: windows, STFT, strided
// 2D smoothing, a third-octave filterbank and Schroeder backward integration.
// Every function here is pure.

#ifndef REVSIM_DSP_CORE_H_
#define REVSIM_DSP_CORE_H_

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <vector>

namespace revsim {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
// Band-major storage for per-band curves; each row is contiguous in time.
using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Mono sample buffer with its rate. Never empty, never non-finite.
class Signal {
 public:
  Signal(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  const std::vector<double>& data() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  size_t size() const { return samples_.size(); }
  double nyquist() const { return 0.5 * sample_rate_; }

  // First `length` samples. 1 <= length <= size().
  Signal Head(size_t length) const;
  // Samples from `offset` to the end. offset < size().
  Signal Tail(size_t offset) const;
  Signal Scaled(double gain) const;

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

// One-sided complex STFT, frequency along rows and frames along columns.
struct Spectrogram {
  ComplexMatrix bins;
  size_t window_length = 0;
  size_t hop = 0;
  size_t fft_size = 0;

  size_t num_bins() const { return static_cast<size_t>(bins.rows()); }
  size_t num_frames() const { return static_cast<size_t>(bins.cols()); }
};

struct StftParams {
  size_t window_length = 1024;
  size_t hop = 256;
  // 0 means fft_size == window_length. Frames are zero-padded at the end
  // when fft_size > window_length.
  size_t fft_size = 0;
};

struct Band {
  double center_hz;
  double lower_hz;
  double upper_hz;
};

// Ordered set of analysis bands, centers strictly increasing.
class BandSet {
 public:
  explicit BandSet(std::vector<Band> bands);

  const std::vector<Band>& bands() const { return bands_; }
  std::vector<double> centers() const;
  size_t size() const { return bands_.size(); }
  bool empty() const { return bands_.empty(); }

  // Drops every band whose upper edge exceeds sample_rate/2, warning once per
  // dropped band.
  BandSet BelowNyquist(int sample_rate) const;

 private:
  std::vector<Band> bands_;
};

// Per-band energy decay curves in dB, one row per band.
struct EdcCurves {
  RowMajorMatrix curves;
  std::vector<double> centers;
  // Total energy of each band-limited signal, i.e. the un-normalized edc[0].
  std::vector<double> energies;
  bool normalized = true;
};

// Periodic Hann window w[n] = 0.5 (1 - cos(2 pi n / length)).
std::vector<double> HannWindow(size_t length);

// Outer product of two periodic Hann windows of length `side`.
RealMatrix HannKernel2d(size_t side);

// Frames start at sample 0, no centering; a trailing partial frame is
// discarded. Throws kInvalidArgument when the signal is shorter than one
// window.
Spectrogram Stft(const Signal& signal, const StftParams& params);
Spectrogram Stft(const Signal& signal, size_t window_length, size_t hop);

size_t NumFrames(size_t signal_length, size_t window_length, size_t hop);

RealMatrix PowerSpectrogram(const Spectrogram& spec);
RealMatrix MagnitudeSpectrogram(const Spectrogram& spec);

// Cross-correlation (no kernel flip), valid region only, equal stride along
// both axes. Output extent per axis is floor((in - k) / stride) + 1.
RealMatrix Conv2dStrided(const RealMatrix& input, const RealMatrix& kernel,
                         size_t stride);

// The 29 preferred third-octave centers, 20 Hz to 12.5 kHz. Interior band
// edges sit at the geometric mean of adjacent centers so the bands tile the
// spectrum without gaps or overlap; the outermost edges are
// 20 * 2^(-1/6) and 12500 * 2^(1/6).
BandSet ThirdOctaveBands();

// Zero-phase brickwall band limitation: bins with lower <= f < upper are
// kept, everything else is zeroed. Throws kBandOutOfRange when the band's
// upper edge lies above Nyquist.
Signal Bandpass(const Signal& signal, const Band& band);
// Base-2 third-octave band around `center_hz`, edges center * 2^(+-1/6).
Signal Bandpass(const Signal& signal, double center_hz);

// Applies every band of `bands` to one shared forward transform.
std::vector<Signal> BandpassAll(const Signal& signal, const BandSet& bands);

// Backward-integrated energy: edc[t] = sum_{tau >= t} x[tau]^2.
std::vector<double> SchroederEdc(std::span<const double> samples);

inline constexpr double kDefaultEdcFloorDb = -120.0;

// 10 log10(edc[t] / edc[0]) clamped below at floor_db. Throws
// kDegenerateSignal when edc[0] is not positive.
std::vector<double> EdcToDbNormalized(std::span<const double> edc,
                                      double floor_db = kDefaultEdcFloorDb);

// Normalized per-band EDCs of `signal`. Each band is the brickwall-masked
// signal, filtered linearly (zero-padded to at least twice the length) and cut back to
// the input length. Bands above Nyquist are dropped.
// Bands with no energy get a curve that is 0 dB at t = 0 and floor_db after.
EdcCurves BandEdcCurves(const Signal& signal, const BandSet& bands,
                        double floor_db = kDefaultEdcFloorDb);

}  // namespace revsim

#endif  // REVSIM_DSP_CORE_H_
