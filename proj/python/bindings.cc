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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "revsim/cli.h"
#include "revsim/dataset.h"
#include "revsim/dsp_core.h"
#include "revsim/error.h"
#include "revsim/metrics.h"
#include "revsim/preprocess.h"
#include "revsim/wav.h"

namespace py = pybind11;

namespace revsim {
namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Signal ToSignal(const Array& a, int sample_rate) {
  if (a.ndim() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "expected a 1-D array");
  }
  return Signal(std::vector<double>(a.data(), a.data() + a.size()),
                sample_rate);
}

Array ToArray(std::span<const double> x) {
  Array out(static_cast<py::ssize_t>(x.size()));
  std::copy(x.begin(), x.end(), out.mutable_data());
  return out;
}

EdcConfig EdcFor(const std::vector<double>& bands, double floor_db) {
  EdcConfig cfg;
  if (!bands.empty()) {
    const BandSet all = ThirdOctaveBands();
    std::vector<Band> chosen;
    for (double fc : bands) {
      bool found = false;
      for (const Band& b : all.bands()) {
        if (b.center_hz == fc) {
          chosen.push_back(b);
          found = true;
        }
      }
      if (!found) {
        throw Error(ErrorCode::kInvalidArgument,
                    "not a third-octave center: " + std::to_string(fc));
      }
    }
    cfg.bands = BandSet(std::move(chosen));
  }
  cfg.floor_db = floor_db;
  return cfg;
}

}  // namespace
}  // namespace revsim

PYBIND11_MODULE(_revsim, m) {
  using namespace revsim;
  m.doc() = "Late-reverberation similarity metrics.";

  // Messages start with the error code name, e.g. "kIo: ...".
  py::register_exception<Error>(m, "RevsimError", PyExc_RuntimeError);

  m.def(
      "pc_loss",
      [](const Array& h, const Array& h_hat, int sample_rate, size_t window,
         size_t hop, size_t kernel_side, size_t stride, double epsilon) {
        PcConfig cfg{window, hop, kernel_side, stride, epsilon};
        return PcLoss(ToSignal(h, sample_rate), ToSignal(h_hat, sample_rate),
                      cfg);
      },
      py::arg("h"), py::arg("h_hat"), py::arg("sample_rate") = 48000,
      py::arg("stft_window") = 1024, py::arg("stft_hop") = 256,
      py::arg("kernel_side") = 64, py::arg("stride") = 4,
      py::arg("epsilon") = 1e-12);

  m.def(
      "edc_loss",
      [](const Array& h, const Array& h_hat, int sample_rate,
         const std::vector<double>& bands, double floor_db) {
        return EdcLoss(ToSignal(h, sample_rate), ToSignal(h_hat, sample_rate),
                       EdcFor(bands, floor_db));
      },
      py::arg("h"), py::arg("h_hat"), py::arg("sample_rate") = 48000,
      py::arg("bands") = std::vector<double>{},
      py::arg("floor_db") = kDefaultEdcFloorDb);

  m.def(
      "mss_loss",
      [](const Array& h, const Array& h_hat, int sample_rate,
         const std::vector<std::tuple<size_t, size_t, size_t>>& resolutions,
         double log_epsilon) {
        MssConfig cfg;
        if (!resolutions.empty()) {
          cfg.resolutions.clear();
          for (const auto& [fft, hop, win] : resolutions) {
            cfg.resolutions.push_back({fft, hop, win});
          }
        }
        cfg.log_epsilon = log_epsilon;
        return MssLoss(ToSignal(h, sample_rate), ToSignal(h_hat, sample_rate),
                       cfg);
      },
      py::arg("h"), py::arg("h_hat"), py::arg("sample_rate") = 48000,
      py::arg("resolutions") = std::vector<std::tuple<size_t, size_t, size_t>>{},
      py::arg("log_epsilon") = 1e-8);

  m.def(
      "esr_loss",
      [](const Array& h, const Array& h_hat, int sample_rate) {
        return EsrLoss(ToSignal(h, sample_rate), ToSignal(h_hat, sample_rate));
      },
      py::arg("h"), py::arg("h_hat"), py::arg("sample_rate") = 48000);

  m.def(
      "schroeder_edc",
      [](const Array& x) { return ToArray(SchroederEdc(ToSignal(x, 1).data())); },
      py::arg("x"));
  m.def(
      "edc_to_db",
      [](const Array& edc, double floor_db) {
        return ToArray(EdcToDbNormalized(ToSignal(edc, 1).data(), floor_db));
      },
      py::arg("edc"), py::arg("floor_db") = kDefaultEdcFloorDb);
  m.def("conv2d_strided", &Conv2dStrided, py::arg("input"), py::arg("kernel"),
        py::arg("stride"));
  m.def(
      "bandpass",
      [](const Array& x, double center_hz, int sample_rate) {
        return ToArray(Bandpass(ToSignal(x, sample_rate), center_hz).data());
      },
      py::arg("x"), py::arg("center_hz"), py::arg("sample_rate") = 48000);
  m.def("third_octave_centers", [] { return ThirdOctaveBands().centers(); });

  m.def(
      "detect_onset",
      [](const Array& x, int sample_rate) {
        return DetectOnset(ToSignal(x, sample_rate));
      },
      py::arg("x"), py::arg("sample_rate") = 48000);
  m.def(
      "extract_late_reverb",
      [](const Array& x, double t_mix_ms, int sample_rate) {
        PreprocessConfig cfg;
        cfg.t_mix_ms = t_mix_ms;
        const PreprocessResult r =
            ExtractLateReverb(ToSignal(x, sample_rate), cfg);
        return py::make_tuple(ToArray(r.late.data()), r.trim.onset_sample);
      },
      py::arg("x"), py::arg("t_mix_ms"), py::arg("sample_rate") = 48000,
      "Returns (late, onset_sample).");

  m.def(
      "synth_rir",
      [](double t60_s, double length_s, uint64_t seed, int sample_rate) {
        SynthSpec spec;
        spec.t60_s = t60_s;
        spec.length_s = length_s;
        spec.seed = seed;
        spec.sample_rate = sample_rate;
        return ToArray(SynthRir(spec).data());
      },
      py::arg("t60_s"), py::arg("length_s") = 1.0, py::arg("seed") = 0,
      py::arg("sample_rate") = 48000);

  m.def(
      "read_wav",
      [](const std::filesystem::path& path) {
        const Signal s = ReadWav(path);
        return py::make_tuple(ToArray(s.data()), s.sample_rate());
      },
      py::arg("path"), "Returns (samples, sample_rate).");
  m.def(
      "write_wav",
      [](const std::filesystem::path& path, const Array& x, int sample_rate) {
        WriteWav(path, ToSignal(x, sample_rate), WavFormat::kFloat32);
      },
      py::arg("path"), py::arg("x"), py::arg("sample_rate") = 48000);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "revsim");
        std::vector<const char*> argv;
        for (const std::string& a : args) argv.push_back(a.c_str());
        py::gil_scoped_release release;
        return RunCli(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the command-line tool; returns its exit code.");
}
