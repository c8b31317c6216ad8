# Copyright 2026 The Revsim Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import revsim


def _decay(t60, seconds=0.5, seed=0, sr=48000):
    rng = np.random.default_rng(seed)
    t = np.arange(int(seconds * sr)) / sr
    return rng.standard_normal(t.size) * np.exp(-np.log(1000.0) * t / t60)


def test_identical_signals_score_zero():
    h = revsim.synth_rir(0.8, length_s=0.5, seed=3)
    for fn in (revsim.pc_loss, revsim.edc_loss, revsim.mss_loss, revsim.esr_loss):
        assert fn(h, h) == 0.0


def test_esr_matches_numpy():
    h, g = _decay(0.5, seed=1), _decay(0.7, seed=2)
    want = np.sum((h - g) ** 2) / np.sum(h**2)
    assert revsim.esr_loss(h, g) == pytest.approx(want, rel=1e-12)


def test_pc_is_symmetric_and_edc_gain_invariant():
    h, g = _decay(0.5, seed=1), _decay(0.9, seed=2)
    assert revsim.pc_loss(h, g) == revsim.pc_loss(g, h)
    base = revsim.edc_loss(h, g)
    assert revsim.edc_loss(h, 3.0 * g) == pytest.approx(base, rel=1e-9)
    assert revsim.edc_loss(h, g, bands=[500.0, 1000.0]) > 0.0


def test_schroeder_and_conv2d():
    x = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(revsim.schroeder_edc(x), [14.0, 13.0, 9.0])
    out = revsim.conv2d_strided(np.ones((4, 4)), np.ones((2, 2)), 2)
    np.testing.assert_allclose(out, 4.0 * np.ones((2, 2)))
    assert len(revsim.third_octave_centers()) == 29


def test_errors_are_raised():
    with pytest.raises(revsim.RevsimError, match="pair"):
        revsim.esr_loss(np.ones(10), np.ones(11))
    with pytest.raises(revsim.RevsimError):
        revsim.esr_loss(np.zeros(10), np.ones(10))


def test_preprocess_and_wav_round_trip(tmp_path):
    x = np.concatenate([np.zeros(480), _decay(0.6, seconds=0.4, seed=4)])
    late, onset = revsim.extract_late_reverb(x, t_mix_ms=10.0)
    assert 0 < late.size < x.size
    assert onset <= 600
    path = tmp_path / "x.wav"
    revsim.write_wav(path, x)
    y, sr = revsim.read_wav(path)
    assert sr == 48000
    np.testing.assert_allclose(y, x.astype(np.float32), rtol=0, atol=0)


def test_cli_synth(tmp_path):
    code = revsim.run_cli(
        ["synth", "--groups", "1", "--per-group", "2", "--length", "0.2",
         "--output-dir", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "manifest.csv").exists()
