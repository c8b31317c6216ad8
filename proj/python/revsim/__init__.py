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
"""Late-reverberation similarity metrics (PC, EDC, MSS, ESR)."""

from revsim._revsim import (
    RevsimError,
    bandpass,
    conv2d_strided,
    detect_onset,
    edc_loss,
    edc_to_db,
    esr_loss,
    extract_late_reverb,
    mss_loss,
    pc_loss,
    read_wav,
    run_cli,
    schroeder_edc,
    synth_rir,
    third_octave_centers,
    write_wav,
)

__all__ = [
    "RevsimError",
    "bandpass",
    "conv2d_strided",
    "detect_onset",
    "edc_loss",
    "edc_to_db",
    "esr_loss",
    "extract_late_reverb",
    "mss_loss",
    "pc_loss",
    "read_wav",
    "run_cli",
    "schroeder_edc",
    "synth_rir",
    "third_octave_centers",
    "write_wav",
]
