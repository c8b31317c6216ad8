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

// Text serialization of evaluation outputs: CSV tables and static SVG plots.
// Every formatter is deterministic so outputs can be compared byte for byte.

#ifndef REVSIM_REPORT_H_
#define REVSIM_REPORT_H_

#include <string>
#include <utility>
#include <vector>

#include "revsim/evaluation.h"
#include "revsim/metrics.h"

namespace revsim {

// metric,ref_id,analyzed_id,value[,value_std]
std::string FormatResultsCsv(const std::vector<MetricResult>& results,
                             bool with_standardized);

// Accepts either layout. Throws kManifestFormat naming the line on any
// malformed row.
std::vector<MetricResult> ParseResultsCsv(const std::string& text,
                                          const std::string& source_name);

// First row holds the analyzed-group labels, first column the reference
// labels. Missing cells are empty fields.
std::string FormatMedianMatrixCsv(const MedianMatrix& matrix);

// delta,median,std,n
std::string FormatSweepCsv(const SweepCurve& curve);

// Heatmap with a caller-provided color range, so several metrics can share
// one scale. Missing cells are drawn hatched-gray.
std::string HeatmapSvg(const MedianMatrix& matrix, const std::string& title,
                       double color_min, double color_max);

// Median lines with +/- std bands, one per named curve.
std::string SweepSvg(
    const std::vector<std::pair<std::string, SweepCurve>>& curves,
    int target_panels);

}  // namespace revsim

#endif  // REVSIM_REPORT_H_
