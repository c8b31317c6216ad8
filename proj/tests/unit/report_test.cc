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

#include "revsim/report.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_util.h"

namespace revsim {
namespace {

std::vector<MetricResult> Sample() {
  return {{0.1, MetricKind::kPc, "a", "b", "d1", -0.5},
          {1.0 / 3.0, MetricKind::kEdc, "x,y", "b", "d2", 1e-300},
          {0.0, MetricKind::kEsr, "a", "a", "d3", 0.0}};
}

TEST(ResultsCsvTest, RoundTripIsExact) {
  const auto in = Sample();
  const auto out = ParseResultsCsv(FormatResultsCsv(in, true), "r.csv");
  ASSERT_EQ(out.size(), in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(out[i].metric, in[i].metric);
    EXPECT_EQ(out[i].ref_id, in[i].ref_id);
    EXPECT_EQ(out[i].analyzed_id, in[i].analyzed_id);
    EXPECT_EQ(out[i].value, in[i].value);
    EXPECT_EQ(out[i].value_std, in[i].value_std);
  }
  const auto raw = ParseResultsCsv(FormatResultsCsv(in, false), "r.csv");
  EXPECT_FALSE(raw[0].value_std);
  EXPECT_EQ(FormatResultsCsv(in, false).substr(0, 33),
            "metric,ref_id,analyzed_id,value\nP");
}

TEST(ResultsCsvTest, MalformedLineIsNamed) {
  const std::string text =
      "metric,ref_id,analyzed_id,value\nPC,a,b,0.5\nPC,a,b,zzz\n";
  try {
    ParseResultsCsv(text, "r.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kManifestFormat);
    EXPECT_NE(std::string(e.what()).find("r.csv line 3"), std::string::npos);
  }
  EXPECT_EQ(testing::ThrownCode([] {
              ParseResultsCsv("metric,ref_id,analyzed_id,value\nXX,a,b,1\n",
                              "r");
            }),
            ErrorCode::kManifestFormat);
  EXPECT_EQ(testing::ThrownCode([] { ParseResultsCsv("a,b\n", "r"); }),
            ErrorCode::kManifestFormat);
}

TEST(MedianCsvTest, MissingCellsAreEmpty) {
  MedianMatrix m;
  m.row_labels = {"0-4", "5-9"};
  m.col_labels = m.row_labels;
  m.values = RealMatrix::Constant(2, 2, std::numeric_limits<double>::quiet_NaN());
  m.counts = Eigen::MatrixXi::Zero(2, 2);
  m.values(0, 0) = -1.5;
  m.counts(0, 0) = 3;
  EXPECT_EQ(FormatMedianMatrixCsv(m),
            "reference\\analyzed,0-4,5-9\n0-4,-1.5,\n5-9,,\n");
  const std::string svg = HeatmapSvg(m, "PC", -2.0, 2.0);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(SweepCsvTest, Layout) {
  SweepCurve c;
  c.delta = {-5, 0};
  c.median = {1.0, 0.0};
  c.std = {0.25, 0.0};
  c.count = {3, 1};
  EXPECT_EQ(FormatSweepCsv(c), "delta,median,std,n\n-5,1,0.25,3\n0,0,0,1\n");
  const std::string svg = SweepSvg({{"ESR", c}}, 20);
  EXPECT_NE(svg.find("ESR"), std::string::npos);
}

}  // namespace
}  // namespace revsim
