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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "revsim/error.h"
#include "revsim/io_util.h"

namespace revsim {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string Fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string XmlEscape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Viridis approximated by linear interpolation between five anchors.
std::string ColorFor(double t) {
  static constexpr std::array<std::array<double, 3>, 5> kStops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
  }};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * (kStops.size() - 1);
  const size_t i = std::min<size_t>(static_cast<size_t>(pos), kStops.size() - 2);
  const double f = pos - static_cast<double>(i);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(kStops[i][0] * (1 - f) + kStops[i + 1][0] * f)),
                static_cast<int>(std::lround(kStops[i][1] * (1 - f) + kStops[i + 1][1] * f)),
                static_cast<int>(std::lround(kStops[i][2] * (1 - f) + kStops[i + 1][2] * f)));
  return buf;
}

double ParseNumber(const std::string& field, const std::string& where) {
  const std::string text = Trim(field);
  if (text.empty()) {
    throw Error(ErrorCode::kManifestFormat, where + ": empty numeric field");
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw Error(ErrorCode::kManifestFormat,
                where + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

std::string FormatResultsCsv(const std::vector<MetricResult>& results,
                             bool with_standardized) {
  std::string out = "metric,ref_id,analyzed_id,value";
  out += with_standardized ? ",value_std\n" : "\n";
  for (const MetricResult& r : results) {
    out += std::string(MetricName(r.metric)) + "," + CsvField(r.ref_id) + "," +
           CsvField(r.analyzed_id) + "," + FormatDouble(r.value);
    if (with_standardized) {
      out += ",";
      if (r.value_std) out += FormatDouble(*r.value_std);
    }
    out += "\n";
  }
  return out;
}

std::vector<MetricResult> ParseResultsCsv(const std::string& text,
                                          const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  std::vector<std::string> fields;
  bool have_header = false;
  bool with_std = false;
  std::vector<MetricResult> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const std::string where = source_name + " line " + std::to_string(line_no);
    if (!SplitCsvLine(line, fields)) {
      throw Error(ErrorCode::kManifestFormat, where + ": unbalanced quotes");
    }
    if (!have_header) {
      for (std::string& f : fields) f = Trim(f);
      const std::vector<std::string> raw = {"metric", "ref_id", "analyzed_id",
                                            "value"};
      std::vector<std::string> expected = raw;
      with_std = fields.size() == 5;
      if (with_std) expected.push_back("value_std");
      if (fields != expected) {
        throw Error(ErrorCode::kManifestFormat,
                    where + ": expected header metric,ref_id,analyzed_id,value"
                            "[,value_std]");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != (with_std ? 5u : 4u)) {
      throw Error(ErrorCode::kManifestFormat,
                  where + ": expected " + std::to_string(with_std ? 5 : 4) +
                      " fields, got " + std::to_string(fields.size()));
    }
    MetricResult r;
    try {
      r.metric = ParseMetricKind(Trim(fields[0]));
    } catch (const Error&) {
      throw Error(ErrorCode::kManifestFormat,
                  where + ": unknown metric '" + fields[0] + "'");
    }
    r.ref_id = fields[1];
    r.analyzed_id = fields[2];
    if (r.ref_id.empty() || r.analyzed_id.empty()) {
      throw Error(ErrorCode::kManifestFormat, where + ": empty id");
    }
    r.value = ParseNumber(fields[3], where);
    if (with_std && !Trim(fields[4]).empty()) {
      r.value_std = ParseNumber(fields[4], where);
    }
    out.push_back(std::move(r));
  }
  if (!have_header) {
    throw Error(ErrorCode::kManifestFormat, source_name + ": missing header");
  }
  return out;
}

std::string FormatMedianMatrixCsv(const MedianMatrix& matrix) {
  std::string out = "reference\\analyzed";
  for (const std::string& label : matrix.col_labels) out += "," + CsvField(label);
  out += "\n";
  for (Eigen::Index r = 0; r < matrix.values.rows(); ++r) {
    out += CsvField(matrix.row_labels[static_cast<size_t>(r)]);
    for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) {
      out += ",";
      if (!matrix.missing(r, c)) out += FormatDouble(matrix.values(r, c));
    }
    out += "\n";
  }
  return out;
}

std::string FormatSweepCsv(const SweepCurve& curve) {
  std::string out = "delta,median,std,n\n";
  for (size_t i = 0; i < curve.delta.size(); ++i) {
    out += std::to_string(curve.delta[i]) + "," + FormatDouble(curve.median[i]) +
           "," + FormatDouble(curve.std[i]) + "," +
           std::to_string(curve.count[i]) + "\n";
  }
  return out;
}

std::string HeatmapSvg(const MedianMatrix& matrix, const std::string& title,
                       double color_min, double color_max) {
  const int cell = 36;
  const int left = 90, top = 50, bar = 18;
  const int rows = static_cast<int>(matrix.values.rows());
  const int cols = static_cast<int>(matrix.values.cols());
  const int width = left + cols * cell + 90;
  const int height = top + rows * cell + 80;
  const double range = color_max > color_min ? color_max - color_min : 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
      << "font-size=\"10\">\n";
  svg << "<defs><pattern id=\"missing\" width=\"6\" height=\"6\" "
         "patternUnits=\"userSpaceOnUse\"><rect width=\"6\" height=\"6\" "
         "fill=\"#ddd\"/><path d=\"M0,6 L6,0\" stroke=\"#999\"/></pattern>"
         "</defs>\n";
  svg << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">"
      << XmlEscape(title) << "</text>\n";
  for (int r = 0; r < rows; ++r) {
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + r * cell + cell / 2 + 4
        << "\" text-anchor=\"end\">"
        << XmlEscape(matrix.row_labels[static_cast<size_t>(r)]) << "</text>\n";
    for (int c = 0; c < cols; ++c) {
      const int x = left + c * cell, y = top + r * cell;
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"";
      if (matrix.missing(r, c)) {
        svg << "url(#missing)\"/>\n";
      } else {
        svg << ColorFor((matrix.values(r, c) - color_min) / range)
            << "\"><title>" << Fixed(matrix.values(r, c), 3)
            << "</title></rect>\n";
      }
    }
  }
  for (int c = 0; c < cols; ++c) {
    const int x = left + c * cell + cell / 2;
    const int y = top + rows * cell + 12;
    svg << "<text x=\"" << x << "\" y=\"" << y
        << "\" text-anchor=\"end\" transform=\"rotate(-45 " << x << " " << y
        << ")\">" << XmlEscape(matrix.col_labels[static_cast<size_t>(c)])
        << "</text>\n";
  }
  // Color bar.
  const int bx = left + cols * cell + 20;
  const int steps = 32;
  const double step_h = static_cast<double>(rows * cell) / steps;
  for (int i = 0; i < steps; ++i) {
    svg << "<rect x=\"" << bx << "\" y=\"" << Fixed(top + i * step_h)
        << "\" width=\"" << bar << "\" height=\"" << Fixed(step_h + 0.5)
        << "\" fill=\"" << ColorFor(1.0 - (i + 0.5) / steps) << "\"/>\n";
  }
  svg << "<text x=\"" << bx + bar + 4 << "\" y=\"" << top + 8 << "\">"
      << Fixed(color_max) << "</text>\n";
  svg << "<text x=\"" << bx + bar + 4 << "\" y=\"" << top + rows * cell
      << "\">" << Fixed(color_min) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string SweepSvg(
    const std::vector<std::pair<std::string, SweepCurve>>& curves,
    int target_panels) {
  const int width = 640, height = 400;
  const int left = 60, right = 120, top = 30, bottom = 50;
  const int pw = width - left - right, ph = height - top - bottom;

  int dmin = std::numeric_limits<int>::max();
  int dmax = std::numeric_limits<int>::min();
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  for (const auto& [name, curve] : curves) {
    for (size_t i = 0; i < curve.delta.size(); ++i) {
      dmin = std::min(dmin, curve.delta[i]);
      dmax = std::max(dmax, curve.delta[i]);
      vmin = std::min(vmin, curve.median[i] - curve.std[i]);
      vmax = std::max(vmax, curve.median[i] + curve.std[i]);
    }
  }
  if (dmin > dmax) {
    dmin = -1;
    dmax = 1;
  }
  if (dmin == dmax) ++dmax;
  if (!(vmax > vmin)) {
    vmin = 0.0;
    vmax = 1.0;
  }
  auto px = [&](int d) {
    return left + pw * static_cast<double>(d - dmin) / (dmax - dmin);
  };
  auto py = [&](double v) { return top + ph * (vmax - v) / (vmax - vmin); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
      << "font-size=\"11\">\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<line x1=\"" << Fixed(px(0)) << "\" y1=\"" << top << "\" x2=\""
      << Fixed(px(0)) << "\" y2=\"" << top + ph
      << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">panel count difference to target ("
      << target_panels << " panels)</text>\n";
  for (int d : {dmin, 0, dmax}) {
    svg << "<text x=\"" << Fixed(px(d)) << "\" y=\"" << top + ph + 14
        << "\" text-anchor=\"middle\">" << d << "</text>\n";
  }
  svg << "<text x=\"" << left - 6 << "\" y=\"" << top + 4
      << "\" text-anchor=\"end\">" << Fixed(vmax) << "</text>\n";
  svg << "<text x=\"" << left - 6 << "\" y=\"" << top + ph
      << "\" text-anchor=\"end\">" << Fixed(vmin) << "</text>\n";

  size_t k = 0;
  for (const auto& [name, curve] : curves) {
    const char* color = kPalette[k % std::size(kPalette)];
    if (!curve.delta.empty()) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" "
          << "stroke=\"none\" points=\"";
      for (size_t i = 0; i < curve.delta.size(); ++i) {
        svg << Fixed(px(curve.delta[i])) << ","
            << Fixed(py(curve.median[i] + curve.std[i])) << " ";
      }
      for (size_t i = curve.delta.size(); i-- > 0;) {
        svg << Fixed(px(curve.delta[i])) << ","
            << Fixed(py(curve.median[i] - curve.std[i])) << " ";
      }
      svg << "\"/>\n<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (size_t i = 0; i < curve.delta.size(); ++i) {
        svg << Fixed(px(curve.delta[i])) << "," << Fixed(py(curve.median[i]))
            << " ";
      }
      svg << "\"/>\n";
    }
    const int ly = top + 12 + 16 * static_cast<int>(k);
    svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4
        << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 34 << "\" y=\"" << ly << "\">"
        << XmlEscape(name) << "</text>\n";
    ++k;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace revsim
