// Copyright 2026 The elfz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "elfz/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace elfz {

std::string format_trend_table(std::span<const TrendRow> rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%9s %7s %7s %9s %6s %8s\n", "iteration", "union", "valid",
                "admitted", "weak", "invalid");
  os << line;
  for (const TrendRow& r : rows) {
    std::snprintf(line, sizeof line, "%9d %7zu %7zu %9zu %6zu %8zu\n", r.iteration,
                  r.survivor_union_size, r.mutants_valid, r.mutants_admitted,
                  r.mutants_discarded_weak, r.mutants_invalid);
    os << line;
  }
  return os.str();
}

bool is_non_decreasing(std::span<const TrendRow> rows) {
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].survivor_union_size < rows[i - 1].survivor_union_size) return false;
  return true;
}

std::string trend_svg(std::span<const TrendRow> rows, const std::string& title) {
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  int max_x = 1;
  size_t max_y = 1;
  for (const TrendRow& r : rows) {
    max_x = std::max(max_x, r.iteration);
    max_y = std::max(max_y, r.survivor_union_size);
  }
  auto px = [&](int x) { return kLeft + pw * x / max_x; };
  auto py = [&](size_t y) { return kTop + ph - ph * static_cast<double>(y) / static_cast<double>(max_y); };

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\""
     << kTop + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const size_t yv = max_y * i / 4;
    const int xv = max_x * i / 4;
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv
       << "</text>\n";
    os << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << xv
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">iteration</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << kTop + ph / 2 << ")\">survivor_union_size</text>\n";
  if (!rows.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const TrendRow& r : rows) os << px(r.iteration) << ',' << py(r.survivor_union_size) << ' ';
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace elfz
