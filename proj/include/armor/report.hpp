// Copyright 2026 The ARMOR-Tabular Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace armor {

/// Shortest round-trippable decimal form of `value` ("inf", "-inf", "nan"
/// for non-finite values).
std::string format_double(double value);

/// Splits one CSV line on commas (no quoting; none of our outputs need it).
std::vector<std::string> split_csv_line(const std::string& line);

struct LineSeries {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 640;
  int height = 400;
};

/// Self-contained SVG line chart with axes, ticks and a legend.
std::string line_chart_svg(const std::vector<LineSeries>& series, const ChartOptions& options);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace armor
