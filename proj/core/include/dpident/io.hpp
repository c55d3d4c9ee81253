//
// Copyright 2026 The dpident Authors
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
//
#ifndef DPIDENT_IO_HPP_
#define DPIDENT_IO_HPP_

#include <string>
#include <variant>
#include <vector>

namespace dpident {

using CsvCell = std::variant<std::string, double, long>;

// RFC-4180 field quoting; doubles rendered with 17 significant digits so
// re-runs byte-reproduce. The provenance string (resolved config + seed) is
// embedded as a leading '#' comment line when nonempty.
class CsvWriter {
 public:
  explicit CsvWriter(std::string provenance = "");

  void header(const std::vector<std::string>& names);
  void row(const std::vector<CsvCell>& cells);

  const std::string& str() const { return out_; }
  void write_file(const std::string& path) const;

 private:
  std::string out_;
  std::size_t columns_ = 0;
};

std::string format_double(double v);

// Minimal self-contained polyline chart; provenance lands in <desc>.
class SvgChart {
 public:
  SvgChart(std::string title, std::string provenance = "");

  void add_polyline(const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& color);
  std::string render() const;
  void write_file(const std::string& path) const;

 private:
  struct Line {
    std::vector<double> xs, ys;
    std::string color;
  };
  std::string title_;
  std::string provenance_;
  std::vector<Line> lines_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dpident

#endif  // DPIDENT_IO_HPP_
