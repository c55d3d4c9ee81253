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
#include "dpident/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dpident {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvWriter::CsvWriter(std::string provenance) {
  if (!provenance.empty()) {
    out_ += "# provenance: ";
    out_ += provenance;
    out_ += '\n';
  }
}

void CsvWriter::header(const std::vector<std::string>& names) {
  columns_ = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ += ',';
    out_ += quote_csv(names[i]);
  }
  out_ += '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (columns_ != 0 && cells.size() != columns_) {
    throw std::invalid_argument("CSV row width does not match header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    if (const auto* s = std::get_if<std::string>(&cells[i])) {
      out_ += quote_csv(*s);
    } else if (const auto* d = std::get_if<double>(&cells[i])) {
      out_ += format_double(*d);
    } else {
      out_ += std::to_string(std::get<long>(cells[i]));
    }
  }
  out_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
  write_text_file(path, out_);
}

SvgChart::SvgChart(std::string title, std::string provenance)
    : title_(std::move(title)), provenance_(std::move(provenance)) {}

void SvgChart::add_polyline(const std::vector<double>& xs,
                            const std::vector<double>& ys,
                            const std::string& color) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw std::invalid_argument("polyline needs matching nonempty x/y");
  }
  lines_.push_back({xs, ys, color});
}

std::string SvgChart::render() const {
  constexpr double kW = 720.0, kH = 480.0, kPad = 48.0;
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  bool first = true;
  for (const Line& line : lines_) {
    for (std::size_t i = 0; i < line.xs.size(); ++i) {
      if (!std::isfinite(line.xs[i]) || !std::isfinite(line.ys[i])) continue;
      if (first) {
        x_lo = x_hi = line.xs[i];
        y_lo = y_hi = line.ys[i];
        first = false;
      }
      x_lo = std::min(x_lo, line.xs[i]);
      x_hi = std::max(x_hi, line.xs[i]);
      y_lo = std::min(y_lo, line.ys[i]);
      y_hi = std::max(y_hi, line.ys[i]);
    }
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  auto sx = [&](double x) {
    return kPad + (x - x_lo) / (x_hi - x_lo) * (kW - 2.0 * kPad);
  };
  auto sy = [&](double y) {
    return kH - kPad - (y - y_lo) / (y_hi - y_lo) * (kH - 2.0 * kPad);
  };
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\">\n";
  if (!provenance_.empty()) {
    std::string esc;
    for (char c : provenance_) {
      if (c == '<') esc += "&lt;";
      else if (c == '>') esc += "&gt;";
      else if (c == '&') esc += "&amp;";
      else esc += c;
    }
    svg += "<desc>" + esc + "</desc>\n";
  }
  svg += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" + title_ + "</text>\n";
  svg += "<rect x=\"" + format_double(kPad) + "\" y=\"" + format_double(kPad) +
         "\" width=\"" + format_double(kW - 2 * kPad) + "\" height=\"" +
         format_double(kH - 2 * kPad) +
         "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  for (const std::string& label :
       {format_double(x_lo) + "|" + format_double(kPad),
        format_double(x_hi) + "|" + format_double(kW - kPad)}) {
    const auto bar = label.find('|');
    svg += "<text x=\"" + label.substr(bar + 1) + "\" y=\"" +
           format_double(kH - kPad + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + label.substr(0, bar) + "</text>\n";
  }
  for (const std::string& label :
       {format_double(y_lo) + "|" + format_double(kH - kPad),
        format_double(y_hi) + "|" + format_double(kPad)}) {
    const auto bar = label.find('|');
    svg += "<text x=\"" + format_double(kPad - 6.0) + "\" y=\"" +
           label.substr(bar + 1) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + label.substr(0, bar) + "</text>\n";
  }
  for (const Line& line : lines_) {
    svg += "<polyline fill=\"none\" stroke=\"" + line.color +
           "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < line.xs.size(); ++i) {
      if (!std::isfinite(line.xs[i]) || !std::isfinite(line.ys[i])) continue;
      svg += format_double(sx(line.xs[i])) + "," + format_double(sy(line.ys[i]));
      if (i + 1 < line.xs.size()) svg += ' ';
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void SvgChart::write_file(const std::string& path) const {
  write_text_file(path, render());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace dpident
