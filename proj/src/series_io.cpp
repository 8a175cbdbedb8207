// Copyright 2026 The delaydim Authors
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

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "delaydim/errors.hpp"
#include "delaydim/series.hpp"
#include "delaydim/textio.hpp"

namespace delaydim {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ';' || c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool parse_double(const std::string& token, double& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, value);
  return res.ec == std::errc() && res.ptr == last;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

SeriesFile read_series(std::istream& in, const std::string& source) {
  SeriesFile out;
  std::vector<double> t, a, b;
  std::size_t columns = 0;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(strip_comment(line));
    if (fields.empty()) continue;
    double v[3];
    bool numeric = fields.size() == 2 || fields.size() == 3;
    for (std::size_t i = 0; numeric && i < fields.size(); ++i) numeric = parse_double(fields[i], v[i]);
    if (!numeric) {
      if (!seen_data && columns == 0 && (fields.size() == 2 || fields.size() == 3)) {
        columns = fields.size();
        continue;
      }
      throw Error(ErrorCode::ParseError,
                  source + ":" + std::to_string(lineno) + ": expected 2 or 3 numeric columns");
    }
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns)
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(lineno) + ": expected " +
                                             std::to_string(columns) + " columns");
    seen_data = true;
    t.push_back(v[0]);
    a.push_back(v[1]);
    if (columns == 3) b.push_back(v[2]);
  }
  const double dt = t.size() >= 2 ? t[1] - t[0] : 1.0;
  if (columns == 3) {
    out.is_complex = true;
    out.complex.dt = dt;
    out.complex.label = source;
    out.complex.values.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out.complex.values.emplace_back(a[k], b[k]);
    validate_series(out.complex);
  } else {
    out.real.dt = dt;
    out.real.label = source;
    out.real.values = std::move(a);
    validate_series(out.real);
  }
  return out;
}

SeriesFile read_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  return read_series(in, path);
}

void write_series(std::ostream& out, const TimeSeries& series) {
  out << "t,value\n";
  for (std::size_t k = 0; k < series.size(); ++k)
    out << format_double(static_cast<double>(k) * series.dt) << ',' << format_double(series[k])
        << '\n';
}

void write_series(std::ostream& out, const ComplexSeries& series) {
  out << "t,re,im\n";
  for (std::size_t k = 0; k < series.size(); ++k)
    out << format_double(static_cast<double>(k) * series.dt) << ','
        << format_double(series[k].real()) << ',' << format_double(series[k].imag()) << '\n';
}

namespace {

template <class S>
void write_to_path(const std::string& path, const S& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  write_series(out, series);
}

}  // namespace

void write_series_file(const std::string& path, const TimeSeries& series) {
  write_to_path(path, series);
}

void write_series_file(const std::string& path, const ComplexSeries& series) {
  write_to_path(path, series);
}

}  // namespace delaydim
