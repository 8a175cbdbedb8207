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

#include "delaydim/series.hpp"

#include <cmath>

#include "delaydim/errors.hpp"

namespace delaydim {

namespace {

bool finite(double x) { return std::isfinite(x); }
bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

template <class T>
void validate_series(const BasicTimeSeries<T>& series) {
  if (series.size() < 2)
    throw Error(ErrorCode::InvalidSeries,
                "series needs at least 2 samples, got " + std::to_string(series.size()));
  for (std::size_t k = 0; k < series.size(); ++k)
    if (!finite(series.values[k]))
      throw Error(ErrorCode::InvalidSeries, "non-finite value at index " + std::to_string(k));
}

template <class T>
TDMatrix<T> build_td_matrix(const BasicTimeSeries<T>& series) {
  validate_series(series);
  const std::size_t L = td_size(series.size());
  std::vector<T> gen(series.values.begin(), series.values.begin() + (2 * L - 1));
  return TDMatrix<T>(std::move(gen), series.size());
}

template <class T>
TDTensor<T> build_td_tensor(const std::vector<BasicTimeSeries<T>>& series_list) {
  if (series_list.empty()) throw Error(ErrorCode::InvalidInput, "empty series list");
  const std::size_t n = series_list.front().size();
  std::vector<TDMatrix<T>> blocks;
  blocks.reserve(series_list.size());
  for (std::size_t b = 0; b < series_list.size(); ++b) {
    if (series_list[b].size() != n)
      throw Error(ErrorCode::ShapeMismatch, "series " + std::to_string(b) + " has length " +
                                                std::to_string(series_list[b].size()) +
                                                ", expected " + std::to_string(n));
    blocks.push_back(build_td_matrix(series_list[b]));
  }
  return TDTensor<T>(std::move(blocks));
}

std::pair<TimeSeries, TimeSeries> split_complex(const ComplexSeries& series) {
  validate_series(series);
  TimeSeries re{{}, series.dt, series.label.empty() ? "re" : series.label + ".re"};
  TimeSeries im{{}, series.dt, series.label.empty() ? "im" : series.label + ".im"};
  re.values.reserve(series.size());
  im.values.reserve(series.size());
  for (const auto& z : series.values) {
    re.values.push_back(z.real());
    im.values.push_back(z.imag());
  }
  return {std::move(re), std::move(im)};
}

ComplexSeries to_complex(const TimeSeries& series) {
  ComplexSeries out{{}, series.dt, series.label};
  out.values.assign(series.values.begin(), series.values.end());
  return out;
}

template void validate_series(const BasicTimeSeries<double>&);
template void validate_series(const BasicTimeSeries<cplx>&);
template TDMatrix<double> build_td_matrix(const BasicTimeSeries<double>&);
template TDMatrix<cplx> build_td_matrix(const BasicTimeSeries<cplx>&);
template TDTensor<double> build_td_tensor(const std::vector<BasicTimeSeries<double>>&);
template TDTensor<cplx> build_td_tensor(const std::vector<BasicTimeSeries<cplx>>&);

}  // namespace delaydim
