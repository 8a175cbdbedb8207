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

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace delaydim {

using cplx = std::complex<double>;

// Uniformly indexed samples A(0)..A(K). dt is carried along but never used
// by the rank machinery.
template <class T>
struct BasicTimeSeries {
  std::vector<T> values;
  double dt = 1.0;
  std::string label;

  std::size_t size() const { return values.size(); }
  const T& operator[](std::size_t k) const { return values[k]; }
  T& operator[](std::size_t k) { return values[k]; }
};

using TimeSeries = BasicTimeSeries<double>;
using ComplexSeries = BasicTimeSeries<cplx>;

template <class T>
using DenseMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// Side length of the delay matrix for a series of `length` samples.
inline std::size_t td_size(std::size_t length) { return (length - 1) / 2 + 1; }

// Throws InvalidSeries when the series is too short or holds NaN/Inf.
template <class T>
void validate_series(const BasicTimeSeries<T>& series);

// L x L Hankel matrix stored through its 2L-1 generating samples.
template <class T>
class TDMatrix {
 public:
  TDMatrix() = default;
  TDMatrix(std::vector<T> generator, std::size_t source_length)
      : gen_(std::move(generator)), source_length_(source_length),
        L_((gen_.size() + 1) / 2) {}

  std::size_t size() const { return L_; }
  std::size_t source_length() const { return source_length_; }
  const std::vector<T>& generator() const { return gen_; }

  T operator()(std::size_t m, std::size_t n) const { return gen_[m + n]; }

  DenseMatrix<T> dense() const {
    DenseMatrix<T> out(L_, L_);
    for (std::size_t n = 0; n < L_; ++n)
      for (std::size_t m = 0; m < L_; ++m) out(m, n) = gen_[m + n];
    return out;
  }

 private:
  std::vector<T> gen_;
  std::size_t source_length_ = 0;
  std::size_t L_ = 0;
};

// Horizontal stack [M_1 | M_2 | ... | M_s] of equally sized delay matrices.
template <class T>
class TDTensor {
 public:
  TDTensor() = default;
  explicit TDTensor(std::vector<TDMatrix<T>> blocks) : blocks_(std::move(blocks)) {}

  std::size_t rows() const { return blocks_.empty() ? 0 : blocks_.front().size(); }
  std::size_t cols() const { return rows() * blocks_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<TDMatrix<T>>& blocks() const { return blocks_; }
  const TDMatrix<T>& block(std::size_t b) const { return blocks_[b]; }

  DenseMatrix<T> stacked() const {
    const std::size_t L = rows();
    DenseMatrix<T> out(L, cols());
    for (std::size_t b = 0; b < blocks_.size(); ++b) out.middleCols(b * L, L) = blocks_[b].dense();
    return out;
  }

 private:
  std::vector<TDMatrix<T>> blocks_;
};

template <class T>
TDMatrix<T> build_td_matrix(const BasicTimeSeries<T>& series);

template <class T>
TDTensor<T> build_td_tensor(const std::vector<BasicTimeSeries<T>>& series_list);

std::pair<TimeSeries, TimeSeries> split_complex(const ComplexSeries& series);

ComplexSeries to_complex(const TimeSeries& series);

// Text I/O. Two columns (t, value) read as real, three (t, re, im) as complex.
// Delimiters may be commas, tabs or spaces; '#' starts a comment; a single
// non-numeric header line is skipped.
struct SeriesFile {
  bool is_complex = false;
  TimeSeries real;
  ComplexSeries complex;
};

SeriesFile read_series(std::istream& in, const std::string& source = "<stream>");
SeriesFile read_series_file(const std::string& path);

void write_series(std::ostream& out, const TimeSeries& series);
void write_series(std::ostream& out, const ComplexSeries& series);
void write_series_file(const std::string& path, const TimeSeries& series);
void write_series_file(const std::string& path, const ComplexSeries& series);

// Shortest round-trip decimal rendering used by every text writer.
std::string format_double(double value);

}  // namespace delaydim
