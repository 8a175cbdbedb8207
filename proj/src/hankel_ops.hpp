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

#include <vector>

#include "delaydim/series.hpp"

namespace delaydim::detail {

std::size_t fft_size(std::size_t min_length);

// Linear convolution a * b, evaluated with FFTs of length >= a+b-1.
std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Stacked Hankel operator [H_1 | ... | H_s] applied through FFT products.
template <class T>
class HankelOperator {
 public:
  explicit HankelOperator(const TDTensor<T>& tensor);

  std::size_t rows() const { return L_; }
  std::size_t cols() const { return L_ * spectra_.size(); }

  // A X, X is cols() x k.
  DenseMatrix<T> apply(const DenseMatrix<T>& X) const;
  // A^H Y, Y is rows() x k.
  DenseMatrix<T> apply_adjoint(const DenseMatrix<T>& Y) const;

 private:
  std::size_t L_ = 0;
  std::size_t N_ = 0;
  std::vector<std::vector<cplx>> spectra_;
};

}  // namespace delaydim::detail
