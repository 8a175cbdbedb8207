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

#include "hankel_ops.hpp"

#include <unsupported/Eigen/FFT>

namespace delaydim::detail {

namespace {

Eigen::FFT<double>& local_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

template <class T>
T take(const cplx& z);
template <>
double take<double>(const cplx& z) { return z.real(); }
template <>
cplx take<cplx>(const cplx& z) { return z; }

template <class T>
cplx conj_of(const T& x) { return std::conj(cplx(x)); }

}  // namespace

std::size_t fft_size(std::size_t min_length) {
  std::size_t n = 1;
  while (n < min_length) n <<= 1;
  return n;
}

std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t N = fft_size(out_len);
  std::vector<cplx> pa(N, cplx(0.0)), pb(N, cplx(0.0)), fa, fb, out;
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  auto& fft = local_fft();
  fft.fwd(fa, pa);
  fft.fwd(fb, pb);
  for (std::size_t i = 0; i < N; ++i) fa[i] *= fb[i];
  fft.inv(out, fa);
  out.resize(out_len);
  return out;
}

template <class T>
HankelOperator<T>::HankelOperator(const TDTensor<T>& tensor) : L_(tensor.rows()) {
  N_ = fft_size(3 * L_ - 2);
  auto& fft = local_fft();
  for (const auto& block : tensor.blocks()) {
    std::vector<cplx> padded(N_, cplx(0.0)), spec;
    const auto& g = block.generator();
    for (std::size_t k = 0; k < g.size(); ++k) padded[k] = cplx(g[k]);
    fft.fwd(spec, padded);
    spectra_.push_back(std::move(spec));
  }
}

template <class T>
DenseMatrix<T> HankelOperator<T>::apply(const DenseMatrix<T>& X) const {
  const std::size_t s = spectra_.size();
  DenseMatrix<T> Y(L_, X.cols());
  auto& fft = local_fft();
  std::vector<cplx> padded(N_), spec, acc(N_), out;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    std::fill(acc.begin(), acc.end(), cplx(0.0));
    for (std::size_t b = 0; b < s; ++b) {
      std::fill(padded.begin(), padded.end(), cplx(0.0));
      for (std::size_t n = 0; n < L_; ++n) padded[L_ - 1 - n] = cplx(X(b * L_ + n, j));
      fft.fwd(spec, padded);
      for (std::size_t i = 0; i < N_; ++i) acc[i] += spectra_[b][i] * spec[i];
    }
    fft.inv(out, acc);
    for (std::size_t m = 0; m < L_; ++m) Y(m, j) = take<T>(out[m + L_ - 1]);
  }
  return Y;
}

template <class T>
DenseMatrix<T> HankelOperator<T>::apply_adjoint(const DenseMatrix<T>& Yin) const {
  const std::size_t s = spectra_.size();
  DenseMatrix<T> X(L_ * s, Yin.cols());
  auto& fft = local_fft();
  std::vector<cplx> padded(N_), spec, prod(N_), out;
  for (Eigen::Index j = 0; j < Yin.cols(); ++j) {
    std::fill(padded.begin(), padded.end(), cplx(0.0));
    for (std::size_t m = 0; m < L_; ++m) padded[L_ - 1 - m] = conj_of(Yin(m, j));
    fft.fwd(spec, padded);
    for (std::size_t b = 0; b < s; ++b) {
      for (std::size_t i = 0; i < N_; ++i) prod[i] = spectra_[b][i] * spec[i];
      fft.inv(out, prod);
      for (std::size_t n = 0; n < L_; ++n) X(b * L_ + n, j) = take<T>(std::conj(out[n + L_ - 1]));
    }
  }
  return X;
}

template class HankelOperator<double>;
template class HankelOperator<cplx>;

}  // namespace delaydim::detail
