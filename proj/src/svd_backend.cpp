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

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/QR>
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "delaydim/errors.hpp"
#include "delaydim/rank.hpp"
#include "hankel_ops.hpp"

namespace delaydim {

namespace {

template <class T>
bool all_finite(const DenseMatrix<T>& m) {
  if constexpr (std::is_same_v<T, double>) {
    return m.allFinite();
  } else {
    return m.real().allFinite() && m.imag().allFinite();
  }
}

template <class T>
bool generators_finite(const TDTensor<T>& tensor) {
  for (const auto& b : tensor.blocks())
    for (const auto& x : b.generator())
      if (!std::isfinite(std::abs(x))) return false;
  return true;
}

template <class T>
SingularSpectrum<T> dense_spectrum(const DenseMatrix<T>& matrix);

template <class T>
DenseMatrix<T> gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  DenseMatrix<T> out(rows, cols);
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      if constexpr (std::is_same_v<T, double>) {
        out(i, j) = nd(rng);
      } else {
        double re = nd(rng);
        double im = nd(rng);
        out(i, j) = cplx(re, im) * std::sqrt(0.5);
      }
    }
  return out;
}

template <class T>
DenseMatrix<T> orthonormalize(const DenseMatrix<T>& Y) {
  Eigen::HouseholderQR<DenseMatrix<T>> qr(Y);
  return qr.householderQ() * DenseMatrix<T>::Identity(Y.rows(), Y.cols());
}

template <class T>
SingularSpectrum<T> randomized(const TDTensor<T>& tensor, const SvdOptions& opt, bool& fell_short) {
  detail::HankelOperator<T> op(tensor);
  const std::size_t L = op.rows();
  std::mt19937_64 rng(opt.seed);
  std::size_t k = opt.initial_sketch;
  SingularSpectrum<T> out;
  fell_short = false;
  for (;;) {
    const std::size_t ell = std::min(k + opt.oversample, L);
    DenseMatrix<T> Q = orthonormalize<T>(op.apply(gaussian<T>(op.cols(), ell, rng)));
    for (int it = 0; it < opt.power_iterations; ++it) {
      DenseMatrix<T> Z = orthonormalize<T>(op.apply_adjoint(Q));
      Q = orthonormalize<T>(op.apply(Z));
    }
    DenseMatrix<T> Bh = op.apply_adjoint(Q);
    const SingularSpectrum<T> small = dense_spectrum<T>(Bh.adjoint());

    const int probes = 10;
    DenseMatrix<T> W = op.apply(gaussian<T>(op.cols(), probes, rng));
    W -= Q * (Q.adjoint() * W);
    double worst = 0.0;
    for (int j = 0; j < probes; ++j) worst = std::max(worst, W.col(j).norm());
    const double bound = 10.0 * std::sqrt(2.0 / std::numbers::pi) * worst;
    const double sigma1 = small.count() ? small.sigmas(0) : 0.0;

    out.sigmas = small.sigmas;
    out.U = Q * small.U;
    out.V = small.V;
    out.rows = L;
    out.cols = op.cols();
    out.truncated = true;
    out.tail_bound = bound;
    if (bound <= opt.tail_tolerance * sigma1 || sigma1 == 0.0) return out;
    if (2 * (2 * k + opt.oversample) > L) {
      fell_short = true;
      return out;
    }
    k *= 2;
  }
}

// Thin SVD through LAPACK: gesdd first, gesvd if divide and conquer does not
// converge.
lapack_int lapack_svd(bool dc, DenseMatrix<double>& a, Eigen::VectorXd& s, DenseMatrix<double>& u,
                      DenseMatrix<double>& vt) {
  const lapack_int m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  if (dc)
    return LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, a.data(), m, s.data(), u.data(), m,
                          vt.data(), static_cast<lapack_int>(vt.rows()));
  std::vector<double> superb(static_cast<std::size_t>(std::min(m, n)));
  return LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, a.data(), m, s.data(), u.data(), m,
                        vt.data(), static_cast<lapack_int>(vt.rows()), superb.data());
}

lapack_int lapack_svd(bool dc, DenseMatrix<cplx>& a, Eigen::VectorXd& s, DenseMatrix<cplx>& u,
                      DenseMatrix<cplx>& vt) {
  const lapack_int m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  auto* pa = reinterpret_cast<lapack_complex_double*>(a.data());
  auto* pu = reinterpret_cast<lapack_complex_double*>(u.data());
  auto* pv = reinterpret_cast<lapack_complex_double*>(vt.data());
  if (dc)
    return LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, pa, m, s.data(), pu, m, pv,
                          static_cast<lapack_int>(vt.rows()));
  std::vector<double> superb(static_cast<std::size_t>(std::min(m, n)));
  return LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, pa, m, s.data(), pu, m, pv,
                        static_cast<lapack_int>(vt.rows()), superb.data());
}

template <class T>
SingularSpectrum<T> dense_spectrum(const DenseMatrix<T>& matrix) {
  SingularSpectrum<T> out;
  out.rows = static_cast<std::size_t>(matrix.rows());
  out.cols = static_cast<std::size_t>(matrix.cols());
  if (matrix.size() == 0) return out;
  const Eigen::Index k = std::min(matrix.rows(), matrix.cols());
  for (bool dc : {true, false}) {
    DenseMatrix<T> a = matrix;
    Eigen::VectorXd s(k);
    DenseMatrix<T> u(matrix.rows(), k), vt(k, matrix.cols());
    if (lapack_svd(dc, a, s, u, vt) != 0) continue;
    if (!s.allFinite() || !all_finite(u) || !all_finite(vt)) continue;
    out.sigmas = s;
    out.U = std::move(u);
    out.V = vt.adjoint();
    return out;
  }
  throw Error(ErrorCode::NumericalError, "singular value decomposition did not converge");
}

}  // namespace

template <class T>
SingularSpectrum<T> singular_spectrum(const DenseMatrix<T>& matrix) {
  if (!all_finite(matrix)) throw Error(ErrorCode::NumericalError, "matrix has non-finite entries");
  return dense_spectrum<T>(matrix);
}

template <class T>
SingularSpectrum<T> singular_spectrum(const TDTensor<T>& tensor, const SvdOptions& options) {
  if (tensor.block_count() == 0) throw Error(ErrorCode::InvalidInput, "empty tensor");
  if (!generators_finite(tensor))
    throw Error(ErrorCode::NumericalError, "delay matrix has non-finite entries");
  const std::size_t L = tensor.rows();
  if (options.force_dense || L <= options.dense_limit) return dense_spectrum<T>(tensor.stacked());
  bool fell_short = false;
  auto spec = randomized<T>(tensor, options, fell_short);
  if (fell_short && L <= options.dense_fallback_limit) return dense_spectrum<T>(tensor.stacked());
  return spec;
}

template <class T>
SingularSpectrum<T> singular_spectrum(const TDMatrix<T>& matrix, const SvdOptions& options) {
  return singular_spectrum<T>(TDTensor<T>({matrix}), options);
}

template <class T>
std::size_t numerical_rank(const SingularSpectrum<T>& spectrum, double rel_tol) {
  if (spectrum.count() == 0 || spectrum.sigmas(0) == 0.0) return 0;
  const double cut = rel_tol * spectrum.sigmas(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < spectrum.sigmas.size(); ++i)
    if (spectrum.sigmas(i) > cut) ++r;
  return r;
}

template SingularSpectrum<double> singular_spectrum(const DenseMatrix<double>&);
template SingularSpectrum<cplx> singular_spectrum(const DenseMatrix<cplx>&);
template SingularSpectrum<double> singular_spectrum(const TDTensor<double>&, const SvdOptions&);
template SingularSpectrum<cplx> singular_spectrum(const TDTensor<cplx>&, const SvdOptions&);
template SingularSpectrum<double> singular_spectrum(const TDMatrix<double>&, const SvdOptions&);
template SingularSpectrum<cplx> singular_spectrum(const TDMatrix<cplx>&, const SvdOptions&);
template std::size_t numerical_rank(const SingularSpectrum<double>&, double);
template std::size_t numerical_rank(const SingularSpectrum<cplx>&, double);

}  // namespace delaydim
