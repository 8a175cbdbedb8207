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

// Test-side reference computations. Nothing here calls into the library's
// decomposition code.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

inline Eigen::MatrixXcd hankel(const std::vector<cplx>& a) {
  const std::size_t L = (a.size() - 1) / 2 + 1;
  Eigen::MatrixXcd m(L, L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) m(i, j) = a[i + j];
  return m;
}

inline Eigen::MatrixXd hankel(const std::vector<double>& a) {
  const std::size_t L = (a.size() - 1) / 2 + 1;
  Eigen::MatrixXd m(L, L);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) m(i, j) = a[i + j];
  return m;
}

template <class M>
Eigen::VectorXd singular_values(const M& m) {
  Eigen::JacobiSVD<M> svd(m);
  return svd.singularValues();
}

template <class M>
std::size_t rank(const M& m, double rel) {
  auto s = singular_values(m);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

// Brute-force Delta_r: truncated SVD, explicit anti-diagonal averaging.
inline double delta_r(const std::vector<double>& a, std::size_t r) {
  Eigen::MatrixXd m = hankel(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index L = m.rows();
  Eigen::MatrixXd mr = Eigen::MatrixXd::Zero(L, L);
  for (std::size_t k = 0; k < r; ++k)
    mr += svd.singularValues()(k) * svd.matrixU().col(k) * svd.matrixV().col(k).transpose();
  double num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k <= 2 * L - 2; ++k) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < L; ++i) {
      const Eigen::Index j = k - i;
      if (j >= 0 && j < L) {
        sum += mr(i, j);
        ++count;
      }
    }
    const double ar = sum / count;
    num += (ar - a[k]) * (ar - a[k]);
    den += a[k] * a[k];
  }
  return std::sqrt(num / den);
}

inline std::size_t misc_rank(const std::vector<double>& a, double eps) {
  const std::size_t L = (a.size() - 1) / 2 + 1;
  for (std::size_t r = 1; r <= L; ++r)
    if (delta_r(a, r) < eps) return r;
  return L;
}

// Random CPTP map on C^d from normalized Ginibre Kraus operators, its
// column-stacked transfer matrix, and A(k) = Tr(O P^k rho).
inline std::vector<double> markov_series(int d, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  auto ginibre = [&](int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
  };
  const int kraus = d;
  std::vector<Eigen::MatrixXcd> K;
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < kraus; ++i) {
    K.push_back(ginibre(d, d));
    S += K.back().adjoint() * K.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
  Eigen::MatrixXcd s_inv_half = es.eigenvectors() *
                                es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                es.eigenvectors().adjoint();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (auto& k : K) {
    k = k * s_inv_half;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e)
            P(a + d * b, c + d * e) += k(a, c) * std::conj(k(b, e));
  }
  Eigen::MatrixXcd x = ginibre(d, d);
  Eigen::MatrixXcd rho = x * x.adjoint();
  rho /= rho.trace();
  Eigen::MatrixXcd o = ginibre(d, d);
  o = 0.5 * (o + o.adjoint()).eval();
  Eigen::VectorXcd v(d * d);
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) v(a + d * b) = rho(a, b);
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) {
    cplx tr = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) tr += o(b, a) * v(a + d * b);
    out.push_back(tr.real());
    v = P * v;
  }
  return out;
}

}  // namespace oracle

#define CHECK_ERROR_CODE(error_code, ...)        \
  do {                                            \
    bool thrown_ = false;                         \
    try {                                         \
      (void)(__VA_ARGS__);                               \
    } catch (const delaydim::Error& e_) {         \
      thrown_ = true;                             \
      CHECK_MESSAGE(e_.code() == (error_code), e_.what()); \
    }                                             \
    CHECK_MESSAGE(thrown_, #__VA_ARGS__ " did not throw"); \
  } while (0)
