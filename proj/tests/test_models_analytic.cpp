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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "delaydim/errors.hpp"
#include "delaydim/models_analytic.hpp"
#include "delaydim/rank.hpp"
#include "oracles.hpp"

using namespace delaydim;

TEST_CASE("jc series with an empty field is a single cosine") {
  JCConfig cfg;
  cfg.nbar = 0.0;
  cfg.lambda = 1.3;
  cfg.samples = 400;
  auto s = jc_inversion_series(cfg);
  for (std::size_t k = 0; k < s.size(); ++k)
    CHECK(s[k] == doctest::Approx(std::cos(1.3 * 0.1 * k)).epsilon(1e-14));
  CHECK(misc_epsilon(s, 1e-8).R == 2);
}

TEST_CASE("jc series at t = 0 sums the geometric weights") {
  JCConfig cfg;
  cfg.nbar = 1.0;
  cfg.weight_tol = 1e-12;
  cfg.samples = 2;
  auto s = jc_inversion_series(cfg);
  CHECK(std::abs(s[0] - 2.0) < 1e-12 / 0.5);
  cfg.normalized = true;
  CHECK(jc_inversion_series(cfg)[0] == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("jc truncation tail") {
  JCConfig a;
  a.nbar = 3.0;
  a.weight_tol = 1e-6;
  a.samples = 300;
  JCConfig b = a;
  b.weight_tol = 1e-12;
  const double w = 0.75;
  CHECK(jc_term_count(3.0, 1e-12) > jc_term_count(3.0, 1e-6));
  auto sa = jc_inversion_series(a);
  auto sb = jc_inversion_series(b);
  for (std::size_t k = 0; k < sa.size(); ++k)
    CHECK(std::abs(sa[k] - sb[k]) < a.weight_tol / (1.0 - w));
  // oracle: the retained count is the first N with w^{N+1} < tol
  const std::size_t n = jc_term_count(3.0, 1e-6);
  CHECK(std::pow(w, static_cast<double>(n)) < 1e-6);
  CHECK(std::pow(w, static_cast<double>(n - 1)) >= 1e-6);
  CHECK(jc_term_count(0.0, 1e-15) == 1);
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, jc_term_count(-1.0, 1e-15));
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, jc_term_count(1.0, 1.0));
}

TEST_CASE("jc complexity grows with the thermal occupation") {
  JCConfig cfg;
  cfg.samples = 5000;
  cfg.nbar = 0.5;
  auto low = misc_epsilon(jc_inversion_series(cfg), 1e-4);
  cfg.nbar = 2.0;
  auto high = misc_epsilon(jc_inversion_series(cfg), 1e-4);
  CHECK(high.misc > low.misc);
}

TEST_CASE("jc lower bound evaluation") {
  CHECK(jc_misc_lower_bound(std::log(4.0), 1e-2) == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));
  // oracle: direct evaluation of f
  const double e = 0.25;
  const double f = (1 - e) / (std::abs(1 - 2 * e) * std::sqrt(1 - e * e));
  CHECK(f == doctest::Approx(1.5492).epsilon(1e-4));
  CHECK(jc_misc_lower_bound(std::log(4.0), 0.999) == 1.0);
  CHECK(jc_misc_lower_bound(5.0, 0.9) == 1.0);
  CHECK_ERROR_CODE(ErrorCode::SingularBound, jc_misc_lower_bound(std::log(2.0), 1e-3));
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, jc_misc_lower_bound(0.0, 1e-3));
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, jc_misc_lower_bound(1.0, 0.0));
  CHECK(nbar_to_beta_hw(1.0 / 3.0) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("jc lower bound is non-increasing in epsilon") {
  for (double nbar : {0.25, 0.5, 1.5, 2.0, 3.0, 4.0}) {
    const double x = nbar_to_beta_hw(nbar);
    double prev = INFINITY;
    for (double eps : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 0.5}) {
      const double b = jc_misc_lower_bound(x, eps);
      CHECK(b <= prev);
      prev = b;
    }
  }
}

TEST_CASE("transient limits") {
  TransientConfig cfg;
  cfg.mu_dot_v = 0.37;
  cfg.sigma = 0.05;
  cfg.T = 2.0;
  auto s = rabi_erf_series(cfg, {cfg.T - 20 * cfg.sigma, cfg.T, cfg.T + 20 * cfg.sigma});
  CHECK(std::abs(s[0] + 1.0) < 1e-12);
  CHECK(std::abs(s[2] + std::cos(4 * 0.37)) < 1e-12);
  CHECK(s[1] == doctest::Approx(-std::cos(2 * 0.37)));

  TransientConfig zero = cfg;
  zero.mu_dot_v = 0.0;
  auto flat = rabi_erf_series(zero, uniform_grid(0.0, 5.0, 101));
  for (double v : flat.values) CHECK(v == -1.0);
  CHECK(misc_epsilon(flat, 1e-4).R == 1);

  zero.sigma = 0.0;
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, rabi_erf_series(zero, {0.0, 1.0}));
}

TEST_CASE("uniform grid") {
  auto g = uniform_grid(0.0, 5.0, 11);
  CHECK(g.size() == 11);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(5.0));
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, uniform_grid(0.0, 1.0, 1));
}

TEST_CASE("haar unitaries") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    auto u = haar_unitary(rng);
    CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() < 1e-13);
  }
}

TEST_CASE("haar |<0|U|0>|^2 is uniform (Kolmogorov-Smirnov)") {
  std::mt19937_64 rng(99);
  const std::size_t n = 100000;
  std::vector<double> p(n);
  for (auto& x : p) x = std::norm(haar_unitary(rng)(0, 0));
  std::sort(p.begin(), p.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - p[i]));
    d = std::max(d, std::abs(p[i] - static_cast<double>(i) / n));
  }
  // critical value of the one-sample KS statistic at p = 0.01
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("random unitary qubit series") {
  auto s = random_unitary_qubit_series(500, 42);
  REQUIRE(s[0].size() == 500);
  CHECK(s[0][0] == 0.0);
  CHECK(s[1][0] == 0.0);
  CHECK(s[2][0] == -1.0);
  for (std::size_t k = 0; k < 500; ++k)
    CHECK(std::abs(s[0][k] * s[0][k] + s[1][k] * s[1][k] + s[2][k] * s[2][k] - 1.0) < 1e-12);
  auto again = random_unitary_qubit_series(500, 42);
  CHECK(again[2].values == s[2].values);
  auto other = random_unitary_qubit_series(500, 43);
  CHECK(other[2].values != s[2].values);
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, random_unitary_qubit_series(0, 1));
}

TEST_CASE("random unitary sequences give full-rank delay matrices") {
  auto s = random_unitary_qubit_series(2000, 7);
  for (const auto& pauli : s) {
    auto spec = singular_spectrum(build_td_matrix(pauli));
    REQUIRE(spec.count() == 1000);
    CHECK(numerical_rank(spec, 1e-4) == 1000);
    // Delta_r reaches 1e-4 a few ranks short of L, so the flag stays clear
    auto rep = misc_epsilon(pauli, 1e-4);
    CHECK(rep.R >= 990);
    CHECK(rep.saturated == (rep.R == rep.L));
  }
}
