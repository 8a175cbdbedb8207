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

#include "delaydim/models_analytic.hpp"

#include <cmath>

#include "delaydim/errors.hpp"

namespace delaydim {

std::size_t jc_term_count(double nbar, double weight_tol) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar))
    throw Error(ErrorCode::InvalidInput, "nbar must be finite and >= 0");
  if (!(weight_tol > 0.0 && weight_tol < 1.0))
    throw Error(ErrorCode::InvalidInput, "weight_tol must lie in (0, 1)");
  const double w = nbar / (1.0 + nbar);
  std::size_t N = 0;
  double wn1 = w;
  while (!(wn1 < weight_tol)) {
    ++N;
    wn1 *= w;
  }
  return N + 1;
}

TimeSeries jc_inversion_series(const JCConfig& config) {
  if (!(config.dt > 0.0)) throw Error(ErrorCode::InvalidInput, "dt must be positive");
  if (config.samples < 2) throw Error(ErrorCode::InvalidInput, "need at least 2 samples");
  const std::size_t terms = jc_term_count(config.nbar, config.weight_tol);
  const double w = config.nbar / (1.0 + config.nbar);
  TimeSeries out{std::vector<double>(config.samples, 0.0), config.dt, "jc"};
  double wn = 1.0;
  for (std::size_t n = 0; n < terms; ++n) {
    const double freq = config.lambda * std::sqrt(static_cast<double>(n + 1));
    for (std::size_t k = 0; k < config.samples; ++k) {
      const double t = config.t0 + static_cast<double>(k) * config.dt;
      out.values[k] += wn * std::cos(freq * t);
    }
    wn *= w;
  }
  if (config.normalized)
    for (auto& x : out.values) x *= (1.0 - w);
  return out;
}

double nbar_to_beta_hw(double nbar) {
  if (!(nbar > 0.0)) throw Error(ErrorCode::InvalidInput, "nbar must be positive");
  return std::log1p(1.0 / nbar);
}

double jc_misc_lower_bound(double beta_hw, double epsilon) {
  if (!(beta_hw > 0.0) || !std::isfinite(beta_hw))
    throw Error(ErrorCode::InvalidInput, "beta*hbar*omega must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidInput, "epsilon must lie in (0, 1)");
  const double e = std::exp(-beta_hw);
  const double gap = std::abs(1.0 - 2.0 * e);
  if (gap < 1e-9)
    throw Error(ErrorCode::SingularBound, "bound is singular at exp(-beta*hbar*omega) = 1/2");
  const double f = (1.0 - e) / (gap * std::sqrt(1.0 - e * e));
  const double a = std::max(0.0, std::floor(std::log(f / epsilon) / beta_hw));
  return std::sqrt(2.0 * a + 1.0);
}

TimeSeries rabi_erf_series(const TransientConfig& config, const std::vector<double>& t_grid) {
  if (!(config.sigma > 0.0)) throw Error(ErrorCode::InvalidInput, "sigma must be positive");
  if (!(config.hbar > 0.0)) throw Error(ErrorCode::InvalidInput, "hbar must be positive");
  TimeSeries out;
  out.label = "rabi_erf";
  out.dt = t_grid.size() >= 2 ? t_grid[1] - t_grid[0] : 1.0;
  out.values.reserve(t_grid.size());
  const double area = 2.0 * config.mu_dot_v / config.hbar;
  for (double t : t_grid)
    out.values.push_back(
        -std::cos(area * (1.0 + std::erf((t - config.T) / (std::sqrt(2.0) * config.sigma)))));
  return out;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidInput, "grid needs at least 2 samples");
  std::vector<double> t(samples);
  const double h = (t1 - t0) / static_cast<double>(samples - 1);
  for (std::size_t k = 0; k < samples; ++k) t[k] = t0 + static_cast<double>(k) * h;
  return t;
}

Eigen::Matrix2cd haar_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::Matrix2cd Z;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      double re = nd(rng);
      double im = nd(rng);
      Z(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(Z);
  Eigen::Matrix2cd Q = qr.householderQ();
  Eigen::Matrix2cd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) {
    const double a = std::abs(R(i, i));
    const cplx ph = a > 0.0 ? R(i, i) / a : cplx(1.0);
    Q.col(i) *= ph;
  }
  return Q;
}

std::array<TimeSeries, 3> random_unitary_qubit_series(std::size_t steps, std::uint64_t seed) {
  if (steps < 1) throw Error(ErrorCode::InvalidInput, "steps must be >= 1");
  std::mt19937_64 rng(seed);
  std::array<TimeSeries, 3> out;
  const char* names[3] = {"sx", "sy", "sz"};
  for (int a = 0; a < 3; ++a) {
    out[a].label = names[a];
    out[a].values.reserve(steps);
  }
  Eigen::Vector2cd psi(1.0, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    if (k > 0) psi = haar_unitary(rng) * psi;
    const cplx c01 = std::conj(psi(0)) * psi(1);
    out[0].values.push_back(2.0 * c01.real());
    out[1].values.push_back(2.0 * c01.imag());
    out[2].values.push_back(std::norm(psi(1)) - std::norm(psi(0)));
  }
  return out;
}

}  // namespace delaydim
