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

#include <array>
#include <cstdint>
#include <random>

#include "delaydim/series.hpp"

namespace delaydim {

// Thermal Jaynes-Cummings inversion sampled at t_k = t0 + k*dt.
struct JCConfig {
  double nbar = 0.0;
  double lambda = 1.0;
  double t0 = 0.0;
  double dt = 0.1;
  std::size_t samples = 5000;
  double weight_tol = 1e-15;
  bool normalized = false;
};

// Number of retained photon-number terms (N + 1).
std::size_t jc_term_count(double nbar, double weight_tol);

// sum_n w^n cos(lambda t sqrt(n+1)), w = nbar/(1+nbar); times (1-w) when
// normalized.
TimeSeries jc_inversion_series(const JCConfig& config);

// beta*hbar*omega of a thermal mode with mean occupation nbar.
double nbar_to_beta_hw(double nbar);

double jc_misc_lower_bound(double beta_hw, double epsilon);

// Two-level atom driven by one Gaussian pulse centred at T.
struct TransientConfig {
  double mu_dot_v = 0.0;
  double sigma = 1.0;
  double T = 0.0;
  double omega0 = 0.0;
  double hbar = 1.0;
};

// -cos((2 mu.v / hbar) [1 + erf((t - T) / (sqrt(2) sigma))]) on the grid.
TimeSeries rabi_erf_series(const TransientConfig& config, const std::vector<double>& t_grid);

std::vector<double> uniform_grid(double t0, double t1, std::size_t samples);

constexpr double kHbarEvPs = 6.582119569e-4;

// Haar-distributed U(2) element: QR of a complex Ginibre matrix with the
// diagonal phases of R moved into Q.
Eigen::Matrix2cd haar_unitary(std::mt19937_64& rng);

// Pauli expectations (x, y, z) after k = 0..steps-1 random gates applied to
// |0>, with sigma_z = |1><1| - |0><0|.
std::array<TimeSeries, 3> random_unitary_qubit_series(std::size_t steps, std::uint64_t seed);

}  // namespace delaydim
