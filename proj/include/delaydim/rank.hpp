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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "delaydim/series.hpp"

namespace delaydim {

struct SvdOptions {
  // Largest L handled by a dense decomposition.
  std::size_t dense_limit = 2048;
  // Randomized sketches that grow past L/2 fall back to dense up to this L.
  std::size_t dense_fallback_limit = 8192;
  // Required a posteriori bound on the discarded tail, relative to sigma_1.
  double tail_tolerance = 1e-12;
  std::size_t initial_sketch = 48;
  std::size_t oversample = 16;
  int power_iterations = 1;
  std::uint64_t seed = 0x5eed5eedULL;
  bool force_dense = false;
};

// M = U diag(sigmas) V^H. When `truncated` is set only the leading triplets
// are held and `tail_bound` bounds the spectral norm of what was dropped.
template <class T>
struct SingularSpectrum {
  Eigen::VectorXd sigmas;
  DenseMatrix<T> U;
  DenseMatrix<T> V;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool truncated = false;
  double tail_bound = 0.0;

  std::size_t count() const { return static_cast<std::size_t>(sigmas.size()); }
};

template <class T>
SingularSpectrum<T> singular_spectrum(const DenseMatrix<T>& matrix);
template <class T>
SingularSpectrum<T> singular_spectrum(const TDMatrix<T>& matrix, const SvdOptions& options = {});
template <class T>
SingularSpectrum<T> singular_spectrum(const TDTensor<T>& tensor, const SvdOptions& options = {});

// Number of singular values strictly above rel_tol * sigma_1.
template <class T>
std::size_t numerical_rank(const SingularSpectrum<T>& spectrum, double rel_tol);

enum class Readout {
  Hankelize,  // average M_r over each anti-diagonal
  Boundary,   // first row, then last column
};

// Rank-r series recovered from a square delay-matrix spectrum; length 2L-1.
template <class T>
BasicTimeSeries<T> reconstruct_series(const SingularSpectrum<T>& spectrum, std::size_t r,
                                      Readout readout = Readout::Hankelize);

// Same for a stacked tensor spectrum; one series per block.
template <class T>
std::vector<BasicTimeSeries<T>> reconstruct_blocks(const SingularSpectrum<T>& spectrum,
                                                   std::size_t r,
                                                   Readout readout = Readout::Hankelize);

// ||A_r - A||_2 / ||A||_2 over the first reconstructed.size() samples.
template <class T>
double rms_perturbation(const BasicTimeSeries<T>& original,
                        const BasicTimeSeries<T>& reconstructed);

struct MiscOptions {
  bool full_profile = false;
  Readout readout = Readout::Hankelize;
  SvdOptions svd;
};

struct MiscReport {
  double epsilon = 0.0;
  std::size_t R = 0;
  double misc = 0.0;
  std::vector<double> delta_profile;
  double lower_bound_d = 0.0;
  std::size_t upper_bound_d = 0;
  std::size_t min_d0 = 0;
  bool saturated = false;
  std::size_t L = 0;
  std::size_t blocks = 1;
};

constexpr double kMinEpsilon = 1e-14;

MiscReport misc_epsilon(const TimeSeries& series, double epsilon, const MiscOptions& options = {});
MiscReport misc_epsilon(const ComplexSeries& series, double epsilon,
                        const MiscOptions& options = {});
MiscReport misc_epsilon(const std::vector<TimeSeries>& series, double epsilon,
                        const MiscOptions& options = {});
MiscReport misc_epsilon(const std::vector<ComplexSeries>& series, double epsilon,
                        const MiscOptions& options = {});

// MISC for several epsilons from one decomposition. Results follow the
// order of `epsilons`.
std::vector<MiscReport> misc_epsilon_sweep(const std::vector<TimeSeries>& series,
                                           const std::vector<double>& epsilons,
                                           const MiscOptions& options = {});

struct SubsetScan {
  MiscReport best;
  unsigned best_mask = 0;
  std::vector<unsigned> masks;
  std::vector<MiscReport> reports;
};

constexpr std::size_t kMaxSubsetSeries = 8;

// Evaluates every non-empty subset of the signals (bit i of the mask selects
// series i) and keeps the largest MISC; ties go to the smaller mask.
SubsetScan misc_subset_scan(const std::vector<TimeSeries>& series, double epsilon,
                            const MiscOptions& options = {});

struct DimensionBounds {
  double lower = 0.0;
  std::size_t upper = 0;
  std::size_t min_d0 = 0;
};

DimensionBounds dimension_bounds(std::size_t R);

// 3d^2 + d - 3
long long min_parameter_count(long long d);

std::string to_json(const MiscReport& report, int indent = 2);

}  // namespace delaydim
