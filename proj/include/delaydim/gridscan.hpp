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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "delaydim/heom.hpp"
#include "delaydim/rank.hpp"
#include "delaydim/series.hpp"

namespace delaydim {

// Complex t2 series on a rectangular (nu1, nu3) grid. Axes ascending; cell
// (i, j) lives at i * nu3.size() + j.
struct GridSeriesSet {
  std::vector<double> nu1;
  std::vector<double> nu3;
  std::vector<double> t2;
  std::vector<ComplexSeries> cells;

  std::size_t index(std::size_t i, std::size_t j) const { return i * nu3.size() + j; }
  const ComplexSeries& cell(std::size_t i, std::size_t j) const { return cells[index(i, j)]; }
};

// Long CSV: one row per (nu1, nu3, t2) with columns re, im. A header naming
// the columns is optional; without it the order nu1,nu3,t2,re,im is assumed.
GridSeriesSet ingest_grid(std::istream& in, const std::string& source = "<stream>");
GridSeriesSet ingest_grid(const std::string& path);

void write_grid(std::ostream& out, const GridSeriesSet& grid);

// Test grid: cell (i, j) holds 1 + amplitude * exp((i w_i - g_j) k) with
// w_i = 0.2 + 0.05 i and g_j = 0.01 + 0.002 j. Rows j in [band_begin,
// band_end) get complex white noise of standard deviation noise_sigma per part.
struct SyntheticGridConfig {
  std::size_t n_nu1 = 8;
  std::size_t n_nu3 = 8;
  std::size_t samples = 146;
  double dt = 1.0;
  double amplitude = 0.08;
  double noise_sigma = 0.8;
  std::size_t band_begin = 3;
  std::size_t band_end = 5;
  std::uint64_t seed = 1;
};

GridSeriesSet synthetic_grid(const SyntheticGridConfig& config);

enum class UseParts { Real, Imag, Both };
UseParts parse_parts(const std::string& name);
const char* to_string(UseParts parts);

struct HeatCell {
  double x = 0.0;
  double y = 0.0;
  bool ok = false;
  std::string error;
  std::size_t R = 0;
  double misc = 0.0;
  bool saturated = false;
};

struct HeatSummary {
  std::size_t ok_cells = 0;
  std::size_t failed_cells = 0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

struct HeatMap {
  std::string x_name = "nu1";
  std::string y_name = "nu3";
  std::vector<double> x;
  std::vector<double> y;
  double epsilon = 0.0;
  std::vector<HeatCell> cells;  // row-major over (x, y)

  HeatSummary summary() const;
};

// Cells are processed in `order` when given (a permutation of cell indices);
// results are always stored by cell index.
HeatMap heatmap_misc(const GridSeriesSet& grid, double epsilon, UseParts parts,
                     std::size_t workers = 1, const std::vector<std::size_t>* order = nullptr);

// Spin-boson scan over gamma x kT laid out as a heat map (x = gamma, y = beta).
HeatMap heatmap_spin_boson(const std::vector<double>& gammas, const std::vector<double>& kTs,
                           double zeta, SpinBosonProcess process, const HierarchyConfig& config,
                           double epsilon, std::size_t workers = 1);

void write_heatmap(std::ostream& out, const HeatMap& map);

double median(std::vector<double> values);

}  // namespace delaydim
