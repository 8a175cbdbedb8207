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

#include "delaydim/gridscan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <ostream>
#include <sstream>
#include <tuple>

#include "delaydim/errors.hpp"
#include "delaydim/parallel.hpp"
#include "delaydim/textio.hpp"

namespace delaydim {

namespace {

std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t position(const std::vector<double>& axis, double value) {
  return static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), value) - axis.begin());
}

}  // namespace

GridSeriesSet ingest_grid(std::istream& in, const std::string& source) {
  using Key = std::tuple<double, double, double>;
  std::map<Key, cplx> rows;
  int col[5] = {0, 1, 2, 3, 4};
  bool header_done = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(strip_comment(line));
    if (fields.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (fields.size() != 5) throw Error(ErrorCode::ParseError, where + ": expected 5 columns");
    double v[5];
    bool numeric = true;
    for (int i = 0; i < 5 && numeric; ++i) numeric = parse_double(fields[i], v[i]);
    if (!numeric) {
      if (header_done || !rows.empty())
        throw Error(ErrorCode::ParseError, where + ": non-numeric field");
      const char* names[5] = {"nu1", "nu3", "t2", "re", "im"};
      for (int c = 0; c < 5; ++c) {
        auto it = std::find(fields.begin(), fields.end(), names[c]);
        if (it == fields.end())
          throw Error(ErrorCode::ParseError, where + ": header lacks column " + names[c]);
        col[c] = static_cast<int>(it - fields.begin());
      }
      header_done = true;
      continue;
    }
    header_done = true;
    Key key{v[col[0]], v[col[1]], v[col[2]]};
    if (!rows.emplace(key, cplx(v[col[3]], v[col[4]])).second) {
      std::ostringstream msg;
      msg << where << ": duplicate cell (nu1=" << format_double(v[col[0]])
          << ", nu3=" << format_double(v[col[1]]) << ", t2=" << format_double(v[col[2]]) << ")";
      throw Error(ErrorCode::DuplicateCell, msg.str());
    }
  }
  if (rows.empty()) throw Error(ErrorCode::InvalidInput, source + ": no data rows");

  std::vector<double> a, b, c;
  for (const auto& [k, z] : rows) {
    a.push_back(std::get<0>(k));
    b.push_back(std::get<1>(k));
    c.push_back(std::get<2>(k));
  }
  GridSeriesSet g;
  g.nu1 = unique_sorted(a);
  g.nu3 = unique_sorted(b);
  g.t2 = unique_sorted(c);

  const std::size_t n1 = g.nu1.size(), n3 = g.nu3.size(), nt = g.t2.size();
  if (rows.size() != n1 * n3 * nt) {
    std::ostringstream msg;
    msg << source << ": incomplete grid, " << (n1 * n3 * nt - rows.size())
        << " missing (nu1, nu3, t2) rows:";
    std::size_t listed = 0;
    for (std::size_t i = 0; i < n1 && listed < 20; ++i)
      for (std::size_t j = 0; j < n3 && listed < 20; ++j)
        for (std::size_t k = 0; k < nt && listed < 20; ++k)
          if (!rows.count(Key{g.nu1[i], g.nu3[j], g.t2[k]})) {
            msg << " (" << format_double(g.nu1[i]) << ", " << format_double(g.nu3[j]) << ", "
                << format_double(g.t2[k]) << ")";
            ++listed;
          }
    throw Error(ErrorCode::IncompleteGrid, msg.str());
  }
  if (nt < 2) throw Error(ErrorCode::InvalidInput, source + ": need at least 2 t2 samples");
  const double h = (g.t2.back() - g.t2.front()) / static_cast<double>(nt - 1);
  for (std::size_t k = 1; k < nt; ++k) {
    const double step = g.t2[k] - g.t2[k - 1];
    if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw Error(ErrorCode::NonuniformTime, source + ": t2 spacing " + format_double(step) +
                                                  " at t2=" + format_double(g.t2[k]) +
                                                  " differs from mean spacing " + format_double(h));
  }

  g.cells.resize(n1 * n3);
  for (auto& s : g.cells) {
    s.values.assign(nt, cplx(0.0));
    s.dt = h;
  }
  for (const auto& [k, z] : rows) {
    const std::size_t i = position(g.nu1, std::get<0>(k));
    const std::size_t j = position(g.nu3, std::get<1>(k));
    const std::size_t t = position(g.t2, std::get<2>(k));
    g.cells[g.index(i, j)].values[t] = z;
  }
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j)
      g.cells[g.index(i, j)].label = format_double(g.nu1[i]) + "," + format_double(g.nu3[j]);
  return g;
}

GridSeriesSet ingest_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  return ingest_grid(in, path);
}

void write_grid(std::ostream& out, const GridSeriesSet& grid) {
  out << "nu1,nu3,t2,re,im\n";
  for (std::size_t i = 0; i < grid.nu1.size(); ++i)
    for (std::size_t j = 0; j < grid.nu3.size(); ++j) {
      const auto& s = grid.cell(i, j);
      for (std::size_t k = 0; k < grid.t2.size(); ++k)
        out << format_double(grid.nu1[i]) << ',' << format_double(grid.nu3[j]) << ','
            << format_double(grid.t2[k]) << ',' << format_double(s[k].real()) << ','
            << format_double(s[k].imag()) << '\n';
    }
}

GridSeriesSet synthetic_grid(const SyntheticGridConfig& c) {
  if (c.n_nu1 < 1 || c.n_nu3 < 1 || c.samples < 2)
    throw Error(ErrorCode::InvalidInput, "synthetic grid needs at least 1x1 cells and 2 samples");
  if (c.band_begin > c.band_end || c.band_end > c.n_nu3)
    throw Error(ErrorCode::InvalidInput, "noise band outside the nu3 axis");
  GridSeriesSet g;
  for (std::size_t i = 0; i < c.n_nu1; ++i) g.nu1.push_back(static_cast<double>(i));
  for (std::size_t j = 0; j < c.n_nu3; ++j) g.nu3.push_back(static_cast<double>(j));
  for (std::size_t k = 0; k < c.samples; ++k) g.t2.push_back(static_cast<double>(k) * c.dt);
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> noise(0.0, c.noise_sigma);
  g.cells.resize(c.n_nu1 * c.n_nu3);
  for (std::size_t i = 0; i < c.n_nu1; ++i)
    for (std::size_t j = 0; j < c.n_nu3; ++j) {
      auto& s = g.cells[g.index(i, j)];
      s.dt = c.dt;
      s.label = format_double(g.nu1[i]) + "," + format_double(g.nu3[j]);
      const cplx rate(-(0.01 + 0.002 * static_cast<double>(j)), 0.2 + 0.05 * static_cast<double>(i));
      const bool noisy = j >= c.band_begin && j < c.band_end;
      for (std::size_t k = 0; k < c.samples; ++k) {
        cplx z = 1.0 + c.amplitude * std::exp(rate * static_cast<double>(k));
        if (noisy) {
          const double re = noise(rng);
          z += cplx(re, noise(rng));
        }
        s.values.push_back(z);
      }
    }
  return g;
}

UseParts parse_parts(const std::string& name) {
  if (name == "real" || name == "re") return UseParts::Real;
  if (name == "imag" || name == "im") return UseParts::Imag;
  if (name == "both") return UseParts::Both;
  throw Error(ErrorCode::InvalidInput, "unknown parts '" + name + "' (real, imag, both)");
}

const char* to_string(UseParts parts) {
  switch (parts) {
    case UseParts::Real: return "real";
    case UseParts::Imag: return "imag";
    case UseParts::Both: return "both";
  }
  return "?";
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

HeatSummary HeatMap::summary() const {
  HeatSummary s;
  std::vector<double> m;
  for (const auto& c : cells) {
    if (c.ok)
      m.push_back(c.misc);
    else
      ++s.failed_cells;
  }
  s.ok_cells = m.size();
  if (!m.empty()) {
    s.min = *std::min_element(m.begin(), m.end());
    s.max = *std::max_element(m.begin(), m.end());
    s.median = median(m);
  }
  return s;
}

HeatMap heatmap_misc(const GridSeriesSet& grid, double epsilon, UseParts parts,
                     std::size_t workers, const std::vector<std::size_t>* order) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw Error(ErrorCode::InvalidInput, "epsilon must lie in (0, 1]");
  HeatMap map;
  map.x = grid.nu1;
  map.y = grid.nu3;
  map.epsilon = epsilon;
  const std::size_t n = grid.cells.size();
  if (order && order->size() != n)
    throw Error(ErrorCode::ShapeMismatch, "processing order does not cover every cell");
  map.cells.resize(n);
  parallel_for(n, workers, [&](std::size_t slot) {
    const std::size_t idx = order ? (*order)[slot] : slot;
    HeatCell& cell = map.cells[idx];
    cell.x = grid.nu1[idx / grid.nu3.size()];
    cell.y = grid.nu3[idx % grid.nu3.size()];
    try {
      auto [re, im] = split_complex(grid.cells[idx]);
      MiscReport rep;
      switch (parts) {
        case UseParts::Real: rep = misc_epsilon(re, epsilon); break;
        case UseParts::Imag: rep = misc_epsilon(im, epsilon); break;
        case UseParts::Both: rep = misc_epsilon(std::vector<TimeSeries>{re, im}, epsilon); break;
      }
      cell.ok = true;
      cell.R = rep.R;
      cell.misc = rep.misc;
      cell.saturated = rep.saturated;
    } catch (const Error& e) {
      cell.error = std::string(to_string(e.code())) + ": " + e.what();
    }
  });
  return map;
}

HeatMap heatmap_spin_boson(const std::vector<double>& gammas, const std::vector<double>& kTs,
                           double zeta, SpinBosonProcess process, const HierarchyConfig& config,
                           double epsilon, std::size_t workers) {
  std::vector<ScanPoint> grid;
  HeatMap map;
  map.x_name = "gamma";
  map.y_name = "beta";
  map.epsilon = epsilon;
  map.x = gammas;
  for (double kT : kTs) {
    if (!(kT > 0.0)) throw Error(ErrorCode::InvalidInput, "kT must be positive");
    map.y.push_back(1.0 / kT);
  }
  for (double g : gammas)
    for (double b : map.y) grid.push_back({g, b});
  auto results = spin_boson_scan(grid, zeta, process, config, epsilon, workers);
  for (const auto& r : results) {
    HeatCell c;
    c.x = r.point.gamma;
    c.y = r.point.beta;
    c.ok = r.ok;
    c.error = r.error;
    c.R = r.report.R;
    c.misc = r.report.misc;
    c.saturated = r.report.saturated;
    map.cells.push_back(c);
  }
  return map;
}

void write_heatmap(std::ostream& out, const HeatMap& map) {
  out << map.x_name << ',' << map.y_name << ",R,misc,saturated\n";
  for (const auto& c : map.cells) {
    out << format_double(c.x) << ',' << format_double(c.y) << ',';
    if (c.ok)
      out << c.R << ',' << format_double(c.misc) << ',' << (c.saturated ? 1 : 0) << '\n';
    else
      out << "NA,NA,NA\n";
  }
  const auto s = map.summary();
  out << "# epsilon=" << format_double(map.epsilon) << " cells=" << map.cells.size()
      << " ok=" << s.ok_cells << " failed=" << s.failed_cells << '\n';
  out << "# misc_min=" << format_double(s.min) << " misc_max=" << format_double(s.max)
      << " misc_median=" << format_double(s.median) << '\n';
  for (const auto& c : map.cells)
    if (!c.ok)
      out << "# failed " << format_double(c.x) << ',' << format_double(c.y) << ' ' << c.error
          << '\n';
}

}  // namespace delaydim
