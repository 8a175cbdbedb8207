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

#include "delaydim/rank.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include "delaydim/errors.hpp"
#include "hankel_ops.hpp"

namespace delaydim {

namespace {

template <class T>
T narrow(const cplx& z) {
  if constexpr (std::is_same_v<T, double>) {
    return z.real();
  } else {
    return z;
  }
}

// Accumulates rank-one terms sigma u v^H of each block and reads the series
// back after every addition.
template <class T>
class Accumulator {
 public:
  Accumulator(const SingularSpectrum<T>& spec, Readout readout)
      : spec_(spec), readout_(readout), L_(spec.rows), blocks_(spec.rows ? spec.cols / spec.rows : 0),
        n_(2 * L_ - 1), N_(detail::fft_size(n_)) {
    if (blocks_ * L_ != spec.cols)
      throw Error(ErrorCode::ShapeMismatch, "spectrum is not a stack of square blocks");
    sums_.assign(blocks_, std::vector<cplx>(n_, cplx(0.0)));
    counts_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k)
      counts_[k] = static_cast<double>(std::min(k, n_ - 1 - k) + 1);
  }

  std::size_t blocks() const { return blocks_; }
  std::size_t length() const { return n_; }

  void add(std::size_t i) {
    const double s = spec_.sigmas(static_cast<Eigen::Index>(i));
    const auto u = spec_.U.col(static_cast<Eigen::Index>(i));
    const auto v = spec_.V.col(static_cast<Eigen::Index>(i));
    if (readout_ == Readout::Boundary) {
      for (std::size_t b = 0; b < blocks_; ++b) {
        auto& acc = sums_[b];
        const std::size_t off = b * L_;
        const cplx u0 = cplx(u(0)) * s;
        for (std::size_t k = 0; k < L_; ++k) acc[k] += u0 * std::conj(cplx(v(off + k)));
        const cplx vl = std::conj(cplx(v(off + L_ - 1))) * s;
        for (std::size_t k = L_; k < n_; ++k) acc[k] += cplx(u(k - L_ + 1)) * vl;
      }
      return;
    }
    std::vector<cplx> pu(N_, cplx(0.0)), pv(N_), fu, fv, out;
    for (std::size_t m = 0; m < L_; ++m) pu[m] = cplx(u(m));
    fft_.fwd(fu, pu);
    for (std::size_t b = 0; b < blocks_; ++b) {
      std::fill(pv.begin(), pv.end(), cplx(0.0));
      for (std::size_t m = 0; m < L_; ++m) pv[m] = std::conj(cplx(v(b * L_ + m)));
      fft_.fwd(fv, pv);
      for (std::size_t k = 0; k < N_; ++k) fv[k] *= fu[k];
      fft_.inv(out, fv);
      auto& acc = sums_[b];
      for (std::size_t k = 0; k < n_; ++k) acc[k] += s * out[k];
    }
  }

  T value(std::size_t b, std::size_t k) const {
    const cplx z = readout_ == Readout::Hankelize ? sums_[b][k] / counts_[k] : sums_[b][k];
    return narrow<T>(z);
  }

 private:
  const SingularSpectrum<T>& spec_;
  Readout readout_;
  std::size_t L_, blocks_, n_, N_;
  std::vector<std::vector<cplx>> sums_;
  std::vector<double> counts_;
  Eigen::FFT<double> fft_;
};

void check_epsilon(double epsilon) {
  if (!(epsilon >= kMinEpsilon && epsilon <= 1.0))
    throw Error(ErrorCode::InvalidInput,
                "epsilon must lie in [1e-14, 1], got " + format_double(epsilon));
}

void fill_bounds(MiscReport& rep) {
  rep.misc = std::sqrt(static_cast<double>(rep.R));
  auto b = dimension_bounds(rep.R);
  rep.lower_bound_d = b.lower;
  rep.upper_bound_d = b.upper;
  rep.min_d0 = b.min_d0;
  rep.saturated = rep.R == rep.L;
}

template <class T>
std::vector<MiscReport> misc_core(const TDTensor<T>& tensor, std::vector<double> epsilons,
                                  const MiscOptions& options) {
  for (double e : epsilons) check_epsilon(e);
  const std::size_t L = tensor.rows();
  const std::size_t n = 2 * L - 1;

  double signal2 = 0.0;
  for (const auto& blk : tensor.blocks())
    for (const auto& x : blk.generator()) signal2 += std::norm(x);
  if (!(signal2 > 0.0)) throw Error(ErrorCode::DegenerateSignal, "signal has zero norm");
  const double signal_norm = std::sqrt(signal2);
  const double eps_min = *std::min_element(epsilons.begin(), epsilons.end());

  SvdOptions svd = options.svd;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto spec = singular_spectrum<T>(tensor, svd);
    Accumulator<T> acc(spec, options.readout);
    std::vector<double> profile;
    bool reached = false;
    for (std::size_t r = 1; r <= spec.count(); ++r) {
      acc.add(r - 1);
      double res2 = 0.0;
      for (std::size_t b = 0; b < tensor.block_count(); ++b) {
        const auto& g = tensor.block(b).generator();
        for (std::size_t k = 0; k < n; ++k) res2 += std::norm(acc.value(b, k) - g[k]);
      }
      const double delta = std::sqrt(res2) / signal_norm;
      profile.push_back(delta);
      if (delta < eps_min) reached = true;
      if (reached && !options.full_profile) break;
    }
    if (!reached && spec.truncated) {
      if (L > svd.dense_fallback_limit || svd.force_dense)
        throw Error(ErrorCode::NumericalError,
                    "truncated decomposition cannot resolve epsilon " + format_double(eps_min));
      svd.force_dense = true;
      continue;
    }
    std::vector<MiscReport> out;
    for (double e : epsilons) {
      MiscReport rep;
      rep.epsilon = e;
      rep.L = L;
      rep.blocks = tensor.block_count();
      rep.R = L;
      for (std::size_t r = 0; r < profile.size(); ++r)
        if (profile[r] < e) {
          rep.R = r + 1;
          break;
        }
      if (options.full_profile)
        rep.delta_profile = profile;
      else
        rep.delta_profile.assign(profile.begin(),
                                 profile.begin() + std::min(rep.R, profile.size()));
      fill_bounds(rep);
      out.push_back(std::move(rep));
    }
    return out;
  }
  throw Error(ErrorCode::NumericalError, "decomposition failed");
}

template <class T>
MiscReport misc_one(const std::vector<BasicTimeSeries<T>>& series, double epsilon,
                    const MiscOptions& options) {
  return misc_core<T>(build_td_tensor(series), {epsilon}, options).front();
}

}  // namespace

template <class T>
std::vector<BasicTimeSeries<T>> reconstruct_blocks(const SingularSpectrum<T>& spectrum,
                                                   std::size_t r, Readout readout) {
  if (r < 1 || r > spectrum.count())
    throw Error(ErrorCode::InvalidRank, "rank " + std::to_string(r) + " outside [1, " +
                                            std::to_string(spectrum.count()) + "]");
  Accumulator<T> acc(spectrum, readout);
  for (std::size_t i = 0; i < r; ++i) acc.add(i);
  std::vector<BasicTimeSeries<T>> out(acc.blocks());
  for (std::size_t b = 0; b < acc.blocks(); ++b) {
    out[b].values.resize(acc.length());
    for (std::size_t k = 0; k < acc.length(); ++k) out[b].values[k] = acc.value(b, k);
  }
  return out;
}

template <class T>
BasicTimeSeries<T> reconstruct_series(const SingularSpectrum<T>& spectrum, std::size_t r,
                                      Readout readout) {
  if (spectrum.rows != spectrum.cols)
    throw Error(ErrorCode::ShapeMismatch, "reconstruct_series needs a square delay matrix");
  return reconstruct_blocks(spectrum, r, readout).front();
}

template <class T>
double rms_perturbation(const BasicTimeSeries<T>& original, const BasicTimeSeries<T>& reconstructed) {
  const std::size_t n = reconstructed.size();
  if (n == 0 || n > original.size())
    throw Error(ErrorCode::ShapeMismatch, "reconstruction length " + std::to_string(n) +
                                              " does not fit original length " +
                                              std::to_string(original.size()));
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    num += std::norm(reconstructed[k] - original[k]);
    den += std::norm(original[k]);
  }
  if (!(den > 0.0)) throw Error(ErrorCode::DegenerateSignal, "original series has zero norm");
  return std::sqrt(num / den);
}

MiscReport misc_epsilon(const TimeSeries& series, double epsilon, const MiscOptions& options) {
  return misc_one<double>({series}, epsilon, options);
}

MiscReport misc_epsilon(const ComplexSeries& series, double epsilon, const MiscOptions& options) {
  return misc_one<cplx>({series}, epsilon, options);
}

MiscReport misc_epsilon(const std::vector<TimeSeries>& series, double epsilon,
                        const MiscOptions& options) {
  return misc_one<double>(series, epsilon, options);
}

MiscReport misc_epsilon(const std::vector<ComplexSeries>& series, double epsilon,
                        const MiscOptions& options) {
  return misc_one<cplx>(series, epsilon, options);
}

std::vector<MiscReport> misc_epsilon_sweep(const std::vector<TimeSeries>& series,
                                           const std::vector<double>& epsilons,
                                           const MiscOptions& options) {
  if (epsilons.empty()) throw Error(ErrorCode::InvalidInput, "no epsilon values given");
  return misc_core<double>(build_td_tensor(series), epsilons, options);
}

SubsetScan misc_subset_scan(const std::vector<TimeSeries>& series, double epsilon,
                            const MiscOptions& options) {
  const std::size_t s = series.size();
  if (s == 0) throw Error(ErrorCode::InvalidInput, "empty series list");
  if (s > kMaxSubsetSeries)
    throw Error(ErrorCode::InvalidInput, "subset scan limited to " +
                                             std::to_string(kMaxSubsetSeries) + " series");
  SubsetScan scan;
  for (unsigned mask = 1; mask < (1u << s); ++mask) {
    std::vector<TimeSeries> subset;
    for (std::size_t i = 0; i < s; ++i)
      if (mask & (1u << i)) subset.push_back(series[i]);
    auto rep = misc_epsilon(subset, epsilon, options);
    if (scan.masks.empty() || rep.misc > scan.best.misc) {
      scan.best = rep;
      scan.best_mask = mask;
    }
    scan.masks.push_back(mask);
    scan.reports.push_back(std::move(rep));
  }
  return scan;
}

DimensionBounds dimension_bounds(std::size_t R) {
  if (R < 1) throw Error(ErrorCode::InvalidRank, "rank must be positive");
  DimensionBounds b;
  b.lower = std::sqrt(static_cast<double>(R));
  b.upper = R + 2;
  std::size_t d0 = 1;
  while (d0 * d0 + d0 - 1 < R) ++d0;
  b.min_d0 = d0;
  return b;
}

long long min_parameter_count(long long d) {
  if (d < 1) throw Error(ErrorCode::InvalidInput, "dimension must be positive");
  return 3 * d * d + d - 3;
}

std::string to_json(const MiscReport& report, int indent) {
  nlohmann::ordered_json j;
  j["epsilon"] = report.epsilon;
  j["R"] = report.R;
  j["misc"] = report.misc;
  j["lower_bound_d"] = report.lower_bound_d;
  j["upper_bound_d"] = report.upper_bound_d;
  j["min_d0"] = report.min_d0;
  j["delta_profile"] = report.delta_profile;
  j["saturated"] = report.saturated;
  j["L"] = report.L;
  j["blocks"] = report.blocks;
  return j.dump(indent);
}

template BasicTimeSeries<double> reconstruct_series(const SingularSpectrum<double>&, std::size_t,
                                                    Readout);
template BasicTimeSeries<cplx> reconstruct_series(const SingularSpectrum<cplx>&, std::size_t,
                                                  Readout);
template std::vector<BasicTimeSeries<double>> reconstruct_blocks(const SingularSpectrum<double>&,
                                                                 std::size_t, Readout);
template std::vector<BasicTimeSeries<cplx>> reconstruct_blocks(const SingularSpectrum<cplx>&,
                                                               std::size_t, Readout);
template double rms_perturbation(const BasicTimeSeries<double>&, const BasicTimeSeries<double>&);
template double rms_perturbation(const BasicTimeSeries<cplx>&, const BasicTimeSeries<cplx>&);

}  // namespace delaydim
