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
#include <numbers>

#include <Eigen/Eigenvalues>

#include "delaydim/errors.hpp"
#include "delaydim/pumpprobe.hpp"
#include "oracles.hpp"

using namespace delaydim;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double max_abs(const std::vector<double>& a) {
  double d = 0.0;
  for (double x : a) d = std::max(d, std::abs(x));
  return d;
}

Eigen::VectorXd eig_cm(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  return es.eigenvalues().unaryExpr([](double w) { return units::rad_per_fs_to_cm(w); });
}

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(units::cm_to_rad_per_fs(1.0) == doctest::Approx(2 * std::numbers::pi * 2.99792458e-5));
  CHECK(units::rad_per_fs_to_cm(units::cm_to_rad_per_fs(956.2)) == doctest::Approx(956.2));
}

TEST_CASE("dimer defaults") {
  DimerParams p;
  CHECK(p.eps1_cm == 15300.0);
  CHECK(p.eps2_cm == 16200.0);
  CHECK(p.kappa_cm == -162.0);
  CHECK(p.omega1_cm == 800.0);
  CHECK(p.omega2_cm == 1500.0);
  CHECK(p.g1 == 0.1);
  CHECK(p.g2 == 0.15);
  PulsePair pp;
  CHECK(pp.sigma_fs == 16.48);
  CHECK(pp.eta == 5e-4);
}

TEST_CASE("frenkel-holstein dimensions and manifolds") {
  for (int n = 0; n <= 3; ++n) {
    DimerParams p;
    p.n_phonon = n;
    auto fh = build_fh_hamiltonian(p);
    const std::size_t q = static_cast<std::size_t>((n + 1) * (n + 1));
    CHECK(fh.dim() == 4 * q);
    CHECK(fh.gsm.size() == q);
    CHECK(fh.sem.size() == 2 * q);
    CHECK(fh.dem.size() == q);
    CHECK((fh.H - fh.H.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (auto i : fh.gsm) CHECK(fh.excitation(static_cast<Eigen::Index>(i)) == 0.0);
    for (auto i : fh.sem) CHECK(fh.excitation(static_cast<Eigen::Index>(i)) == 1.0);
    for (auto i : fh.dem) CHECK(fh.excitation(static_cast<Eigen::Index>(i)) == 2.0);
  }
  DimerParams bad;
  bad.n_phonon = -1;
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, build_fh_hamiltonian(bad));
}

TEST_CASE("single-exciton gap without phonons") {
  DimerParams p;
  auto fh = build_fh_hamiltonian(p);
  REQUIRE(fh.dim() == 4);
  Eigen::MatrixXd sem(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      sem(i, j) = fh.H(static_cast<Eigen::Index>(fh.sem[i]), static_cast<Eigen::Index>(fh.sem[j]));
  const double zpe = 0.5 * (p.omega1_cm + p.omega2_cm);
  const Eigen::VectorXd e = eig_cm(sem);
  // oracle: closed-form 2x2 eigenvalues
  const double gap = std::sqrt(900.0 * 900.0 + 4.0 * 162.0 * 162.0);
  CHECK(gap == doctest::Approx(956.54).epsilon(1e-5));
  CHECK(e(1) - e(0) == doctest::Approx(gap).epsilon(1e-10));
  CHECK(e(0) - zpe == doctest::Approx(15750.0 - 0.5 * gap).epsilon(1e-10));
  auto ex = exciton_energies_cm(p);
  CHECK(ex[1] - ex[0] == doctest::Approx(gap).epsilon(1e-12));
}

TEST_CASE("decoupled spectrum is a tensor sum") {
  DimerParams p;
  p.g1 = p.g2 = 0.0;
  p.n_phonon = 2;
  auto fh = build_fh_hamiltonian(p);
  const auto ex = exciton_energies_cm(p);
  std::vector<double> expect;
  for (double el : {0.0, ex[0], ex[1], p.eps1_cm + p.eps2_cm})
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b)
        expect.push_back(el + (a + 0.5) * p.omega1_cm + (b + 0.5) * p.omega2_cm);
  std::sort(expect.begin(), expect.end());
  const Eigen::VectorXd e = eig_cm(fh.H);
  REQUIRE(static_cast<std::size_t>(e.size()) == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(e(static_cast<Eigen::Index>(i)) == doctest::Approx(expect[i]).epsilon(1e-11));
}

TEST_CASE("sem dimension column") {
  CHECK(sem_dimension(0) == 2);
  CHECK(sem_dimension(1) == 4);
  CHECK(sem_dimension(2) == 9);
  CHECK(sem_dimension(3) == 16);
  CHECK(sem_dimension(4) == 25);
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, sem_dimension(5));
}

TEST_CASE("reference table values") {
  const double e1[5] = {1.41, 1.73, 2.82, 8.48, 11.74};
  const double e4[5] = {1.73, 3.74, 6.40, 13.30, 21.61};
  for (int n = 0; n <= 4; ++n) {
    CHECK(table1_reference(n).misc_1e1 == e1[n]);
    CHECK(table1_reference(n).misc_1e4 == e4[n]);
    CHECK(table1_reference(n).misc_1e4 < sem_dimension(n));
  }
  CHECK(kTable1Tolerance == 0.15);
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, table1_reference(-1));
}

TEST_CASE("molecule orientation keeps the 40 degree dipole angle") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto o = random_orientation(rng);
    CHECK((o.rotation.transpose() * o.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(o.rotation.determinant() == doctest::Approx(1.0));
    CHECK(o.mu1().norm() == doctest::Approx(1.0));
    CHECK(o.mu2().norm() == doctest::Approx(1.0));
    CHECK(std::acos(o.mu1().dot(o.mu2())) * 180.0 / std::numbers::pi == doctest::Approx(40.0));
  }
  CHECK(ensemble_orientation(3, 7).rotation == ensemble_orientation(3, 7).rotation);
  CHECK(ensemble_orientation(3, 7).rotation != ensemble_orientation(3, 8).rotation);
}

TEST_CASE("experiment tags and carriers") {
  CHECK(parse_experiment("-+") == Experiment::MP);
  CHECK(parse_experiment("pp") == Experiment::PP);
  CHECK(std::string(to_string(Experiment::PM)) == "pm");
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, parse_experiment("x"));
  PumpProbeModel m(DimerParams{}, PulsePair{});
  const auto ex = exciton_energies_cm(DimerParams{});
  CHECK(m.carrier(Experiment::MP, false) == doctest::Approx(units::cm_to_rad_per_fs(ex[0])));
  CHECK(m.carrier(Experiment::MP, true) == doctest::Approx(units::cm_to_rad_per_fs(ex[1])));
  CHECK(m.carrier(Experiment::PM, true) == doctest::Approx(units::cm_to_rad_per_fs(ex[0])));
}

TEST_CASE("window propagator is unitary and step-converged") {
  DimerParams p;
  p.n_phonon = 1;
  PumpProbeModel m(p, PulsePair{});
  auto o = ensemble_orientation(1, 0);
  auto U = m.window_propagator(o, Eigen::Vector3d::UnitX(), m.carrier(Experiment::MM, false), 0.3);
  const Eigen::Index d = U.rows();
  CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-8);
  PumpProbeOptions tight;
  tight.abs_tol = 1e-14;
  tight.rel_tol = 1e-12;
  PumpProbeModel mt(p, PulsePair{}, tight);
  auto Ut = mt.window_propagator(o, Eigen::Vector3d::UnitX(), m.carrier(Experiment::MM, false), 0.3);
  CHECK((U - Ut).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("rotating frame matches lab frame") {
  PumpProbeModel m(DimerParams{}, PulsePair{});
  auto o = ensemble_orientation(2, 0);
  const double w = m.carrier(Experiment::PP, false);
  auto rot = m.window_propagator(o, Eigen::Vector3d::UnitX(), w, 0.0, Frame::Rotating);
  auto lab = m.window_propagator(o, Eigen::Vector3d::UnitX(), w, 0.0, Frame::Lab);
  CHECK((rot - lab).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("probe phase shift by pi is parity conjugation") {
  DimerParams p;
  p.n_phonon = 1;
  PumpProbeModel m(p, PulsePair{});
  auto o = ensemble_orientation(4, 1);
  const double w = m.carrier(Experiment::MP, true);
  auto U0 = m.window_propagator(o, Eigen::Vector3d::UnitX(), w, 0.2);
  auto U1 = m.window_propagator(o, Eigen::Vector3d::UnitX(), w, 0.2 + std::numbers::pi);
  Eigen::VectorXd pi(U0.rows());
  for (Eigen::Index i = 0; i < pi.size(); ++i)
    pi(i) = m.hamiltonian().excitation(i) == 1.0 ? -1.0 : 1.0;
  CHECK((U1 - pi.asDiagonal() * U0 * pi.asDiagonal()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("no field, no signal") {
  PulsePair pp;
  pp.eta = 0.0;
  auto s = PumpProbeModel(DimerParams{}, pp)
               .signal(ensemble_orientation(1, 0), Experiment::MM, uniform_delays(500, 1000, 20));
  CHECK(max_abs(s) < 1e-12);
}

TEST_CASE("global phase does not change the signal") {
  const auto d = uniform_delays(500, 6098, 60);
  const auto o = ensemble_orientation(9, 3);
  PulsePair a, b;
  b.phase_pump = b.phase_probe = 1.1;
  auto sa = PumpProbeModel(DimerParams{}, a).signal(o, Experiment::MP, d);
  auto sb = PumpProbeModel(DimerParams{}, b).signal(o, Experiment::MP, d);
  CHECK(max_abs_diff(sa, sb) < 1e-10 * max_abs(sa));
}

TEST_CASE("weak-field scaling") {
  const auto d = uniform_delays(500, 6098, 80);
  const auto o = ensemble_orientation(1, 0);
  PulsePair a, b;
  a.eta = 5e-5;
  b.eta = 2.5e-5;
  auto sa = PumpProbeModel(DimerParams{}, a).signal(o, Experiment::MP, d);
  auto sb = PumpProbeModel(DimerParams{}, b).signal(o, Experiment::MP, d);
  // least-squares ratio of the eta^-2 normalized traces
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    num += sa[i] * sb[i];
    den += sa[i] * sa[i];
  }
  CHECK(num / den == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("rigid rotation of dipoles and fields") {
  const auto d = uniform_delays(500, 3000, 40);
  std::mt19937_64 rng(77);
  const auto o = random_orientation(rng);
  const auto r = random_orientation(rng).rotation;
  PulsePair a;
  a.pol_probe = Eigen::Vector3d(0.0, 1.0, 1.0).normalized();
  PulsePair b = a;
  b.pol_pump = r * a.pol_pump;
  b.pol_probe = r * a.pol_probe;
  MoleculeOrientation ob = o;
  ob.rotation = r * o.rotation;
  DimerParams p;
  p.n_phonon = 1;
  for (auto e : kAllExperiments) {
    auto sa = PumpProbeModel(p, a).signal(o, e, d);
    auto sb = PumpProbeModel(p, b).signal(ob, e, d);
    CHECK(max_abs_diff(sa, sb) < 1e-8 * max_abs(sa));
  }
}

TEST_CASE("all-experiment pass equals per-experiment signals") {
  DimerParams p;
  p.n_phonon = 1;
  PumpProbeModel m(p, PulsePair{});
  const auto d = uniform_delays(500, 2000, 30);
  const auto o = ensemble_orientation(6, 2);
  auto all = m.signals(o, d);
  for (std::size_t e = 0; e < 4; ++e) CHECK(all[e] == m.signal(o, kAllExperiments[e], d));
}

TEST_CASE("single molecule ensemble and determinism") {
  const auto d = uniform_delays(500, 6098, 50);
  PumpProbeModel m(DimerParams{}, PulsePair{});
  auto one = ensemble_signal(DimerParams{}, PulsePair{}, d, 1, Experiment::PM, 11);
  CHECK(one.values == m.signal(ensemble_orientation(11, 0), Experiment::PM, d));
  CHECK(one.dt == doctest::Approx(d[1] - d[0]));
  CHECK(one.label == "pm");

  auto w1 = ensemble_signals(DimerParams{}, PulsePair{}, d, 6, 3, 1);
  auto w3 = ensemble_signals(DimerParams{}, PulsePair{}, d, 6, 3, 3);
  for (std::size_t e = 0; e < 4; ++e) {
    CHECK(w1[e].values == w3[e].values);
    CHECK(w1[e].values ==
          ensemble_signal(DimerParams{}, PulsePair{}, d, 6, kAllExperiments[e], 3, 2).values);
  }
}

TEST_CASE("ensemble self-averaging across seeds") {
  const std::size_t n = 300;
  const auto d = uniform_delays(500, 6098, 200);
  PumpProbeModel m(DimerParams{}, PulsePair{});
  auto a = ensemble_signal(DimerParams{}, PulsePair{}, d, n, Experiment::MP, 1, 2);
  auto b = ensemble_signal(DimerParams{}, PulsePair{}, d, n, Experiment::MP, 2, 2);
  // oracle: per-molecule sample variance gives the expected seed-to-seed spread
  double expected = 0.0, mean_err = 0.0;
  for (std::uint64_t seed : {1u, 2u}) {
    std::vector<double> sum(d.size(), 0.0), sq(d.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      auto s = m.signal(ensemble_orientation(seed, k), Experiment::MP, d);
      for (std::size_t t = 0; t < d.size(); ++t) {
        sum[t] += s[t];
        sq[t] += s[t] * s[t];
      }
    }
    const auto& ens = seed == 1 ? a : b;
    for (std::size_t t = 0; t < d.size(); ++t) {
      const double mu = sum[t] / n;
      expected += (sq[t] / n - mu * mu) / (n - 1);
      mean_err = std::max(mean_err, std::abs(mu - ens[t]) / std::abs(mu));
    }
  }
  CHECK(mean_err < 1e-12);
  double diff = 0.0;
  for (std::size_t t = 0; t < d.size(); ++t) diff += (a[t] - b[t]) * (a[t] - b[t]);
  CHECK(std::sqrt(diff / expected) < 2.0);
}

TEST_CASE("four-step cycle removes the GSM-DEM block only") {
  DimerParams p;
  p.n_phonon = 1;
  PumpProbeOptions two;
  two.phase_steps = 2;
  const auto o = ensemble_orientation(8, 0);
  auto o2 = PumpProbeModel(p, PulsePair{}, two).probe_observable(o, true);
  auto o4 = PumpProbeModel(p, PulsePair{}).probe_observable(o, true);
  const auto& ex = build_fh_hamiltonian(p).excitation;
  double gd = 0.0;
  for (Eigen::Index i = 0; i < o2.rows(); ++i)
    for (Eigen::Index j = 0; j < o2.cols(); ++j) {
      const double dn = std::abs(ex(i) - ex(j));
      if (dn == 2.0) {
        gd = std::max(gd, std::abs(o2(i, j)));
        CHECK(std::abs(o4(i, j)) < 1e-14);
      } else {
        CHECK(std::abs(o4(i, j) - o2(i, j)) < 1e-14);
      }
      if (dn == 1.0) CHECK(std::abs(o2(i, j)) < 1e-14);
    }
  CHECK(gd > 0.0);
  PumpProbeOptions three;
  three.phase_steps = 3;
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, PumpProbeModel(p, PulsePair{}, three));
}

TEST_CASE("dominant oscillation sits at the exciton gap") {
  const std::size_t n = 200;
  const auto d = uniform_delays(500, 6098, n);
  auto s = PumpProbeModel(DimerParams{}, PulsePair{}).signal(ensemble_orientation(1, 0),
                                                              Experiment::MP, d);
  double mean = 0.0;
  for (double v : s) mean += v / n;
  // oracle: plain DFT magnitude, peak over positive bins
  const double dt = d[1] - d[0];
  std::size_t peak = 1;
  double best = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t)
      acc += (s[t] - mean) * std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * k * t / n));
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      peak = k;
    }
  }
  // 2x2 gap in cycles per fs, folded into the sampled band
  const double gap_cm = std::sqrt(900.0 * 900.0 + 4.0 * 162.0 * 162.0);
  const double f = gap_cm * units::kSpeedOfLightCmPerFs;
  const double fs = 1.0 / dt;
  const double alias = std::abs(f - std::round(f / fs) * fs);
  const double bin = 1.0 / (n * dt);
  CHECK(std::abs(peak * bin - alias) <= bin);
}

TEST_CASE("input validation") {
  CHECK_ERROR_CODE(ErrorCode::InvalidInput,
                   PumpProbeModel(DimerParams{}, PulsePair{}).signal(ensemble_orientation(1, 0),
                                                                     Experiment::MM, {100.0}));
  PulsePair bad;
  bad.sigma_fs = 0.0;
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, PumpProbeModel(DimerParams{}, bad));
  bad = PulsePair{};
  bad.eta = -1.0;
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, PumpProbeModel(DimerParams{}, bad));
  CHECK_ERROR_CODE(ErrorCode::InvalidInput,
                   ensemble_signal(DimerParams{}, PulsePair{}, {500.0, 600.0}, 0, Experiment::MM, 1));
  CHECK_ERROR_CODE(ErrorCode::InvalidInput, uniform_delays(500.0, 600.0, 1));
}

TEST_CASE("table pipeline at toy scale") {
  Table1Options opt;
  opt.n_molecules = 3;
  opt.n_delays = 120;
  auto run = table1_pipeline(0, {1e-1, 1e-4}, opt);
  REQUIRE(run.rows.size() == 2);
  for (const auto& row : run.rows) {
    CHECK(row.sem_dimension == 2);
    CHECK(row.best_mask != 0u);
    CHECK(row.report.misc <= 2.0);
  }
  CHECK(run.rows[0].report.misc <= run.rows[1].report.misc);
  CHECK(run.signals[1].label == "mp");
  CHECK(run.signals[0].size() == 120);
}
