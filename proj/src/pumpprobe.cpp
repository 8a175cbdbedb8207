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

#include "delaydim/pumpprobe.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <boost/numeric/odeint.hpp>

#include "delaydim/errors.hpp"
#include "delaydim/parallel.hpp"

namespace delaydim {

namespace units {

double cm_to_rad_per_fs(double wavenumber_cm) {
  return 2.0 * std::numbers::pi * kSpeedOfLightCmPerFs * wavenumber_cm;
}

double rad_per_fs_to_cm(double omega) {
  return omega / (2.0 * std::numbers::pi * kSpeedOfLightCmPerFs);
}

}  // namespace units

namespace {

const cplx I(0.0, 1.0);

Eigen::MatrixXd ladder_lower(int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) d(k - 1, k) = std::sqrt(static_cast<double>(k));
  return d;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

FHHamiltonian build_fh_hamiltonian(const DimerParams& p) {
  if (p.n_phonon < 0) throw Error(ErrorCode::InvalidInput, "n_phonon must be >= 0");
  const int n = p.n_phonon;
  const int nph = (n + 1) * (n + 1);
  const Eigen::MatrixXd Iph1 = Eigen::MatrixXd::Identity(n + 1, n + 1);
  const Eigen::MatrixXd Iph = Eigen::MatrixXd::Identity(nph, nph);
  const Eigen::MatrixXd I4 = Eigen::MatrixXd::Identity(4, 4);

  // Electronic operators on {gg, eg, ge, ee}.
  Eigen::MatrixXd c1d = Eigen::MatrixXd::Zero(4, 4), c2d = Eigen::MatrixXd::Zero(4, 4);
  c1d(1, 0) = 1.0;
  c1d(3, 2) = 1.0;
  c2d(2, 0) = 1.0;
  c2d(3, 1) = 1.0;
  const Eigen::MatrixXd n1 = c1d * c1d.transpose();
  const Eigen::MatrixXd n2 = c2d * c2d.transpose();
  const Eigen::MatrixXd hop = c1d * c2d.transpose() + c2d * c1d.transpose();

  const Eigen::MatrixXd d = ladder_lower(n);
  const Eigen::MatrixXd d1 = kron(d, Iph1), d2 = kron(Iph1, d);
  const Eigen::MatrixXd x1 = d1 + d1.transpose(), x2 = d2 + d2.transpose();
  const Eigen::MatrixXd num1 = d1.transpose() * d1, num2 = d2.transpose() * d2;

  const double e1 = units::cm_to_rad_per_fs(p.eps1_cm);
  const double e2 = units::cm_to_rad_per_fs(p.eps2_cm);
  const double k = units::cm_to_rad_per_fs(p.kappa_cm);
  const double w1 = units::cm_to_rad_per_fs(p.omega1_cm);
  const double w2 = units::cm_to_rad_per_fs(p.omega2_cm);

  FHHamiltonian fh;
  fh.n_phonon = n;
  const Eigen::MatrixXd h_exc = e1 * n1 + e2 * n2 + k * hop;
  const Eigen::MatrixXd h_ph = w1 * (num1 + 0.5 * Iph) + w2 * (num2 + 0.5 * Iph);
  fh.H = kron(h_exc, Iph) + kron(I4, h_ph) - w1 * p.g1 * kron(n1, x1) - w2 * p.g2 * kron(n2, x2);
  fh.raise1 = kron(c1d, Iph);
  fh.raise2 = kron(c2d, Iph);
  fh.excitation = kron(n1 + n2, Iph).diagonal();
  for (int e = 0; e < 4; ++e)
    for (int q = 0; q < nph; ++q) {
      const std::size_t idx = static_cast<std::size_t>(e * nph + q);
      if (e == 0)
        fh.gsm.push_back(idx);
      else if (e == 3)
        fh.dem.push_back(idx);
      else
        fh.sem.push_back(idx);
    }
  return fh;
}

std::array<double, 2> exciton_energies_cm(const DimerParams& p) {
  const double mean = 0.5 * (p.eps1_cm + p.eps2_cm);
  const double half = 0.5 * std::sqrt((p.eps1_cm - p.eps2_cm) * (p.eps1_cm - p.eps2_cm) +
                                      4.0 * p.kappa_cm * p.kappa_cm);
  return {mean - half, mean + half};
}

int sem_dimension(int n_phonon) {
  static const int table[5] = {2, 4, 9, 16, 25};
  if (n_phonon < 0 || n_phonon > 4)
    throw Error(ErrorCode::InvalidInput, "SEM dimension tabulated for n_phonon 0..4 only");
  return table[n_phonon];
}

Table1Reference table1_reference(int n_phonon) {
  static const Table1Reference table[5] = {
      {1.41, 1.73}, {1.73, 3.74}, {2.82, 6.40}, {8.48, 13.30}, {11.74, 21.61}};
  if (n_phonon < 0 || n_phonon > 4)
    throw Error(ErrorCode::InvalidInput, "reference values tabulated for n_phonon 0..4 only");
  return table[n_phonon];
}

Eigen::Vector3d MoleculeOrientation::mu1() const { return rotation * Eigen::Vector3d::UnitZ(); }

Eigen::Vector3d MoleculeOrientation::mu2() const {
  const double a = angle_deg * std::numbers::pi / 180.0;
  return rotation * Eigen::Vector3d(std::sin(a), 0.0, std::cos(a));
}

MoleculeOrientation random_orientation(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  double q[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : q) {
      x = nd(rng);
      norm += x * x;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  Eigen::Quaterniond quat(q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm);
  MoleculeOrientation o;
  o.rotation = quat.toRotationMatrix();
  return o;
}

MoleculeOrientation ensemble_orientation(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  std::mt19937_64 rng(seq);
  return random_orientation(rng);
}

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::MM: return "mm";
    case Experiment::MP: return "mp";
    case Experiment::PM: return "pm";
    case Experiment::PP: return "pp";
  }
  return "?";
}

Experiment parse_experiment(const std::string& tag) {
  if (tag == "mm" || tag == "--") return Experiment::MM;
  if (tag == "mp" || tag == "-+") return Experiment::MP;
  if (tag == "pm" || tag == "+-") return Experiment::PM;
  if (tag == "pp" || tag == "++") return Experiment::PP;
  throw Error(ErrorCode::InvalidInput, "unknown experiment '" + tag + "' (mm, mp, pm, pp)");
}

namespace {

bool upper_pump(Experiment e) { return e == Experiment::PM || e == Experiment::PP; }
bool upper_probe(Experiment e) { return e == Experiment::MP || e == Experiment::PP; }

using OdeState = std::vector<cplx>;

struct PulseSpec {
  double carrier = 0.0;
  double phase = 0.0;
  double area = 0.0;  // eta * mu / hbar, dimensionless
  double sigma = 1.0;
};

// Evolves the columns of X0 through one pulse window.
Eigen::MatrixXcd propagate_window(const FHHamiltonian& fh, double e_ref,
                                  const Eigen::MatrixXd& dplus, const PulseSpec& pulse, double W,
                                  Frame frame, const Eigen::MatrixXcd& X0,
                                  const PumpProbeOptions& opt) {
  const Eigen::Index d = X0.rows(), k = X0.cols();
  Eigen::MatrixXd Hs = fh.H - e_ref * Eigen::MatrixXd::Identity(d, d);
  if (frame == Frame::Rotating) Hs -= pulse.carrier * fh.excitation.asDiagonal().toDenseMatrix();
  const Eigen::MatrixXcd Hc = Hs.cast<cplx>();
  const Eigen::MatrixXcd Dp = dplus.cast<cplx>();
  const Eigen::MatrixXcd Dm = Dp.adjoint();
  const double norm = pulse.area / std::sqrt(2.0 * std::numbers::pi * pulse.sigma * pulse.sigma);

  Eigen::MatrixXcd Hbuf(d, d);
  auto rhs = [&](const OdeState& x, OdeState& dxdt, double s) {
    const double env = norm * std::exp(-s * s / (2.0 * pulse.sigma * pulse.sigma));
    cplx ph = std::exp(I * pulse.phase);
    if (frame == Frame::Lab) ph *= std::exp(-I * pulse.carrier * s);
    Hbuf = Hc - env * (ph * Dp + std::conj(ph) * Dm);
    Eigen::Map<const Eigen::MatrixXcd> X(x.data(), d, k);
    Eigen::Map<Eigen::MatrixXcd> Y(dxdt.data(), d, k);
    Y.noalias() = -I * (Hbuf * X);
  };

  OdeState state(static_cast<std::size_t>(d * k));
  Eigen::VectorXcd frame_phase = Eigen::VectorXcd::Ones(d);
  if (frame == Frame::Rotating)
    for (Eigen::Index i = 0; i < d; ++i)
      frame_phase(i) = std::exp(-I * pulse.carrier * fh.excitation(i) * W);
  Eigen::Map<Eigen::MatrixXcd>(state.data(), d, k) = frame_phase.asDiagonal() * X0;
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<OdeState>>(opt.abs_tol, opt.rel_tol);
  ode::integrate_adaptive(stepper, rhs, state, -W, W, 0.1);
  Eigen::MatrixXcd X = frame_phase.asDiagonal() * Eigen::Map<Eigen::MatrixXcd>(state.data(), d, k);
  return X;
}

}  // namespace

PumpProbeModel::PumpProbeModel(const DimerParams& params, const PulsePair& pulses,
                               const PumpProbeOptions& options)
    : params_(params), pulses_(pulses), options_(options), fh_(build_fh_hamiltonian(params)) {
  if (!(pulses.sigma_fs > 0.0)) throw Error(ErrorCode::InvalidInput, "sigma_p must be positive");
  if (!(pulses.eta >= 0.0)) throw Error(ErrorCode::InvalidInput, "eta must be >= 0");
  if (options.phase_steps != 2 && options.phase_steps != 4)
    throw Error(ErrorCode::InvalidInput, "phase_steps must be 2 or 4");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fh_.H);
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
  ground_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(fh_.dim()));
  ground_(0) = 1.0;
  exciton_ = exciton_energies_cm(params);
}

double PumpProbeModel::window_half_width() const { return options_.window_sigmas * pulses_.sigma_fs; }

double PumpProbeModel::carrier(Experiment e, bool probe) const {
  const bool upper = probe ? upper_probe(e) : upper_pump(e);
  return units::cm_to_rad_per_fs(exciton_[upper ? 1 : 0]);
}

Eigen::MatrixXcd PumpProbeModel::propagate(const MoleculeOrientation& orientation,
                                           const Eigen::Vector3d& polarization, double carrier,
                                           double phase, Frame frame,
                                           const Eigen::MatrixXcd& start) const {
  const double W = window_half_width();
  const double e_ref = fh_.H(0, 0);
  const Eigen::MatrixXd dplus =
      orientation.mu1().dot(polarization) * fh_.raise1 + orientation.mu2().dot(polarization) * fh_.raise2;
  PulseSpec spec{carrier, phase, pulses_.eta * pulses_.mu_debye / units::kHbarEvPs, pulses_.sigma_fs};
  Eigen::MatrixXcd X = propagate_window(fh_, e_ref, dplus, spec, W, frame, start, options_);
  const double drift = (X.adjoint() * X - start.adjoint() * start).cwiseAbs().maxCoeff();
  if (drift > options_.unitarity_tol)
    throw Error(ErrorCode::IntegrationError,
                "window propagator unitarity drift " + format_double(drift));
  return X;
}

Eigen::MatrixXcd PumpProbeModel::window_propagator(const MoleculeOrientation& orientation,
                                                   const Eigen::Vector3d& polarization,
                                                   double carrier, double phase,
                                                   Frame frame) const {
  const Eigen::Index d = static_cast<Eigen::Index>(fh_.dim());
  return propagate(orientation, polarization, carrier, phase, frame,
                   Eigen::MatrixXcd::Identity(d, d));
}

Eigen::VectorXd PumpProbeModel::population_difference() const {
  Eigen::VectorXd P = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fh_.dim()));
  for (auto i : fh_.dem) P(static_cast<Eigen::Index>(i)) = 1.0;
  for (auto i : fh_.gsm) P(static_cast<Eigen::Index>(i)) = -1.0;
  return P;
}

Eigen::VectorXcd PumpProbeModel::pumped_state(const MoleculeOrientation& orientation,
                                              bool upper) const {
  const double w = units::cm_to_rad_per_fs(exciton_[upper ? 1 : 0]);
  return propagate(orientation, pulses_.pol_pump, w, pulses_.phase_pump, Frame::Rotating, ground_);
}

// Shifting the probe phase by a multiplies the coupling by exp(i a), which is
// conjugation by exp(i a N) with N the excitation number. Each step of the
// cycle is therefore a diagonal rotation of a single propagated observable.
Eigen::MatrixXcd PumpProbeModel::probe_observable(const MoleculeOrientation& orientation,
                                                  bool upper) const {
  const double w = units::cm_to_rad_per_fs(exciton_[upper ? 1 : 0]);
  const Eigen::MatrixXcd U = window_propagator(orientation, pulses_.pol_probe, w, pulses_.phase_probe);
  const Eigen::MatrixXcd O = U.adjoint() * population_difference().asDiagonal() * U;
  const int steps = options_.phase_steps;
  const Eigen::Index d = O.rows();
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < steps; ++k) {
    const double a = 2.0 * std::numbers::pi * k / steps;
    Eigen::VectorXcd z(d);
    for (Eigen::Index i = 0; i < d; ++i) z(i) = std::exp(I * a * fh_.excitation(i));
    avg += z.asDiagonal() * O * z.conjugate().asDiagonal();
  }
  return avg / static_cast<double>(steps);
}

std::vector<double> PumpProbeModel::delayed_signal(const Eigen::VectorXcd& psi_pump,
                                                   const Eigen::MatrixXcd& Obar,
                                                   const std::vector<double>& delays_fs) const {
  const double W = window_half_width();
  const Eigen::Index d = static_cast<Eigen::Index>(fh_.dim());
  const Eigen::VectorXd P = population_difference();
  const double x0 = -1.0;
  const double x_pump = psi_pump.dot(P.asDiagonal() * psi_pump).real();
  const double x_probe = ground_.dot(Obar * ground_).real();

  const Eigen::MatrixXcd Vc = vectors_.cast<cplx>();
  const Eigen::VectorXcd c = Vc.adjoint() * psi_pump;
  const Eigen::MatrixXcd Oe = Vc.adjoint() * Obar * Vc;
  const double e_ref = fh_.H(0, 0);
  const double scale = 1.0 / (pulses_.eta * pulses_.eta);
  std::vector<double> out(delays_fs.size());
  Eigen::VectorXcd amp(d);
  for (std::size_t t = 0; t < delays_fs.size(); ++t) {
    const double gap = delays_fs[t] - 2.0 * W;
    for (Eigen::Index i = 0; i < d; ++i) amp(i) = c(i) * std::exp(-I * (energies_(i) - e_ref) * gap);
    const double x_pp = amp.dot(Oe * amp).real();
    out[t] = (x_pp - x_pump - x_probe + x0) * scale;
  }
  return out;
}

void PumpProbeModel::check_delays(const std::vector<double>& delays_fs) const {
  const double W = window_half_width();
  for (double t : delays_fs)
    if (!(t >= 2.0 * W))
      throw Error(ErrorCode::InvalidInput, "delay " + format_double(t) +
                                               " fs overlaps the pulse windows (needs >= " +
                                               format_double(2.0 * W) + " fs)");
}

std::vector<double> PumpProbeModel::signal(const MoleculeOrientation& orientation,
                                           Experiment experiment,
                                           const std::vector<double>& delays_fs) const {
  check_delays(delays_fs);
  if (pulses_.eta == 0.0) return std::vector<double>(delays_fs.size(), 0.0);
  return delayed_signal(pumped_state(orientation, upper_pump(experiment)),
                        probe_observable(orientation, upper_probe(experiment)), delays_fs);
}

std::array<std::vector<double>, 4> PumpProbeModel::signals(
    const MoleculeOrientation& orientation, const std::vector<double>& delays_fs) const {
  check_delays(delays_fs);
  std::array<std::vector<double>, 4> out;
  if (pulses_.eta == 0.0) {
    out.fill(std::vector<double>(delays_fs.size(), 0.0));
    return out;
  }
  const Eigen::VectorXcd pump[2] = {pumped_state(orientation, false), pumped_state(orientation, true)};
  const Eigen::MatrixXcd probe[2] = {probe_observable(orientation, false),
                                     probe_observable(orientation, true)};
  for (std::size_t e = 0; e < 4; ++e) {
    const Experiment x = kAllExperiments[e];
    out[e] = delayed_signal(pump[upper_pump(x)], probe[upper_probe(x)], delays_fs);
  }
  return out;
}

double simulate_pp_signal(const DimerParams& params, const PulsePair& pulses,
                          const MoleculeOrientation& orientation, Experiment experiment,
                          double delay_fs, const PumpProbeOptions& options) {
  PumpProbeModel model(params, pulses, options);
  return model.signal(orientation, experiment, {delay_fs}).front();
}

std::vector<double> uniform_delays(double t0_fs, double t1_fs, std::size_t count) {
  if (count < 2) throw Error(ErrorCode::InvalidInput, "need at least 2 delays");
  std::vector<double> out(count);
  const double h = (t1_fs - t0_fs) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = t0_fs + static_cast<double>(k) * h;
  return out;
}

std::array<TimeSeries, 4> ensemble_signals(const DimerParams& params, const PulsePair& pulses,
                                           const std::vector<double>& delays_fs,
                                           std::size_t n_molecules, std::uint64_t seed,
                                           std::size_t workers, const PumpProbeOptions& options) {
  if (n_molecules < 1) throw Error(ErrorCode::InvalidInput, "n_molecules must be >= 1");
  const PumpProbeModel model(params, pulses, options);
  std::vector<std::array<std::vector<double>, 4>> per(n_molecules);
  parallel_for(n_molecules, workers,
               [&](std::size_t m) { per[m] = model.signals(ensemble_orientation(seed, m), delays_fs); });
  std::array<TimeSeries, 4> out;
  const double dt = delays_fs.size() >= 2 ? delays_fs[1] - delays_fs[0] : 1.0;
  for (std::size_t e = 0; e < 4; ++e) {
    out[e].values.assign(delays_fs.size(), 0.0);
    out[e].dt = dt;
    out[e].label = to_string(kAllExperiments[e]);
    for (std::size_t m = 0; m < n_molecules; ++m)
      for (std::size_t t = 0; t < delays_fs.size(); ++t) out[e].values[t] += per[m][e][t];
    for (auto& v : out[e].values) v /= static_cast<double>(n_molecules);
  }
  return out;
}

TimeSeries ensemble_signal(const DimerParams& params, const PulsePair& pulses,
                           const std::vector<double>& delays_fs, std::size_t n_molecules,
                           Experiment experiment, std::uint64_t seed, std::size_t workers,
                           const PumpProbeOptions& options) {
  if (n_molecules < 1) throw Error(ErrorCode::InvalidInput, "n_molecules must be >= 1");
  const PumpProbeModel model(params, pulses, options);
  std::vector<std::vector<double>> per(n_molecules);
  parallel_for(n_molecules, workers, [&](std::size_t m) {
    per[m] = model.signal(ensemble_orientation(seed, m), experiment, delays_fs);
  });
  TimeSeries out;
  out.values.assign(delays_fs.size(), 0.0);
  out.dt = delays_fs.size() >= 2 ? delays_fs[1] - delays_fs[0] : 1.0;
  out.label = to_string(experiment);
  for (std::size_t m = 0; m < n_molecules; ++m)
    for (std::size_t t = 0; t < delays_fs.size(); ++t) out.values[t] += per[m][t];
  for (auto& v : out.values) v /= static_cast<double>(n_molecules);
  return out;
}

Table1Options paper_scale_table1() {
  Table1Options o;
  o.n_molecules = 300;
  o.n_delays = 2800;
  return o;
}

Table1Run table1_pipeline(int n_phonon, const std::vector<double>& epsilons,
                          const Table1Options& options) {
  DimerParams params = options.params;
  params.n_phonon = n_phonon;
  Table1Run run;
  const auto delays = uniform_delays(options.t0_fs, options.t1_fs, options.n_delays);
  run.signals = ensemble_signals(params, options.pulses, delays, options.n_molecules, options.seed,
                                 options.workers);
  std::vector<TimeSeries> all(run.signals.begin(), run.signals.end());
  for (double eps : epsilons) {
    auto scan = misc_subset_scan(all, eps);
    Table1Row row;
    row.n_phonon = n_phonon;
    row.epsilon = eps;
    row.report = scan.best;
    row.best_mask = scan.best_mask;
    row.sem_dimension = n_phonon <= 4 ? sem_dimension(n_phonon) : 0;
    run.rows.push_back(row);
  }
  return run;
}

Table1Row table1_pipeline(int n_phonon, double epsilon, const Table1Options& options) {
  return table1_pipeline(n_phonon, std::vector<double>{epsilon}, options).rows.front();
}

}  // namespace delaydim
