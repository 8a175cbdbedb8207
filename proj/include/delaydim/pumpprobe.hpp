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
#include <string>
#include <vector>

#include "delaydim/rank.hpp"
#include "delaydim/series.hpp"

namespace delaydim {

// Unit conversions. Internally time is in fs and energy in rad/fs.
namespace units {
constexpr double kSpeedOfLightCmPerFs = 2.99792458e-5;
constexpr double kHbarEvPs = 6.582119569e-4;
double cm_to_rad_per_fs(double wavenumber_cm);
double rad_per_fs_to_cm(double omega);
}  // namespace units

struct DimerParams {
  double eps1_cm = 15300.0;
  double eps2_cm = 16200.0;
  double kappa_cm = -162.0;
  double omega1_cm = 800.0;
  double omega2_cm = 1500.0;
  double g1 = 0.1;
  double g2 = 0.15;
  int n_phonon = 0;
};

// Electronic basis {gg, eg, ge, ee} (eg: site 1 excited) tensored with the
// two-mode Fock space, phonon index n1 * (n+1) + n2. Energies in rad/fs.
struct FHHamiltonian {
  Eigen::MatrixXd H;
  Eigen::MatrixXd raise1;  // c_1^dagger
  Eigen::MatrixXd raise2;  // c_2^dagger
  Eigen::VectorXd excitation;
  std::vector<std::size_t> gsm, sem, dem;
  int n_phonon = 0;

  std::size_t dim() const { return static_cast<std::size_t>(H.rows()); }
};

FHHamiltonian build_fh_hamiltonian(const DimerParams& params);

// Eigenvalues (lower, upper) of [[eps1, kappa], [kappa, eps2]] in cm^-1.
std::array<double, 2> exciton_energies_cm(const DimerParams& params);

// Table data, indexed by n_phonon = 0..4.
int sem_dimension(int n_phonon);

// Reference full-scale MISC values at epsilon = 1e-1 and 1e-4.
struct Table1Reference {
  double misc_1e1 = 0.0;
  double misc_1e4 = 0.0;
};
Table1Reference table1_reference(int n_phonon);
constexpr double kTable1Tolerance = 0.15;

struct PulsePair {
  double sigma_fs = 16.48;
  double eta = 5e-4;       // eV ps / D
  double mu_debye = 1.0;   // transition dipole magnitude of each site
  Eigen::Vector3d pol_pump = Eigen::Vector3d::UnitX();
  Eigen::Vector3d pol_probe = Eigen::Vector3d::UnitX();
  double phase_pump = 0.0;
  double phase_probe = 0.0;
};

// Site dipoles: mu1 = R z, mu2 = R (sin a x + cos a z), a = 40 degrees.
struct MoleculeOrientation {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double angle_deg = 40.0;

  Eigen::Vector3d mu1() const;
  Eigen::Vector3d mu2() const;
};

MoleculeOrientation random_orientation(std::mt19937_64& rng);

// Orientation of molecule `index` in an ensemble drawn with `seed`.
MoleculeOrientation ensemble_orientation(std::uint64_t seed, std::size_t index);

// (pump, probe) carrier assignment; m = lower exciton, p = upper exciton.
enum class Experiment { MM, MP, PM, PP };
constexpr std::array<Experiment, 4> kAllExperiments = {Experiment::MM, Experiment::MP,
                                                       Experiment::PM, Experiment::PP};
const char* to_string(Experiment e);
Experiment parse_experiment(const std::string& tag);

enum class Frame { Rotating, Lab };

struct PumpProbeOptions {
  double window_sigmas = 6.0;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double unitarity_tol = 1e-6;
  // Probe phase cycle: 2 averages phi and phi + pi, 4 adds phi + pi/2 and
  // phi + 3pi/2 and so also cancels the GSM-DEM term carrying exp(2i phi).
  int phase_steps = 4;
};

class PumpProbeModel {
 public:
  PumpProbeModel(const DimerParams& params, const PulsePair& pulses,
                 const PumpProbeOptions& options = {});

  const FHHamiltonian& hamiltonian() const { return fh_; }
  const PulsePair& pulses() const { return pulses_; }
  double window_half_width() const;
  double carrier(Experiment e, bool probe) const;

  // Propagator over [t_c - W, t_c + W] for a pulse centred at t_c with its
  // carrier phase referenced to t_c. Independent of t_c.
  Eigen::MatrixXcd window_propagator(const MoleculeOrientation& orientation,
                                     const Eigen::Vector3d& polarization, double carrier,
                                     double phase, Frame frame = Frame::Rotating) const;

  // Phase-averaged differential signal divided by eta^2 for each delay (fs).
  std::vector<double> signal(const MoleculeOrientation& orientation, Experiment experiment,
                             const std::vector<double>& delays_fs) const;

  // All four experiments, in kAllExperiments order.
  std::array<std::vector<double>, 4> signals(const MoleculeOrientation& orientation,
                                             const std::vector<double>& delays_fs) const;

  // Phase-cycled probe observable; +1 on DEM, -1 on GSM after the probe.
  Eigen::MatrixXcd probe_observable(const MoleculeOrientation& orientation, bool upper) const;

  // State after the pump window, starting from the global ground state.
  Eigen::VectorXcd pumped_state(const MoleculeOrientation& orientation, bool upper) const;

 private:
  Eigen::MatrixXcd propagate(const MoleculeOrientation& orientation,
                             const Eigen::Vector3d& polarization, double carrier, double phase,
                             Frame frame, const Eigen::MatrixXcd& start) const;
  Eigen::VectorXd population_difference() const;
  std::vector<double> delayed_signal(const Eigen::VectorXcd& psi_pump, const Eigen::MatrixXcd& Obar,
                                     const std::vector<double>& delays_fs) const;
  void check_delays(const std::vector<double>& delays_fs) const;

  DimerParams params_;
  PulsePair pulses_;
  PumpProbeOptions options_;
  FHHamiltonian fh_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXcd ground_;
  std::array<double, 2> exciton_;
};

double simulate_pp_signal(const DimerParams& params, const PulsePair& pulses,
                          const MoleculeOrientation& orientation, Experiment experiment,
                          double delay_fs, const PumpProbeOptions& options = {});

std::vector<double> uniform_delays(double t0_fs, double t1_fs, std::size_t count);

TimeSeries ensemble_signal(const DimerParams& params, const PulsePair& pulses,
                           const std::vector<double>& delays_fs, std::size_t n_molecules,
                           Experiment experiment, std::uint64_t seed, std::size_t workers = 1,
                           const PumpProbeOptions& options = {});

// All four experiments from one pass over the ensemble, in kAllExperiments order.
std::array<TimeSeries, 4> ensemble_signals(const DimerParams& params, const PulsePair& pulses,
                                           const std::vector<double>& delays_fs,
                                           std::size_t n_molecules, std::uint64_t seed,
                                           std::size_t workers = 1,
                                           const PumpProbeOptions& options = {});

struct Table1Options {
  std::size_t n_molecules = 20;
  std::size_t n_delays = 400;
  double t0_fs = 500.0;
  double t1_fs = 6098.0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  DimerParams params;
  PulsePair pulses;
};

Table1Options paper_scale_table1();

struct Table1Row {
  int n_phonon = 0;
  double epsilon = 0.0;
  MiscReport report;
  unsigned best_mask = 0;
  int sem_dimension = 0;
};

struct Table1Run {
  std::array<TimeSeries, 4> signals;
  std::vector<Table1Row> rows;
};

Table1Run table1_pipeline(int n_phonon, const std::vector<double>& epsilons,
                          const Table1Options& options = {});
Table1Row table1_pipeline(int n_phonon, double epsilon, const Table1Options& options = {});

}  // namespace delaydim
