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

#include <string>
#include <vector>

#include "delaydim/rank.hpp"
#include "delaydim/series.hpp"

namespace delaydim {

// Quantities in units of omega0 unless stated; hbar = 1.
struct BathSpec {
  double zeta = 1.0;
  double gamma = 1.0;
  double delta = -1.0;  // negative selects gamma / 4
  double beta = 1.0;
  double omega0 = 1.0;

  double delta_value() const { return delta < 0.0 ? gamma / 4.0 : delta; }
};

struct CouplingOp {
  double w1 = 1.0;  // sigma_x part
  double w2 = 0.0;  // elastic part
};

// How the elastic weight w2 enters W. SigmaZ couples through sigma_z; the
// literal reading makes that part the identity, so it drops out of every
// commutator.
enum class ElasticConvention { SigmaZ, LiteralIdentity };

using Liouville = Eigen::Matrix4cd;

// Column-stacked vec: vec(A X B) = (B^T kron A) vec(X).
Liouville left_mul(const Eigen::Matrix2cd& A);
Liouville right_mul(const Eigen::Matrix2cd& B);
Liouville commutator(const Eigen::Matrix2cd& W);      // W^x
Liouville anticommutator(const Eigen::Matrix2cd& W);  // W^o

Eigen::Matrix2cd sigma_x();
Eigen::Matrix2cd sigma_y();
Eigen::Matrix2cd sigma_z();  // diag(-1, 1) in the {|0>, |1>} basis

Eigen::Matrix2cd coupling_matrix(const CouplingOp& coupling,
                                 ElasticConvention convention = ElasticConvention::SigmaZ);

struct Superoperators {
  Liouville L0;  // [H0, .] with H0 = omega0 sigma_z / 2
  Liouville Phi;
  Liouville Theta1;
  Liouville Theta2;
  Liouville Xi;  // sum over all m >= 1 of Phi Psi_m
  std::vector<Liouville> Psi;
  std::vector<double> nu;
};

Superoperators build_superoperators(const BathSpec& bath, const CouplingOp& coupling,
                                    std::size_t n_matsubara,
                                    ElasticConvention convention = ElasticConvention::SigmaZ);

// sum_{m=1}^{m_max} Phi Psi_m
Liouville matsubara_partial_sum(const BathSpec& bath, const CouplingOp& coupling,
                                std::size_t m_max,
                                ElasticConvention convention = ElasticConvention::SigmaZ);

struct HierarchyConfig {
  std::size_t depth = 4;
  std::size_t n_matsubara = 2;
  double dt = 0.01;
  double t_end = 150.0;
  std::size_t samples = 3000;
  bool symmetrize = false;
  int max_retries = 3;
  ElasticConvention convention = ElasticConvention::SigmaZ;
};

HierarchyConfig paper_scale_hierarchy();

// Multi-indices (n, j_1..j_M) with n + sum j <= depth in lexicographic order.
std::vector<std::vector<int>> hierarchy_indices(std::size_t depth, std::size_t n_matsubara);
std::size_t adm_count(std::size_t depth, std::size_t n_matsubara);

struct HierarchyState {
  std::vector<std::vector<int>> index;
  std::vector<Eigen::Matrix2cd> adms;
  double time = 0.0;
};

struct HeomDiagnostics {
  double dt_used = 0.0;
  int retries = 0;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  std::vector<std::string> warnings;
  HierarchyState final_state;
};

// Tr(observable rho(t)) on samples t_k = k * t_end / (samples - 1).
TimeSeries heom_integrate(const Eigen::Matrix2cd& rho0, const BathSpec& bath,
                          const CouplingOp& coupling, const HierarchyConfig& config,
                          const Eigen::Matrix2cd& observable,
                          HeomDiagnostics* diagnostics = nullptr);

enum class SpinBosonProcess { T1, T2, Hybrid };

SpinBosonProcess parse_process(const std::string& name);
const char* to_string(SpinBosonProcess process);

struct ProcessSetup {
  CouplingOp coupling;
  Eigen::Matrix2cd rho0;
  Eigen::Matrix2cd observable;
};

ProcessSetup process_setup(SpinBosonProcess process);

struct ScanPoint {
  double gamma = 0.0;
  double beta = 0.0;
};

struct ScanResult {
  ScanPoint point;
  bool ok = false;
  std::string error;
  MiscReport report;
};

std::vector<ScanResult> spin_boson_scan(const std::vector<ScanPoint>& grid, double zeta,
                                        SpinBosonProcess process, const HierarchyConfig& config,
                                        double epsilon, std::size_t workers = 1);

// Multi-epsilon variant: one trajectory per point, one report per epsilon.
std::vector<std::vector<ScanResult>> spin_boson_scan_sweep(const std::vector<ScanPoint>& grid,
                                                           double zeta, SpinBosonProcess process,
                                                           const HierarchyConfig& config,
                                                           const std::vector<double>& epsilons,
                                                           std::size_t workers = 1);

}  // namespace delaydim
