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

#include "delaydim/heom.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "delaydim/errors.hpp"
#include "delaydim/parallel.hpp"

namespace delaydim {

namespace {

const cplx I(0.0, 1.0);

cplx cot(cplx z) { return std::cos(z) / std::sin(z); }

void check_cot(cplx z, const char* what) {
  if (std::abs(std::sin(z)) < 1e-12)
    throw Error(ErrorCode::SingularBathParameters,
                std::string("cotangent singular in ") + what + " (|sin| < 1e-12)");
}

void check_bath(const BathSpec& bath) {
  if (!(bath.zeta > 0.0) || !(bath.gamma > 0.0) || !(bath.beta > 0.0) || !(bath.omega0 > 0.0))
    throw Error(ErrorCode::InvalidInput, "zeta, gamma, beta and omega0 must be positive");
  if (!std::isfinite(bath.zeta) || !std::isfinite(bath.gamma) || !std::isfinite(bath.beta))
    throw Error(ErrorCode::InvalidInput, "bath parameters must be finite");
}

cplx psi_weight(const BathSpec& bath, double nu) {
  const double g = bath.gamma;
  const cplx gp(g, bath.delta_value()), gm(g, -bath.delta_value());
  const cplx den = (nu * nu - gp * gp) * (gm * gm - nu * nu);
  if (std::abs(den) < 1e-12)
    throw Error(ErrorCode::SingularBathParameters, "Matsubara frequency resonant with gamma");
  return I * bath.zeta / (bath.beta * bath.omega0) * 2.0 * g * g * gp * gm / den;
}

}  // namespace

Liouville left_mul(const Eigen::Matrix2cd& A) {
  Liouville out = Liouville::Zero();
  for (int b = 0; b < 2; ++b) out.block<2, 2>(2 * b, 2 * b) = A;
  return out;
}

Liouville right_mul(const Eigen::Matrix2cd& B) {
  Liouville out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = B(j, i) * Eigen::Matrix2cd::Identity();
  return out;
}

Liouville commutator(const Eigen::Matrix2cd& W) { return left_mul(W) - right_mul(W); }
Liouville anticommutator(const Eigen::Matrix2cd& W) { return left_mul(W) + right_mul(W); }

Eigen::Matrix2cd sigma_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd sigma_y() {
  Eigen::Matrix2cd m;
  m << 0, -I, I, 0;
  return m;
}

Eigen::Matrix2cd sigma_z() {
  Eigen::Matrix2cd m;
  m << -1, 0, 0, 1;
  return m;
}

Eigen::Matrix2cd coupling_matrix(const CouplingOp& coupling, ElasticConvention convention) {
  if (coupling.w1 == 0.0 && coupling.w2 == 0.0)
    throw Error(ErrorCode::InvalidInput, "coupling weights (w1, w2) must not both vanish");
  const Eigen::Matrix2cd elastic =
      convention == ElasticConvention::SigmaZ ? sigma_z() : Eigen::Matrix2cd::Identity();
  return coupling.w1 * sigma_x() + coupling.w2 * elastic;
}

Superoperators build_superoperators(const BathSpec& bath, const CouplingOp& coupling,
                                    std::size_t n_matsubara, ElasticConvention convention) {
  check_bath(bath);
  const double g = bath.gamma, b = bath.beta, w0 = bath.omega0;
  const cplx gp(g, bath.delta_value()), gm(g, -bath.delta_value());
  check_cot(b * gp / 2.0, "beta gamma_+ / 2");
  check_cot(b * gm / 2.0, "beta gamma_- / 2");
  if (std::abs(gm * gm - gp * gp) < 1e-12)
    throw Error(ErrorCode::SingularBathParameters, "gamma_+ and gamma_- coincide");

  const Eigen::Matrix2cd W = coupling_matrix(coupling, convention);
  const Liouville Wx = commutator(W), Wo = anticommutator(W);

  Superoperators s;
  s.L0 = commutator(0.5 * w0 * sigma_z());
  s.Phi = I * Wx;

  const cplx c1 = I * b * gm * cot(b * gp / 2.0);
  const cplx c2 = I * b * gm;
  const cplx pref = I * bath.zeta / (4.0 * b * w0) * (g / w0);
  s.Theta1 = pref * (c1.real() + c1.imag()) * Wx;
  s.Theta2 = -I * pref * (c2.real() + c2.imag()) * Wo;

  for (std::size_t m = 1; m <= n_matsubara; ++m) {
    const double nu = 2.0 * std::numbers::pi * static_cast<double>(m) / b;
    s.nu.push_back(nu);
    s.Psi.push_back(psi_weight(bath, nu) * Wx);
  }

  const cplx zp = b * gp / 2.0 * cot(b * gp / 2.0);
  const cplx zm = b * gm / 2.0 * cot(b * gm / 2.0);
  const cplx bracket = 1.0 - (gm * gm * zp - gp * gp * zm) / (gm * gm - gp * gp);
  s.Xi = I * (I * bath.zeta / (b * w0)) * g * g / (gp * gm) * bracket * (Wx * Wx);
  return s;
}

Liouville matsubara_partial_sum(const BathSpec& bath, const CouplingOp& coupling,
                                std::size_t m_max, ElasticConvention convention) {
  check_bath(bath);
  const Eigen::Matrix2cd W = coupling_matrix(coupling, convention);
  const Liouville Wx = commutator(W);
  cplx acc = 0.0;
  for (std::size_t m = m_max; m >= 1; --m)
    acc += psi_weight(bath, 2.0 * std::numbers::pi * static_cast<double>(m) / bath.beta);
  return acc * (I * Wx) * Wx;
}

HierarchyConfig paper_scale_hierarchy() {
  HierarchyConfig c;
  c.depth = 8;
  c.n_matsubara = 5;
  c.t_end = 1500.0;
  c.samples = 30000;
  return c;
}

namespace {

void enumerate(std::vector<int>& cur, std::size_t pos, int remaining,
               std::vector<std::vector<int>>& out) {
  if (pos == cur.size()) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    cur[pos] = v;
    enumerate(cur, pos + 1, remaining - v, out);
  }
  cur[pos] = 0;
}

struct Coupling {
  std::size_t target;
  Liouville op;
};

struct Generator {
  std::vector<Liouville> diag;
  std::vector<std::vector<Coupling>> off;
};

using State = std::vector<Eigen::Vector4cd>;

Generator build_generator(const Superoperators& s, const std::vector<std::vector<int>>& idx,
                          double gamma) {
  std::map<std::vector<int>, std::size_t> pos;
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
  const std::size_t M = s.nu.size();

  Liouville tail = s.Xi;
  for (const auto& P : s.Psi) tail -= s.Phi * P;
  const Liouville base = -I * s.L0 + tail;
  const Liouville theta = s.Theta1 + s.Theta2;

  Generator g;
  g.diag.resize(idx.size());
  g.off.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& c = idx[i];
    const int n = c[0];
    double decay = 2.0 * n * gamma;
    for (std::size_t m = 0; m < M; ++m) decay += c[m + 1] * s.nu[m];
    g.diag[i] = base - decay * Liouville::Identity();

    auto link = [&](std::vector<int> other, const Liouville& op) {
      auto it = pos.find(other);
      if (it != pos.end()) g.off[i].push_back({it->second, op});
    };
    {
      auto up = c;
      up[0] += 1;
      link(up, -s.Phi);
    }
    if (n > 0) {
      auto dn = c;
      dn[0] -= 1;
      link(dn, -static_cast<double>(n) * gamma * theta);
    }
    for (std::size_t m = 0; m < M; ++m) {
      auto up = c;
      up[m + 1] += 1;
      link(up, -s.Phi);
      if (c[m + 1] > 0) {
        auto dn = c;
        dn[m + 1] -= 1;
        link(dn, -static_cast<double>(c[m + 1]) * s.nu[m] * s.Psi[m]);
      }
    }
  }
  return g;
}

void apply(const Generator& g, const State& x, State& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    Eigen::Vector4cd acc = g.diag[i] * x[i];
    for (const auto& c : g.off[i]) acc.noalias() += c.op * x[c.target];
    y[i] = acc;
  }
}

Eigen::Matrix2cd unvec(const Eigen::Vector4cd& v) {
  Eigen::Matrix2cd m;
  m << v(0), v(2), v(1), v(3);
  return m;
}

Eigen::Vector4cd vec(const Eigen::Matrix2cd& m) {
  return Eigen::Vector4cd(m(0, 0), m(1, 0), m(0, 1), m(1, 1));
}

bool is_hermitian(const Eigen::Matrix2cd& m, double tol) { return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol; }

struct RunOutcome {
  bool diverged = false;
  std::string message;
};

RunOutcome run_once(const Generator& g, const Eigen::Matrix2cd& rho0, const Eigen::Matrix2cd& obs,
                    const HierarchyConfig& cfg, double dt_target, std::vector<double>& values,
                    HeomDiagnostics& diag, State& final_state) {
  const std::size_t N = g.diag.size();
  const double h = cfg.t_end / static_cast<double>(cfg.samples - 1);
  const std::size_t sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(h / dt_target - 1e-9)));
  const double dt = h / static_cast<double>(sub);
  diag.dt_used = dt;

  State x(N, Eigen::Vector4cd::Zero()), k1(N), k2(N), k3(N), k4(N), tmp(N);
  x[0] = vec(rho0);
  values.assign(cfg.samples, 0.0);
  double max_tr = 0.0, max_herm = 0.0;

  for (std::size_t s = 0; s < cfg.samples; ++s) {
    if (s > 0) {
      for (std::size_t step = 0; step < sub; ++step) {
        apply(g, x, k1);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
        apply(g, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
        apply(g, tmp, k3);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + dt * k3[i];
        apply(g, tmp, k4);
        for (std::size_t i = 0; i < N; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (cfg.symmetrize) {
          Eigen::Matrix2cd r = unvec(x[0]);
          x[0] = vec(0.5 * (r + r.adjoint()));
        }
      }
      double worst = 0.0;
      for (const auto& v : x) worst = std::max(worst, v.norm());
      if (!(worst <= 1e6)) {
        RunOutcome o;
        o.diverged = true;
        o.message = "ADM norm " + format_double(worst) + " exceeded 1e6 at t = " +
                    format_double(static_cast<double>(s) * h) + " with dt = " + format_double(dt);
        return o;
      }
    }
    const Eigen::Matrix2cd r = unvec(x[0]);
    values[s] = (obs * r).trace().real();
    max_tr = std::max(max_tr, std::abs(r.trace() - 1.0));
    max_herm = std::max(max_herm, (r - r.adjoint()).cwiseAbs().maxCoeff());
  }
  diag.max_trace_error = max_tr;
  diag.max_hermiticity_error = max_herm;
  final_state = x;
  return {};
}

}  // namespace

std::vector<std::vector<int>> hierarchy_indices(std::size_t depth, std::size_t n_matsubara) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n_matsubara + 1, 0);
  enumerate(cur, 0, static_cast<int>(depth), out);
  return out;
}

std::size_t adm_count(std::size_t depth, std::size_t n_matsubara) {
  // binomial(depth + M + 1, M + 1)
  const std::size_t n = depth + n_matsubara + 1, k = n_matsubara + 1;
  unsigned long long r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::size_t>(r);
}

TimeSeries heom_integrate(const Eigen::Matrix2cd& rho0, const BathSpec& bath,
                          const CouplingOp& coupling, const HierarchyConfig& config,
                          const Eigen::Matrix2cd& observable, HeomDiagnostics* diagnostics) {
  if (!is_hermitian(rho0, 1e-10)) throw Error(ErrorCode::InvalidState, "rho0 is not Hermitian");
  if (std::abs(rho0.trace() - 1.0) > 1e-10)
    throw Error(ErrorCode::InvalidState, "rho0 does not have unit trace");
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(0.5 * (rho0 + rho0.adjoint()));
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw Error(ErrorCode::InvalidState, "rho0 is not positive semidefinite");
  }
  if (!is_hermitian(observable, 1e-12))
    throw Error(ErrorCode::InvalidInput, "observable is not Hermitian");
  if (config.samples < 2) throw Error(ErrorCode::InvalidInput, "need at least 2 samples");
  if (!(config.dt > 0.0) || !(config.t_end > 0.0))
    throw Error(ErrorCode::InvalidInput, "dt and t_end must be positive");

  HeomDiagnostics local;
  HeomDiagnostics& diag = diagnostics ? *diagnostics : local;
  diag = HeomDiagnostics{};

  const auto s = build_superoperators(bath, coupling, config.n_matsubara, config.convention);
  if (config.n_matsubara > 0 && s.nu.back() < bath.omega0)
    diag.warnings.push_back("nu_M = " + format_double(s.nu.back()) + " is below omega0");
  if (config.n_matsubara == 0)
    diag.warnings.push_back("no Matsubara terms resolved; all of them enter through Xi");

  const auto idx = hierarchy_indices(config.depth, config.n_matsubara);
  const Generator g = build_generator(s, idx, bath.gamma);

  std::vector<double> values;
  State final_state;
  double dt = config.dt;
  RunOutcome outcome;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    outcome = run_once(g, rho0, observable, config, dt, values, diag, final_state);
    if (!outcome.diverged) break;
    diag.retries = attempt + 1;
    dt *= 0.5;
  }
  if (outcome.diverged) {
    diag.retries = config.max_retries;
    throw Error(ErrorCode::DivergedIntegration, outcome.message);
  }

  diag.final_state.index = idx;
  diag.final_state.time = config.t_end;
  diag.final_state.adms.reserve(final_state.size());
  for (const auto& v : final_state) diag.final_state.adms.push_back(unvec(v));

  TimeSeries out;
  out.values = std::move(values);
  out.dt = config.t_end / static_cast<double>(config.samples - 1);
  out.label = "heom";
  return out;
}

SpinBosonProcess parse_process(const std::string& name) {
  if (name == "T1" || name == "t1") return SpinBosonProcess::T1;
  if (name == "T2" || name == "t2") return SpinBosonProcess::T2;
  if (name == "hybrid") return SpinBosonProcess::Hybrid;
  throw Error(ErrorCode::InvalidInput, "unknown process '" + name + "' (T1, T2, hybrid)");
}

const char* to_string(SpinBosonProcess process) {
  switch (process) {
    case SpinBosonProcess::T1: return "T1";
    case SpinBosonProcess::T2: return "T2";
    case SpinBosonProcess::Hybrid: return "hybrid";
  }
  return "?";
}

ProcessSetup process_setup(SpinBosonProcess process) {
  ProcessSetup p;
  Eigen::Matrix2cd excited = Eigen::Matrix2cd::Zero();
  excited(1, 1) = 1.0;
  const Eigen::Matrix2cd plus = 0.5 * Eigen::Matrix2cd::Ones();
  switch (process) {
    case SpinBosonProcess::T1:
      p.coupling = {1.0, 0.0};
      p.rho0 = excited;
      p.observable = sigma_z();
      break;
    case SpinBosonProcess::T2:
      p.coupling = {0.0, 1.0};
      p.rho0 = plus;
      p.observable = sigma_x();
      break;
    case SpinBosonProcess::Hybrid:
      p.coupling = {0.5, 0.5};
      p.rho0 = plus;
      p.observable = sigma_x();
      break;
  }
  return p;
}

std::vector<std::vector<ScanResult>> spin_boson_scan_sweep(const std::vector<ScanPoint>& grid,
                                                           double zeta, SpinBosonProcess process,
                                                           const HierarchyConfig& config,
                                                           const std::vector<double>& epsilons,
                                                           std::size_t workers) {
  const ProcessSetup setup = process_setup(process);
  std::vector<std::vector<ScanResult>> out(epsilons.size(), std::vector<ScanResult>(grid.size()));
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    for (auto& row : out) row[i].point = grid[i];
    try {
      BathSpec bath;
      bath.zeta = zeta;
      bath.gamma = grid[i].gamma;
      bath.beta = grid[i].beta;
      auto series = heom_integrate(setup.rho0, bath, setup.coupling, config, setup.observable);
      auto reps = misc_epsilon_sweep({series}, epsilons);
      for (std::size_t e = 0; e < epsilons.size(); ++e) {
        out[e][i].ok = true;
        out[e][i].report = reps[e];
      }
    } catch (const Error& err) {
      for (auto& row : out) row[i].error = std::string(to_string(err.code())) + ": " + err.what();
    }
  });
  return out;
}

std::vector<ScanResult> spin_boson_scan(const std::vector<ScanPoint>& grid, double zeta,
                                        SpinBosonProcess process, const HierarchyConfig& config,
                                        double epsilon, std::size_t workers) {
  return spin_boson_scan_sweep(grid, zeta, process, config, {epsilon}, workers).front();
}

}  // namespace delaydim
