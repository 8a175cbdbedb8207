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

// delaydim command-line driver.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "delaydim/errors.hpp"
#include "delaydim/gridscan.hpp"
#include "delaydim/heom.hpp"
#include "delaydim/models_analytic.hpp"
#include "delaydim/parallel.hpp"
#include "delaydim/pumpprobe.hpp"
#include "delaydim/rank.hpp"
#include "delaydim/series.hpp"
#include "delaydim/textio.hpp"

namespace {

using namespace delaydim;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Param {
  std::string name;      // long flag without dashes; config key
  std::string fallback;  // desk default, empty when the value is optional or required
  std::string paper;     // default under --paper-scale, empty when unchanged
  std::string unit;
  std::string help;
  bool flag = false;
};

std::string describe(const Param& p) {
  std::string d = p.help;
  if (!p.unit.empty()) d += " [" + p.unit + "]";
  if (p.flag) return d;
  if (!p.fallback.empty()) d += ". Default " + p.fallback;
  if (!p.paper.empty()) d += "; --paper-scale " + p.paper;
  return d;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

class Run {
 public:
  Run(std::string command, std::map<std::string, std::string> values)
      : command_(std::move(command)), values_(std::move(values)) {}

  bool has(const std::string& key) const { return !raw(key).empty(); }

  std::string str(const std::string& key) const {
    const std::string& v = raw(key);
    if (v.empty()) throw UsageError("--" + key + " is required");
    return v;
  }

  bool flag(const std::string& key) const { return raw(key) == "true"; }

  double num(const std::string& key) const {
    double v = 0.0;
    if (!parse_double(str(key), v)) throw UsageError("--" + key + ": not a number: " + raw(key));
    return v;
  }

  long long integer(const std::string& key) const { return to_integer(key, str(key)); }

  std::size_t count(const std::string& key) const {
    const long long v = integer(key);
    if (v < 0) throw UsageError("--" + key + " must be >= 0");
    return static_cast<std::size_t>(v);
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : split_fields(str(key))) {
      double v = 0.0;
      if (!parse_double(tok, v)) throw UsageError("--" + key + ": not a number: " + tok);
      out.push_back(v);
    }
    if (out.empty()) throw UsageError("--" + key + " is empty");
    return out;
  }

  std::vector<long long> int_list(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& tok : split_fields(str(key))) out.push_back(to_integer(key, tok));
    if (out.empty()) throw UsageError("--" + key + " is empty");
    return out;
  }

  std::vector<std::string> str_list(const std::string& key) const { return split_fields(str(key)); }

  std::uint64_t seed() const {
    const long long v = integer("seed");
    if (v < 0) throw UsageError("--seed must be >= 0");
    return static_cast<std::uint64_t>(v);
  }

  double epsilon() const { return num("epsilon"); }

  std::size_t workers() const {
    if (raw("workers") == "auto") return default_workers();
    const std::size_t w = count("workers");
    if (w == 0) throw UsageError("--workers must be positive");
    return w;
  }

  bool paper_scale() const { return flag("paper-scale"); }

  // Records the digest of an input file and returns its path.
  std::string input(const std::string& path) {
    inputs_.push_back({path, sha256_file(path)});
    return path;
  }

  // With --output, `suffix` is appended to the output path; without it the
  // content goes to stdout, preceded by a comment line when `label` is set.
  void emit(const std::string& suffix, const std::string& content, const std::string& label = "") {
    if (!has("output")) {
      if (!label.empty()) std::cout << "# " << label << '\n';
      std::cout << content;
      return;
    }
    const std::string path = raw("output") + suffix;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    out << content;
    if (!out) throw Error(ErrorCode::InvalidInput, "write failed: " + path);
    outputs_.push_back(std::filesystem::path(path).filename().string());
  }

  // Messages that always go to stdout.
  void say(const std::string& line) { std::cout << line << '\n'; }

  void write_manifest() const {
    if (!has("output")) return;
    nlohmann::ordered_json m;
    m["tool"] = "delaydim";
    m["version"] = DELAYDIM_VERSION;
    m["subcommand"] = command_;
    m["seed"] = raw("seed");
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : values_)
      if (k != "output") params[k] = v;
    m["parameters"] = params;
    nlohmann::ordered_json in = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : inputs_) in.push_back({{"path", path}, {"sha256", digest}});
    m["inputs"] = in;
    m["outputs"] = outputs_;
    const std::string path = raw("output") + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    out << m.dump(2) << '\n';
  }

 private:
  const std::string& raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::logic_error("unknown parameter " + key);
    return it->second;
  }

  static long long to_integer(const std::string& key, const std::string& s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw UsageError("--" + key + ": not an integer: " + s);
    return v;
  }

  std::string command_;
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
};

struct Command {
  std::string name;
  std::string summary;
  std::vector<Param> params;
  std::function<void(Run&)> action;

  std::map<std::string, std::string> cli_values;
  std::map<std::string, bool> cli_flags;
  std::map<std::string, CLI::Option*> options;
};

std::vector<Param> common_params(const std::string& epsilon) {
  return {
      {"epsilon", epsilon, "", "", "Relative reconstruction tolerance"},
      {"seed", "1", "", "", "Random seed"},
      {"paper-scale", "", "", "", "Use full-scale sizes instead of desk sizes", true},
      {"workers", "auto", "", "threads", "Worker threads; auto reads DELAYDIM_WORKERS, then the core count"},
      {"output", "", "", "path", "Output path or prefix; stdout when absent. A manifest is written to <output>.manifest.json"},
      {"config", "", "", "path", "Key-value file; keys are option names, command-line flags win"},
  };
}

std::string to_text(const TimeSeries& s) {
  std::ostringstream out;
  write_series(out, s);
  return out.str();
}

std::string report_json(const MiscReport& r) { return to_json(r) + "\n"; }

MiscOptions misc_options(const Run& run) {
  MiscOptions o;
  o.full_profile = run.flag("profile");
  return o;
}

// Writes a generated series and, with --analyze, its report.
void emit_generated(Run& run, const TimeSeries& s) {
  if (run.flag("analyze")) {
    const std::string rep = report_json(misc_epsilon(s, run.epsilon(), misc_options(run)));
    if (run.has("output")) {
      run.emit("", to_text(s));
      run.emit(".misc.json", rep);
    } else {
      run.emit("", rep);
    }
    return;
  }
  run.emit("", to_text(s));
}

const Param kAnalyze{"analyze", "", "", "", "Also compute misc_epsilon of the generated series", true};
const Param kProfile{"profile", "", "", "", "Report the full Delta_r profile", true};

// ---- misc

void cmd_misc(Run& run) {
  const auto paths = run.str_list("input");
  std::vector<SeriesFile> files;
  for (const auto& p : paths) files.push_back(read_series_file(run.input(p)));
  const std::string parts = run.str("parts");
  if (parts != "complex" && parts != "both" && parts != "real" && parts != "imag")
    throw UsageError("--parts must be complex, both, real or imag");
  const MiscOptions opt = misc_options(run);
  const double eps = run.epsilon();
  bool any_complex = false;
  for (const auto& f : files) any_complex = any_complex || f.is_complex;

  MiscReport rep;
  if (!any_complex) {
    std::vector<TimeSeries> s;
    for (const auto& f : files) s.push_back(f.real);
    rep = s.size() == 1 ? misc_epsilon(s.front(), eps, opt) : misc_epsilon(s, eps, opt);
  } else if (parts == "complex") {
    std::vector<ComplexSeries> s;
    for (const auto& f : files) s.push_back(f.is_complex ? f.complex : to_complex(f.real));
    rep = s.size() == 1 ? misc_epsilon(s.front(), eps, opt) : misc_epsilon(s, eps, opt);
  } else {
    std::vector<TimeSeries> s;
    for (const auto& f : files) {
      if (!f.is_complex) {
        s.push_back(f.real);
        continue;
      }
      auto [re, im] = split_complex(f.complex);
      if (parts == "real" || parts == "both") s.push_back(re);
      if (parts == "imag" || parts == "both") s.push_back(im);
    }
    rep = s.size() == 1 ? misc_epsilon(s.front(), eps, opt) : misc_epsilon(s, eps, opt);
  }
  run.emit("", report_json(rep));
}

// ---- bounds

std::string format_bound(double v) {
  std::string s = format_double(v);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void cmd_bounds(Run& run) {
  const long long r = run.integer("rank");
  if (r < 1) throw UsageError("--rank must be >= 1");
  const auto b = dimension_bounds(static_cast<std::size_t>(r));
  std::ostringstream out;
  out << "lower " << format_bound(b.lower) << ", upper " << b.upper << ", min_d0 " << b.min_d0
      << '\n';
  run.emit("", out.str());
}

// ---- jc, jc-bound

JCConfig jc_config(const Run& run) {
  JCConfig c;
  c.nbar = run.num("nbar");
  c.lambda = run.num("lambda");
  c.t0 = run.num("t0");
  c.dt = run.num("dt");
  c.samples = run.count("samples");
  c.weight_tol = run.num("weight-tol");
  c.normalized = run.flag("normalized");
  return c;
}

void cmd_jc(Run& run) { emit_generated(run, jc_inversion_series(jc_config(run))); }

void cmd_jc_bound(Run& run) {
  const double x = run.has("beta-hw") ? run.num("beta-hw") : nbar_to_beta_hw(run.num("nbar"));
  std::ostringstream out;
  out << "beta_hw " << format_double(x) << ", epsilon " << format_double(run.epsilon())
      << ", lower_bound " << format_double(jc_misc_lower_bound(x, run.epsilon())) << '\n';
  run.emit("", out.str());
}

// ---- transient

void cmd_transient(Run& run) {
  TransientConfig c;
  c.mu_dot_v = run.num("mu-dot-v");
  c.sigma = run.num("sigma");
  c.T = run.num("center");
  c.omega0 = run.num("omega0");
  emit_generated(run, rabi_erf_series(c, uniform_grid(run.num("t0"), run.num("t1"), run.count("samples"))));
}

// ---- haar-qubit

void cmd_haar(Run& run) {
  const auto s = random_unitary_qubit_series(run.count("steps"), run.seed());
  const char* tag[3] = {"x", "y", "z"};
  if (run.flag("analyze")) {
    nlohmann::ordered_json j;
    for (int p = 0; p < 3; ++p)
      j[std::string("sigma_") + tag[p]] =
          nlohmann::ordered_json::parse(to_json(misc_epsilon(s[p], run.epsilon(), misc_options(run))));
    if (run.has("output"))
      for (int p = 0; p < 3; ++p) run.emit(std::string("_") + tag[p] + ".csv", to_text(s[p]));
    run.emit(run.has("output") ? ".misc.json" : "", j.dump(2) + "\n");
    return;
  }
  for (int p = 0; p < 3; ++p)
    run.emit(std::string("_") + tag[p] + ".csv", to_text(s[p]), std::string("sigma_") + tag[p]);
}

// ---- heom, heom-scan

std::vector<Param> hierarchy_params() {
  return {
      {"zeta", "1", "", "omega0", "System-bath coupling"},
      {"omega0", "1", "", "natural units", "Two-level splitting"},
      {"delta", "-1", "", "omega0", "Bath detuning delta; negative selects gamma/4"},
      {"process", "t1", "", "", "t1 (inelastic), t2 (elastic) or hybrid"},
      {"elastic", "sigma-z", "", "", "Elastic coupling operator: sigma-z or identity"},
      {"depth", "4", "8", "", "Hierarchy depth D"},
      {"matsubara", "2", "5", "", "Matsubara terms M"},
      {"dt", "0.01", "", "1/omega0", "Integration step"},
      {"t-end", "150", "1500", "1/omega0", "Final time"},
      {"samples", "3000", "30000", "", "Samples in (0, t-end]"},
  };
}

HierarchyConfig hierarchy_config(const Run& run) {
  HierarchyConfig c;
  c.depth = run.count("depth");
  c.n_matsubara = run.count("matsubara");
  c.dt = run.num("dt");
  c.t_end = run.num("t-end");
  c.samples = run.count("samples");
  const std::string e = run.str("elastic");
  if (e == "sigma-z")
    c.convention = ElasticConvention::SigmaZ;
  else if (e == "identity")
    c.convention = ElasticConvention::LiteralIdentity;
  else
    throw UsageError("--elastic must be sigma-z or identity");
  return c;
}

void cmd_heom(Run& run) {
  const double kT = run.num("kT");
  if (!(kT > 0.0)) throw UsageError("--kT must be positive");
  BathSpec bath;
  bath.zeta = run.num("zeta");
  bath.gamma = run.num("gamma");
  bath.delta = run.num("delta");
  bath.beta = 1.0 / kT;
  bath.omega0 = run.num("omega0");
  const auto setup = process_setup(parse_process(run.str("process")));
  HeomDiagnostics diag;
  TimeSeries s = heom_integrate(setup.rho0, bath, setup.coupling, hierarchy_config(run),
                                setup.observable, &diag);
  for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
  emit_generated(run, s);
}

void cmd_heom_scan(Run& run) {
  const auto map = heatmap_spin_boson(run.list("gammas"), run.list("kts"), run.num("zeta"),
                                      parse_process(run.str("process")), hierarchy_config(run),
                                      run.epsilon(), run.workers());
  std::ostringstream out;
  write_heatmap(out, map);
  run.emit("", out.str());
}

// ---- pumpprobe, table1

std::vector<Param> dimer_params() {
  const DimerParams d;
  const PulsePair p;
  return {
      {"eps1-cm", format_double(d.eps1_cm), "", "cm^-1", "Site 1 energy"},
      {"eps2-cm", format_double(d.eps2_cm), "", "cm^-1", "Site 2 energy"},
      {"kappa-cm", format_double(d.kappa_cm), "", "cm^-1", "Dipole-dipole coupling"},
      {"omega1-cm", format_double(d.omega1_cm), "", "cm^-1", "Phonon mode 1"},
      {"omega2-cm", format_double(d.omega2_cm), "", "cm^-1", "Phonon mode 2"},
      {"g1", format_double(d.g1), "", "", "Exciton-phonon coupling, site 1"},
      {"g2", format_double(d.g2), "", "", "Exciton-phonon coupling, site 2"},
      {"sigma-p", format_double(p.sigma_fs), "", "fs", "Pulse width"},
      {"eta-p", format_double(p.eta), "", "eV ps/D", "Pulse strength"},
      {"mu-debye", format_double(p.mu_debye), "", "D", "Site transition dipole"},
      {"phase-steps", "4", "", "", "Probe phase cycle length, 2 or 4"},
      {"n-molecules", "20", "300", "", "Orientations in the ensemble"},
      {"n-delays", "400", "2800", "", "Pump-probe delays"},
      {"t0-fs", "500", "", "fs", "First delay"},
      {"t1-fs", "6098", "", "fs", "Last delay"},
  };
}

DimerParams dimer(const Run& run, int n_phonon) {
  DimerParams d;
  d.eps1_cm = run.num("eps1-cm");
  d.eps2_cm = run.num("eps2-cm");
  d.kappa_cm = run.num("kappa-cm");
  d.omega1_cm = run.num("omega1-cm");
  d.omega2_cm = run.num("omega2-cm");
  d.g1 = run.num("g1");
  d.g2 = run.num("g2");
  d.n_phonon = n_phonon;
  return d;
}

PulsePair pulses(const Run& run) {
  PulsePair p;
  p.sigma_fs = run.num("sigma-p");
  p.eta = run.num("eta-p");
  p.mu_debye = run.num("mu-debye");
  return p;
}

PumpProbeOptions pp_options(const Run& run) {
  PumpProbeOptions o;
  o.phase_steps = static_cast<int>(run.integer("phase-steps"));
  return o;
}

void cmd_pumpprobe(Run& run) {
  const long long n = run.integer("n-phonon");
  if (n < 0) throw UsageError("--n-phonon must be >= 0");
  const auto delays = uniform_delays(run.num("t0-fs"), run.num("t1-fs"), run.count("n-delays"));
  const auto params = dimer(run, static_cast<int>(n));
  const std::string which = run.str("experiment");
  std::vector<TimeSeries> signals;
  if (which == "all") {
    auto all = ensemble_signals(params, pulses(run), delays, run.count("n-molecules"), run.seed(),
                                run.workers(), pp_options(run));
    signals.assign(all.begin(), all.end());
  } else {
    signals.push_back(ensemble_signal(params, pulses(run), delays, run.count("n-molecules"),
                                      parse_experiment(which), run.seed(), run.workers(),
                                      pp_options(run)));
  }
  if (run.flag("analyze")) {
    auto scan = misc_subset_scan(signals, run.epsilon(), misc_options(run));
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(to_json(scan.best));
    std::string tags;
    for (std::size_t b = 0; b < signals.size(); ++b)
      if (scan.best_mask & (1u << b)) tags += (tags.empty() ? "" : ",") + signals[b].label;
    j["best_subset"] = tags;
    if (run.has("output"))
      for (const auto& s : signals) run.emit("_" + s.label + ".csv", to_text(s));
    run.emit(run.has("output") ? ".misc.json" : "", j.dump(2) + "\n");
    return;
  }
  for (const auto& s : signals) run.emit("_" + s.label + ".csv", to_text(s), s.label);
}

void cmd_table1(Run& run) {
  Table1Options opt;
  opt.n_molecules = run.count("n-molecules");
  opt.n_delays = run.count("n-delays");
  opt.t0_fs = run.num("t0-fs");
  opt.t1_fs = run.num("t1-fs");
  opt.seed = run.seed();
  opt.workers = run.workers();
  opt.pulses = pulses(run);
  const auto eps = run.list("epsilon");
  std::ostringstream out;
  out << "n_phonon,epsilon,R,misc,saturated,best_mask,sem_dimension";
  const bool check = run.paper_scale();
  if (check) out << ",reference,status";
  out << '\n';
  std::size_t failures = 0;
  for (long long n : run.int_list("n-phonons")) {
    if (n < 0) throw UsageError("--n-phonons entries must be >= 0");
    opt.params = dimer(run, static_cast<int>(n));
    const auto result = table1_pipeline(static_cast<int>(n), eps, opt);
    for (const auto& row : result.rows) {
      out << n << ',' << format_double(row.epsilon) << ',' << row.report.R << ','
          << format_double(row.report.misc) << ',' << (row.report.saturated ? 1 : 0) << ','
          << row.best_mask << ',' << row.sem_dimension;
      if (check) {
        double ref = NAN;
        if (n <= 4 && row.epsilon == 1e-1) ref = table1_reference(static_cast<int>(n)).misc_1e1;
        if (n <= 4 && row.epsilon == 1e-4) ref = table1_reference(static_cast<int>(n)).misc_1e4;
        if (std::isnan(ref)) {
          out << ",NA,NA";
        } else {
          const bool pass = std::abs(row.report.misc - ref) <= kTable1Tolerance;
          if (!pass) ++failures;
          out << ',' << format_double(ref) << ',' << (pass ? "PASS" : "FAIL");
        }
      }
      out << '\n';
    }
  }
  run.emit("", out.str());
  if (failures)
    throw Error(ErrorCode::InvalidInput, std::to_string(failures) +
                                             " rows differ from the reference by more than " +
                                             format_double(kTable1Tolerance));
}

// ---- ingest-check, heatmap

std::vector<Param> synthetic_params() {
  const SyntheticGridConfig c;
  return {
      {"synthetic", "", "", "", "Use a generated grid (clean cells plus a noisy nu3 band)", true},
      {"n-nu1", std::to_string(c.n_nu1), "", "", "Synthetic grid: nu1 points"},
      {"n-nu3", std::to_string(c.n_nu3), "", "", "Synthetic grid: nu3 points"},
      {"t2-samples", std::to_string(c.samples), "", "", "Synthetic grid: t2 samples"},
      {"noise-sigma", format_double(c.noise_sigma), "", "", "Synthetic grid: noise per part"},
      {"band-begin", std::to_string(c.band_begin), "", "", "Synthetic grid: first noisy nu3 row"},
      {"band-end", std::to_string(c.band_end), "", "", "Synthetic grid: one past the last noisy row"},
  };
}

SyntheticGridConfig synthetic_config(const Run& run) {
  SyntheticGridConfig c;
  c.n_nu1 = run.count("n-nu1");
  c.n_nu3 = run.count("n-nu3");
  c.samples = run.count("t2-samples");
  c.noise_sigma = run.num("noise-sigma");
  c.band_begin = run.count("band-begin");
  c.band_end = run.count("band-end");
  c.seed = run.seed();
  return c;
}

std::string grid_summary(const GridSeriesSet& g) {
  std::ostringstream out;
  out << "ok cells=" << g.cells.size() << " nu1=" << g.nu1.size() << " nu3=" << g.nu3.size()
      << " t2=" << g.t2.size() << " dt=" << format_double(g.cells.front().dt);
  return out.str();
}

std::string grid_text(const GridSeriesSet& g) {
  std::ostringstream out;
  write_grid(out, g);
  return out.str();
}

void cmd_ingest_check(Run& run) {
  if (run.flag("synthetic")) {
    if (!run.has("output")) throw UsageError("--synthetic needs --output");
    const auto g = synthetic_grid(synthetic_config(run));
    const std::string text = grid_text(g);
    run.emit("", text);
    const auto back = ingest_grid(run.str("output"));
    if (grid_text(back) != text)
      throw Error(ErrorCode::NumericalError, "grid changed in a write/ingest round trip");
    run.say(grid_summary(back) + " roundtrip=identical");
    return;
  }
  const auto g = ingest_grid(run.input(run.str("input")));
  if (run.has("output")) run.emit("", grid_text(g));
  run.say(grid_summary(g));
}

void cmd_heatmap(Run& run) {
  const auto g = run.flag("synthetic") ? synthetic_grid(synthetic_config(run))
                                       : ingest_grid(run.input(run.str("input")));
  const auto map = heatmap_misc(g, run.epsilon(), parse_parts(run.str("parts")), run.workers());
  std::ostringstream out;
  write_heatmap(out, map);
  run.emit("", out.str());
}

// ---- table of subcommands

std::vector<std::unique_ptr<Command>> commands() {
  std::vector<std::unique_ptr<Command>> c;
  auto add = [&](std::string name, std::string summary, std::string eps, std::vector<Param> params,
                 std::function<void(Run&)> action) {
    auto cmd = std::make_unique<Command>();
    cmd->name = std::move(name);
    cmd->summary = std::move(summary);
    cmd->params = common_params(eps);
    cmd->params.insert(cmd->params.end(), params.begin(), params.end());
    cmd->action = std::move(action);
    c.push_back(std::move(cmd));
  };
  auto join = [](std::vector<Param> a, const std::vector<Param>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };

  add("misc", "MISC_epsilon of one or more series files (several files form a tensor)", "1e-4",
      {{"input", "", "", "path[,path...]", "Series file(s): t,value or t,re,im"},
       {"parts", "complex", "", "", "Complex input: complex, both (re/im tensor), real or imag"},
       kProfile},
      cmd_misc);
  add("bounds", "Dimension bounds for a numerical rank", "1e-4",
      {{"rank", "", "", "", "Numerical rank R"}}, cmd_bounds);
  add("jc", "Jaynes-Cummings inversion series in a thermal field", "1e-4",
      {{"nbar", "2", "", "photons", "Mean thermal occupation"},
       {"lambda", "1", "", "1/time", "Vacuum Rabi coupling"},
       {"t0", "0", "", "time", "First sample time"},
       {"dt", "0.1", "", "time", "Sample spacing"},
       {"samples", "5000", "", "", "Number of samples"},
       {"weight-tol", "1e-15", "", "", "Photon-number weight cut"},
       {"normalized", "", "", "", "Divide by the summed retained weights", true},
       kAnalyze, kProfile},
      cmd_jc);
  add("jc-bound", "Analytic lower bound on MISC_epsilon for the Jaynes-Cummings series", "1e-4",
      {{"nbar", "2", "", "photons", "Mean thermal occupation"},
       {"beta-hw", "", "", "", "beta hbar omega; overrides --nbar when given"}},
      cmd_jc_bound);
  add("transient", "Rabi series under an erf-shaped pulse switch", "1e-4",
      {{"mu-dot-v", "0.5", "", "", "Dipole projection mu.v"},
       {"sigma", "0.05", "", "time", "Pulse width"},
       {"center", "2.5", "", "time", "Pulse center T"},
       {"omega0", "0", "", "1/time", "Transition frequency"},
       {"t0", "0", "", "time", "First sample time"},
       {"t1", "5", "", "time", "Last sample time"},
       {"samples", "500", "", "", "Number of samples"},
       kAnalyze, kProfile},
      cmd_transient);
  add("haar-qubit", "Pauli expectation series under i.i.d. Haar-random qubit unitaries", "1e-4",
      {{"steps", "2000", "", "", "Number of unitary steps"}, kAnalyze, kProfile}, cmd_haar);
  add("heom", "Spin-boson expectation series from the reduced hierarchy", "1e-4",
      join({{"gamma", "1", "", "omega0", "Inverse bath correlation time"},
            {"kT", "1", "", "hbar omega0", "Temperature"},
            kAnalyze, kProfile},
           hierarchy_params()),
      cmd_heom);
  add("heom-scan", "MISC_epsilon heat map over a gamma x kT grid", "1e-4",
      join({{"gammas", "0.25,0.5,1,2", "", "omega0", "Comma-separated gamma values"},
            {"kts", "1,2,4", "", "hbar omega0", "Comma-separated temperatures"}},
           hierarchy_params()),
      cmd_heom_scan);
  add("pumpprobe", "Orientation-averaged pump-probe signals of the Frenkel-Holstein dimer", "1e-4",
      join({{"n-phonon", "0", "", "", "Fock cutoff per mode"},
            {"experiment", "all", "", "", "mm, mp, pm, pp or all"},
            kAnalyze, kProfile},
           dimer_params()),
      cmd_pumpprobe);
  add("table1", "Best-subset MISC_epsilon of the four pump-probe signals per phonon cutoff",
      "0.1,1e-4",
      join({{"n-phonons", "0,1,2", "0,1,2,3,4", "", "Comma-separated Fock cutoffs"}},
           dimer_params()),
      cmd_table1);
  add("ingest-check", "Validate a long-CSV grid file, or write and re-read a synthetic one", "1e-4",
      join({{"input", "", "", "path", "Grid file with columns nu1,nu3,t2,re,im"}}, synthetic_params()),
      cmd_ingest_check);
  add("heatmap", "Per-cell MISC_epsilon over a grid file", "1e-4",
      join({{"input", "", "", "path", "Grid file with columns nu1,nu3,t2,re,im"},
            {"parts", "both", "", "", "real, imag or both (two-block tensor)"}},
           synthetic_params()),
      cmd_heatmap);
  return c;
}

std::string normalize_key(std::string k) {
  for (char& ch : k)
    if (ch == '_') ch = '-';
  return k;
}

std::map<std::string, std::string> resolve(Command& cmd) {
  KeyValues config;
  const auto& cfg_path = cmd.cli_values["config"];
  if (!cfg_path.empty()) {
    for (const auto& [k, v] : read_keyvalue_file(cfg_path)) config[normalize_key(k)] = v;
    for (const auto& [k, v] : config) {
      bool known = false;
      for (const auto& p : cmd.params) known = known || (p.name == k && k != "config");
      if (!known) throw UsageError(cfg_path + ": unknown key '" + k + "' for " + cmd.name);
    }
  }
  auto truthy = [](const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no" || v.empty()) return false;
    throw UsageError("not a boolean: " + v);
  };
  bool paper = cmd.cli_flags["paper-scale"] || (config.count("paper-scale") && truthy(config["paper-scale"]));
  std::map<std::string, std::string> out;
  for (const auto& p : cmd.params) {
    const bool on_cli = cmd.options[p.name]->count() > 0;
    if (p.flag) {
      bool v = cmd.cli_flags[p.name];
      if (!on_cli && config.count(p.name)) v = truthy(config[p.name]);
      out[p.name] = v ? "true" : "false";
    } else if (on_cli) {
      out[p.name] = cmd.cli_values[p.name];
    } else if (config.count(p.name)) {
      out[p.name] = config[p.name];
    } else if (paper && !p.paper.empty()) {
      out[p.name] = p.paper;
    } else {
      out[p.name] = p.fallback;
    }
  }
  return out;
}

std::string quote(const std::string& msg) {
  std::string out;
  for (char ch : msg) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch == '\n' ? ' ' : ch;
  }
  return out;
}

int fail(const std::string& code, const std::string& message, int status) {
  std::cerr << "error code=" << code << " message=\"" << quote(message) << "\"\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-independent simulation complexity of time series", "delaydim"};
  app.set_version_flag("--version", DELAYDIM_VERSION);
  app.require_subcommand(1);
  auto cmds = commands();
  for (auto& cmd : cmds) {
    CLI::App* sub = app.add_subcommand(cmd->name, cmd->summary);
    for (const auto& p : cmd->params) {
      if (p.flag)
        cmd->options[p.name] = sub->add_flag("--" + p.name, cmd->cli_flags[p.name], describe(p));
      else
        cmd->options[p.name] =
            sub->add_option("--" + p.name, cmd->cli_values[p.name], describe(p))->type_name("VALUE");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("UsageError", e.what(), 2);
  }

  Command* chosen = nullptr;
  for (auto& cmd : cmds)
    if (app.got_subcommand(cmd->name)) chosen = cmd.get();
  try {
    Run run(chosen->name, resolve(*chosen));
    if (run.has("config")) run.input(run.str("config"));
    chosen->action(run);
    run.write_manifest();
  } catch (const UsageError& e) {
    return fail("UsageError", e.what(), 2);
  } catch (const Error& e) {
    return fail(to_string(e.code()), e.what(), 1);
  } catch (const std::exception& e) {
    return fail("InternalError", e.what(), 1);
  }
  return 0;
}
