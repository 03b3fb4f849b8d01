// Command line front end: one subcommand per computation, CSV for sweeps and
// JSON for scalar results. Every output records the run manifest.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "latbose/bogoliubov.hpp"
#include "latbose/ed.hpp"
#include "latbose/errors.hpp"
#include "latbose/lattice.hpp"
#include "latbose/lower_bound.hpp"
#include "latbose/parallel.hpp"
#include "latbose/scattering.hpp"
#include "latbose/spectra.hpp"

#ifndef LATBOSE_VERSION
#define LATBOSE_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace latbose;

namespace {

constexpr int kExitCompute = 1;
constexpr int kExitValidation = 2;
constexpr int kExitUsage = 64;

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

struct Common {
  std::string config;
  unsigned threads = 0;
  std::uint64_t seed = 20240611;
  std::string output;
  std::optional<double> U;
};

struct Manifest {
  std::string subcommand;
  json params = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double wall() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  json to_json(const Common& c) const {
    json m;
    m["tool"] = "latbose";
    m["version"] = LATBOSE_VERSION;
    m["subcommand"] = subcommand;
    m["config"] = c.config;
    m["threads"] = parallel::threads();
    m["seed"] = c.seed;
    m["parameters"] = params;
    m["output"] = c.output.empty() ? "-" : c.output;
    m["wall_time_s"] = wall();
    return m;
  }
};

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
      file_.open(path);
      if (!file_) fail(ErrorKind::InvalidArgument, "cannot write output '" + path + "'");
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

/// CSV table with manifest and column units as leading '#' comments.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::string> units;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os, const Manifest& m, const Common& c) const {
    os << "# manifest: " << m.to_json(c).dump() << '\n';
    os << "# units:";
    for (std::size_t i = 0; i < columns.size(); ++i) os << ' ' << columns[i] << '=' << units[i];
    os << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
  }
};

void write_json(json body, const Manifest& m, const Common& c) {
  body["manifest"] = m.to_json(c);
  Sink sink(c.output);
  sink.out() << body.dump(2) << '\n';
}

void write_table(const Table& t, const Manifest& m, const Common& c) {
  Sink sink(c.output);
  t.write(sink.out(), m, c);
}

LatticeModel load_model(const Common& c) {
  if (c.config.empty()) fail(ErrorKind::InvalidConfig, "--config is required");
  LatticeModel model = load_lattice(c.config);
  if (c.U) model = model.with_U(*c.U);
  return model;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size())
      fail(ErrorKind::InvalidArgument, "cannot parse integer list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorKind::InvalidArgument, "empty integer list");
  return out;
}

// ---- scattering ---------------------------------------------------------------

struct ScatteringOpts {
  double target = 1e-6;
};

json scattering_json(const LatticeModel& model, const ScatteringOpts& o) {
  QuadratureParams qp;
  qp.target_rel_error = o.target;
  const ScatteringData s = scattering_data(model, qp);
  json j;
  j["U"] = s.U;
  j["gamma"] = s.gamma;
  j["a"] = s.a;
  j["eight_pi_a"] = s.eight_pi_a();
  j["phi0"] = s.phi0;
  j["w0"] = s.w0;
  j["gamma_rel_error"] = s.rel_error_estimate;
  j["c_gap"] = model.c_gap();
  j["hopping_length"] = model.hopping_length();
  return j;
}

// ---- upper bound ---------------------------------------------------------------

struct UpperOpts {
  double rho_min = 1e-6;
  double rho_max = 1e-2;
  int points = 0;
  std::string finite_l;
};

Table upper_bound_table(const LatticeModel& model, const UpperOpts& o, Manifest& m) {
  const ScatteringData scat = scattering_data(model);
  Table t;
  if (!o.finite_l.empty()) {
    t.columns = {"rho", "L", "N0", "depletion", "energy_density", "e_psi", "difference"};
    t.units = {"particles/site", "sites", "particles", "particles", "hopping/site",
               "hopping/site", "hopping/site"};
    const auto Ls = parse_int_list(o.finite_l);
    const double rho = o.rho_max;
    const ThermoResult th = trial_energy_thermo(model, rho, scat);
    for (int L : Ls) {
      const FiniteTrialResult f = trial_energy_finite(model, {rho, L}, scat);
      t.rows.push_back({num(rho), std::to_string(L), num(f.N0), num(f.depletion),
                        num(f.energy_density), num(th.e_psi),
                        num(std::abs(f.energy_density - th.e_psi))});
    }
    return t;
  }
  const UpperBoundSweep sweep = upper_bound_sweep(model, scat, o.rho_min, o.rho_max, o.points);
  t.columns = {"rho", "e_psi", "ratio", "leading_term", "remainder", "e_lim",
               "depletion_density", "rel_error"};
  t.units = {"particles/site", "hopping/site", "1", "hopping/site",
             "hopping/site", "hopping/site", "particles/site", "1"};
  for (const auto& p : sweep.points)
    t.rows.push_back({num(p.rho), num(p.e_psi), num(p.ratio), num(p.leading), num(p.remainder),
                      num(p.e_lim), num(p.diagnostics.depletion_density), num(p.rel_error)});
  m.params["fit_exponent"] = sweep.fit_exponent;
  m.params["fit_prefactor"] = sweep.fit_prefactor;
  m.params["depletion_exponent"] = sweep.depletion_exponent;
  return t;
}

// |Lambda|^{-1} sum_{k != 0} 1/lambda_k in pairwise order.
double trace_power_inverse(const SpectrumResult& s) {
  std::vector<double> inv;
  for (std::size_t k = 1; k < s.eigenvalues.size(); ++k) inv.push_back(1.0 / s.eigenvalues[k]);
  return parallel::pairwise_sum(inv) / static_cast<double>(s.eigenvalues.size());
}

// ---- spectra -------------------------------------------------------------------

struct SpectraOpts {
  std::string kind = "neumann";
  std::string l_list = "2,4,6,8";
  bool eigenvalues = false;
};

Table spectra_table(const LatticeModel& model, const SpectraOpts& o) {
  const LaplacianKind kind = parse_laplacian_kind(o.kind);
  Table t;
  if (o.eigenvalues) {
    t.columns = {"kind", "l", "index", "eigenvalue"};
    t.units = {"-", "sites", "-", "hopping"};
  } else {
    t.columns = {"l",         "kind",      "sites",           "gap",
                 "trace_inv", "min_nonzero", "gap_lower_bound", "scaled_gap"};
    t.units = {"sites",   "-",       "sites",   "hopping", "1/hopping per site",
               "hopping", "hopping", "hopping"};
  }
  for (int ell : parse_int_list(o.l_list)) {
    SpectrumResult s;
    switch (kind) {
      case LaplacianKind::periodic: s = periodic_spectrum(model, ell); break;
      case LaplacianKind::neumann: s = neumann_spectrum(model, ell); break;
      case LaplacianKind::neumann_special: s = special_neumann_eigs(model, ell); break;
    }
    if (o.eigenvalues) {
      for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
        t.rows.push_back({o.kind, std::to_string(ell), std::to_string(k), num(s.eigenvalues[k])});
      continue;
    }
    const double side = ell + 1.0;
    const auto nonzero = std::find_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                      [](double v) { return v > 1e-10; });
    t.rows.push_back({std::to_string(ell), o.kind, std::to_string(s.eigenvalues.size()),
                      num(s.gap), num(trace_power_inverse(s)),
                      num(nonzero == s.eigenvalues.end() ? 0.0 : *nonzero),
                      num(model.c_gap() / (side * side)), num(s.gap * side * side)});
  }
  return t;
}

// ---- certify -------------------------------------------------------------------

struct CertifyOpts {
  int n = 2;
  int ell = 4;
  std::optional<double> mu;
  bool scan = false;
  bool with_ed = false;
  std::uint64_t max_dim = 10'000'000;
};

json certify_json(const LatticeModel& model, const CertifyOpts& o, std::uint64_t seed) {
  const ScatteringData scat = scattering_data(model);
  const SpectrumResult spec = neumann_spectrum(model, o.ell);
  const CertificateResult c = o.scan && !o.mu
                                  ? certificate_scan(model, o.n, o.ell, spec, scat)
                                  : certificate(model, {o.n, o.ell, o.mu}, spec, scat);
  json j;
  j["n"] = o.n;
  j["l"] = o.ell;
  j["U"] = model.U();
  j["mu_window"] = {c.window.mu_min, c.window.mu_max};
  j["gap"] = c.window.gap;
  j["gap_lower_bound"] = c.window.gap_lower_bound;
  j["mu_used"] = c.mu;
  j["S"] = c.bogoliubov_sum;
  j["excited"] = c.excited;
  j["lb_energy"] = c.lb_energy;
  if (o.with_ed) {
    LanczosParams lp;
    lp.seed = seed;
    lp.want_vector = false;
    const auto H = build_hamiltonian(model, o.ell, o.n, model.U(), BoundaryCondition::neumann,
                                     EDConfig{o.max_dim});
    const EDResult e = ground_state_energy(H, lp);
    j["ed_energy"] = e.e0;
    j["slack"] = e.e0 - c.lb_energy;
  }
  return j;
}

// ---- ed ------------------------------------------------------------------------

struct EdOpts {
  int n = 2;
  int ell = 2;
  std::string bc = "neumann";
  std::string sweep_l;
  std::uint64_t max_dim = 2'000'000;
};

Table ed_table(const LatticeModel& model, const EdOpts& o, std::uint64_t seed) {
  const BoundaryCondition bc = parse_boundary(o.bc);
  std::vector<int> ells = o.sweep_l.empty() ? std::vector<int>{o.ell} : parse_int_list(o.sweep_l);
  Table t;
  t.columns = {"n", "l", "u", "bc", "dim", "e0", "residual"};
  t.units = {"particles", "sites", "hopping", "-", "states", "hopping", "hopping"};
  LanczosParams lp;
  lp.seed = seed;
  lp.want_vector = false;
  for (int ell : ells) {
    const auto H = build_hamiltonian(model, ell, o.n, model.U(), bc, EDConfig{o.max_dim});
    const EDResult r = ground_state_energy(H, lp);
    t.rows.push_back({std::to_string(o.n), std::to_string(ell), num(model.U()), o.bc,
                      std::to_string(r.basis_dim), num(r.e0), num(r.residual)});
  }
  return t;
}

const char* kColumnHelp = R"(Output columns (energies in units of the hopping strength t,
densities in particles per site):
  scattering  JSON: gamma [1/hopping], a [lattice units], eight_pi_a [hopping],
              phi0, w0 [dimensionless]
  upper-bound CSV:  rho [particles/site], e_psi [hopping/site], ratio [1],
              leading_term = 4 pi a rho^2, remainder, e_lim [hopping/site],
              depletion_density [particles/site], rel_error [1];
              with --finite-l: L [sites], N0, depletion [particles],
              energy_density, e_psi, difference [hopping/site]
  spectra     CSV:  l [sites], kind, sites, gap [hopping],
              trace_inv = sum_{k>0} 1/lambda_k / sites [1/hopping per site],
              min_nonzero [hopping], gap_lower_bound = c_gap/(l+1)^2 [hopping],
              scaled_gap = gap (l+1)^2 [hopping]
  certify     JSON: mu_window, mu_used, S, lb_energy, ed_energy, slack [hopping]
  ed          CSV:  n [particles], l [sites], u [hopping], bc, dim [states],
              e0, residual [hopping]
Exit codes: 0 success, 1 computation failure, 2 invalid input, 64 usage error.)";

void emit_error(const char* category, const std::string& kind, const std::string& message) {
  json e;
  e["error"] = category;
  e["kind"] = kind;
  e["message"] = message;
  std::cerr << e.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilute Bose gas on Bravais lattices: scattering data, Bogoliubov upper bounds, "
               "Laplacian spectra, lower-bound certificates and exact diagonalization."};
  app.footer(kColumnHelp);
  app.require_subcommand(1);
  app.set_version_flag("--version", LATBOSE_VERSION);

  Common common;
  std::optional<double> u_flag;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Lattice config JSON");
    sub->add_option("--threads", common.threads, "Worker threads (0 = hardware concurrency)");
    sub->add_option("--seed", common.seed, "Seed for Lanczos start vectors");
    sub->add_option("--output", common.output, "Output file (default: standard output)");
    sub->add_option("--u", u_flag, "Override the on-site repulsion U of the config");
  };

  ScatteringOpts scat_o;
  auto* scat_cmd = app.add_subcommand("scattering", "Scattering length and related constants (JSON)");
  add_common(scat_cmd);
  scat_cmd->add_option("--target-rel-error", scat_o.target, "Quadrature target relative error");

  UpperOpts up_o;
  auto* up_cmd = app.add_subcommand("upper-bound", "Bogoliubov trial-state energies (CSV)");
  add_common(up_cmd);
  up_cmd->add_option("--rho-min", up_o.rho_min, "Smallest density");
  up_cmd->add_option("--rho-max", up_o.rho_max, "Largest density (the density for --finite-l)");
  up_cmd->add_option("--points", up_o.points, "Number of densities (0: 8 per decade)");
  up_cmd->add_option("--finite-l,--finite-L", up_o.finite_l, "Comma list of box sizes for finite-L energies");

  SpectraOpts sp_o;
  auto* sp_cmd = app.add_subcommand("spectra", "Laplacian spectra and gaps (CSV)");
  add_common(sp_cmd);
  sp_cmd->add_option("--kind", sp_o.kind, "periodic, neumann or neumann_special");
  sp_cmd->add_option("--l-list", sp_o.l_list, "Comma list of even box sizes");
  sp_cmd->add_flag("--eigenvalues", sp_o.eigenvalues, "Emit every eigenvalue instead of a summary");

  CertifyOpts ce_o;
  double mu_value = 0.0;
  auto* ce_cmd = app.add_subcommand("certify", "Lower-bound certificate in a Neumann box (JSON)");
  add_common(ce_cmd);
  ce_cmd->add_option("--n", ce_o.n, "Particle number");
  ce_cmd->add_option("--l", ce_o.ell, "Even box size");
  auto* mu_opt = ce_cmd->add_option("--mu", mu_value, "Chemical potential (default: window midpoint)");
  ce_cmd->add_flag("--scan", ce_o.scan, "Pick the best of 16 mu values in the window");
  ce_cmd->add_flag("--with-ed", ce_o.with_ed, "Also compute the exact ground state energy");
  ce_cmd->add_option("--max-dim", ce_o.max_dim, "Fock dimension cap for --with-ed");

  EdOpts ed_o;
  auto* ed_cmd = app.add_subcommand("ed", "Exact diagonalization ground state energies (CSV)");
  add_common(ed_cmd);
  ed_cmd->add_option("--n", ed_o.n, "Particle number");
  ed_cmd->add_option("--l", ed_o.ell, "Even box size");
  ed_cmd->add_option("--bc", ed_o.bc, "periodic or neumann");
  ed_cmd->add_option("--sweep-l", ed_o.sweep_l, "Comma list of box sizes (overrides --l)");
  ed_cmd->add_option("--max-dim", ed_o.max_dim, "Fock dimension cap");

  std::string sweep_dir = "latbose_out";
  auto* all_cmd = app.add_subcommand("sweep-all", "Run every computation with defaults into a directory");
  add_common(all_cmd);
  all_cmd->add_option("--dir", sweep_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  common.U = u_flag;
  if (mu_opt->count() > 0) ce_o.mu = mu_value;

  try {
    parallel::set_threads(common.threads);
    Manifest m;
    if (*scat_cmd) {
      m.subcommand = "scattering";
      m.params["target_rel_error"] = scat_o.target;
      write_json(scattering_json(load_model(common), scat_o), m, common);
    } else if (*up_cmd) {
      m.subcommand = "upper-bound";
      m.params = {{"rho_min", up_o.rho_min}, {"rho_max", up_o.rho_max},
                  {"points", up_o.points}, {"finite_l", up_o.finite_l}};
      const Table t = upper_bound_table(load_model(common), up_o, m);
      write_table(t, m, common);
      if (!common.output.empty() && up_o.finite_l.empty()) {
        std::ofstream summary(common.output + ".summary.json");
        summary << json{{"fit_exponent", m.params["fit_exponent"]},
                        {"fit_prefactor", m.params["fit_prefactor"]},
                        {"depletion_exponent", m.params["depletion_exponent"]}}
                       .dump(2)
                << '\n';
      }
    } else if (*sp_cmd) {
      m.subcommand = "spectra";
      m.params = {{"kind", sp_o.kind}, {"l_list", sp_o.l_list}, {"eigenvalues", sp_o.eigenvalues}};
      write_table(spectra_table(load_model(common), sp_o), m, common);
    } else if (*ce_cmd) {
      m.subcommand = "certify";
      m.params = {{"n", ce_o.n}, {"l", ce_o.ell}, {"scan", ce_o.scan}, {"with_ed", ce_o.with_ed}};
      if (ce_o.mu) m.params["mu"] = *ce_o.mu;
      write_json(certify_json(load_model(common), ce_o, common.seed), m, common);
    } else if (*ed_cmd) {
      m.subcommand = "ed";
      m.params = {{"n", ed_o.n}, {"l", ed_o.ell}, {"bc", ed_o.bc}, {"sweep_l", ed_o.sweep_l},
                  {"max_dim", ed_o.max_dim}};
      write_table(ed_table(load_model(common), ed_o, common.seed), m, common);
    } else if (*all_cmd) {
      const LatticeModel model = load_model(common);
      fs::create_directories(sweep_dir);
      const fs::path dir(sweep_dir);
      Common c = common;

      Manifest ms;
      ms.subcommand = "scattering";
      c.output = (dir / "scattering.json").string();
      write_json(scattering_json(model, {}), ms, c);

      for (const char* kind : {"periodic", "neumann", "neumann_special"}) {
        Manifest mk;
        mk.subcommand = "spectra";
        SpectraOpts so;
        so.kind = kind;
        mk.params = {{"kind", so.kind}, {"l_list", so.l_list}};
        c.output = (dir / (std::string("spectra_") + kind + ".csv")).string();
        write_table(spectra_table(model, so), mk, c);
      }

      Manifest mu;
      mu.subcommand = "upper-bound";
      UpperOpts uo;
      mu.params = {{"rho_min", uo.rho_min}, {"rho_max", uo.rho_max}};
      const Table ut = upper_bound_table(model, uo, mu);
      c.output = (dir / "upper_bound.csv").string();
      write_table(ut, mu, c);

      Manifest me;
      me.subcommand = "ed";
      EdOpts eo;
      eo.sweep_l = std::to_string(model.hopping_length());
      me.params = {{"n", eo.n}, {"bc", eo.bc}, {"sweep_l", eo.sweep_l}};
      c.output = (dir / "ed.csv").string();
      write_table(ed_table(model, eo, common.seed), me, c);
    }
  } catch (const Error& e) {
    if (is_validation(e.kind())) {
      emit_error("ValidationError", std::string(to_string(e.kind())), e.what());
      return kExitValidation;
    }
    emit_error("ComputeError", std::string(to_string(e.kind())), e.what());
    return kExitCompute;
  } catch (const std::exception& e) {
    emit_error("ComputeError", "Internal", e.what());
    return kExitCompute;
  }
  return 0;
}
