// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "latbose/bogoliubov.hpp"
#include "latbose/ed.hpp"
#include "latbose/fit.hpp"
#include "latbose/lower_bound.hpp"
#include "latbose/scattering.hpp"
#include "latbose/spectra.hpp"
#include "models.hpp"

using namespace latbose;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<LatticeModel> bundled() {
  const std::string dir = LATBOSE_CONFIG_DIR;
  return {load_lattice(dir + "/cubic.json"), load_lattice(dir + "/orthorhombic.json"),
          load_lattice(dir + "/cubic_nnn.json")};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1. scattering identities and quadrature reproducibility
Outcome scattering_identities() {
  double worst_identity = 0.0, worst_refine = 0.0;
  for (const LatticeModel& m : bundled()) {
    const double gamma = compute_gamma(m);
    QuadratureParams fine;
    fine.gauss_order = 12;
    fine.singularity_radius = 1e-5;
    fine.target_rel_error = 1e-9;
    worst_refine = std::max(worst_refine, rel(compute_gamma(m, fine), gamma));
    for (double U : {0.1, 1.0, 4.0}) {
      const ScatteringData s = scattering_from_gamma(gamma, U);
      worst_identity = std::max({worst_identity, rel(s.eight_pi_a(), U * s.phi0),
                                 rel(s.eight_pi_a(), U / (1 + U * gamma)),
                                 std::abs(s.phi0 + s.w0 - 1.0),
                                 rel(s.w0, U * gamma / (1 + U * gamma))});
    }
  }
  return {worst_identity <= 1e-12 && worst_refine <= 1e-5,
          fmt("identity error %.2e, refinement change %.2e", worst_identity, worst_refine)};
}

// Midpoint Riemann sum of 1/eps for the cubic lattice. The singular part is
// removed by subtracting exp(-alpha p^2)/p^2 on the grid and adding back its
// exact integral 2 pi^{3/2}/sqrt(alpha); the Gaussian is negligible at the zone faces.
double riemann_gamma(int N, double alpha) {
  const double h = 2 * kPi / N;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = -kPi + (i + 0.5) * h;
    const double sx = std::pow(std::sin(x / 2), 2);
    for (int j = 0; j < N; ++j) {
      const double y = -kPi + (j + 0.5) * h;
      const double sy = std::pow(std::sin(y / 2), 2);
      for (int k = 0; k < N; ++k) {
        const double z = -kPi + (k + 0.5) * h;
        const double p2 = x * x + y * y + z * z;
        const double e = 4 * (sx + sy + std::pow(std::sin(z / 2), 2));
        sum += 1.0 / e - std::exp(-alpha * p2) / p2;
      }
    }
  }
  const double mean = (sum * h * h * h + 2 * std::pow(kPi, 1.5) / std::sqrt(alpha)) /
                      std::pow(2 * kPi, 3);
  return 0.5 * mean;
}

// 2. gamma against the Riemann-sum oracle
Outcome gamma_oracle() {
  const double gamma = compute_gamma(testing::cubic());
  const double oracle = riemann_gamma(160, 4.0);
  const double r = rel(gamma, oracle);
  return {r <= 1e-4, fmt("gamma %.9f, oracle %.9f, rel %.2e", gamma, oracle, r)};
}

// 3. closed-form special Neumann spectrum
Outcome neumann_closed_form() {
  double worst = 0.0;
  for (const LatticeModel& m : bundled())
    for (int ell : {2, 4, 8}) {
      const SpectrumResult closed = special_neumann_eigs(m, ell);
      const SpectrumResult dense =
          dense_spectrum(build_laplacian(m, ell, LaplacianKind::neumann_special));
      for (std::size_t k = 0; k < dense.eigenvalues.size(); ++k)
        worst = std::max(worst, std::abs(closed.eigenvalues[k] - dense.eigenvalues[k]));
    }
  const auto f = neumann_1d_factors(1.0, 2);
  const bool exact = f == std::vector<double>{0.0, 1.0, 3.0};
  return {worst <= 1e-10 && exact,
          fmt("max deviation %.2e, factors {%.17g, %.17g, %.17g}", worst, f[0], f[1], f[2])};
}

// 4. eigenvalue ordering
Outcome operator_ordering() {
  const std::vector<LatticeModel> models{testing::cubic(), testing::orthorhombic(),
                                         testing::cubic_nnn(), testing::fcc_like(),
                                         testing::anisotropic(0.5, 1.0, 2.0)};
  double worst = std::numeric_limits<double>::infinity();
  for (const LatticeModel& m : models) {
    try {
      const ComparisonReport r = comparison_check(m, 4);
      worst = std::min({worst, r.min_slack_special_neumann, r.min_slack_neumann_periodic});
    } catch (const Error& e) {
      return {false, e.what()};
    }
  }
  return {worst >= -1e-10, fmt("min slack %.3e over 5 lattices", worst)};
}

// 5. spectral gap bounds
Outcome gap_bounds() {
  std::vector<int> ells;
  for (int l = 2; l <= 20; l += 2) ells.push_back(l);
  double spread = 0.0;
  for (const LatticeModel& m : bundled()) {
    try {
      const GapReport r = gap_check(m, ells);
      double lo = r.rows[0].scaled, hi = lo;
      for (const GapRow& row : r.rows) {
        lo = std::min(lo, row.scaled);
        hi = std::max(hi, row.scaled);
      }
      spread = std::max(spread, hi / lo - 1.0);
    } catch (const Error& e) {
      return {false, e.what()};
    }
  }
  return {spread <= 0.2, fmt("gap bound holds; max spread of gap (l+1)^2 is %.1f%%", 100 * spread)};
}

// 6. trace-inverse comparison
Outcome trace_comparison() {
  const TraceReport r = trace_inverse_comparison(testing::cubic(), {4, 6, 8, 10, 12, 14});
  bool positive = true, decreasing = true;
  std::vector<double> ell, scaled;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    positive = positive && r.rows[i].difference > 0.0;
    if (i > 0) decreasing = decreasing && r.rows[i].difference < r.rows[i - 1].difference;
    ell.push_back(r.rows[i].ell);
    scaled.push_back(r.rows[i].scaled);
  }
  const double slope = power_law_fit(ell, scaled).exponent;
  return {positive && decreasing && slope <= 0.05,
          fmt("d(4) = %.4g, d(14) = %.4g, log-log slope of d (l+1)^{1/3} = %.3f",
              r.rows.front().difference, r.rows.back().difference, slope)};
}

// 7. trace powers
Outcome trace_powers() {
  std::vector<double> t2, t3;
  for (int ell = 6; ell <= 14; ell += 2) {
    const SpectrumResult s = neumann_spectrum(testing::cubic(), ell);
    t2.push_back(trace_power(s, 2.0) * std::pow(ell, -0.5));
    t3.push_back(trace_power(s, 3.0) * std::pow(ell, -1.0));
  }
  const auto variation = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo - 1.0;
  };
  const double v2 = variation(t2), v3 = variation(t3);
  return {v2 < 0.5 && v3 < 0.5,
          fmt("variation %.1f%% (nu = 2, l^{-1/2}), %.1f%% (nu = 3, l^{-1})", 100 * v2, 100 * v3)};
}

// 8. thermodynamic upper bound
Outcome upper_bound() {
  const LatticeModel m = testing::cubic();
  const ScatteringData s = scattering_data(m);
  const UpperBoundSweep sweep = upper_bound_sweep(m, s, 1e-6, 1e-2, 0);
  bool above = true;
  for (const ThermoResult& t : sweep.points) above = above && t.e_psi >= t.leading;
  const double ratio = sweep.points.front().ratio;
  const bool exponent_ok = sweep.fit_exponent >= 0.40 && sweep.fit_exponent <= 0.60;
  return {above && std::abs(ratio - 1.0) <= 1e-2 && exponent_ok,
          fmt("%zu densities, ratio at 1e-6 = %.6f, correction exponent %.3f",
              sweep.points.size(), ratio, sweep.fit_exponent)};
}

// 9. depletion scaling
Outcome depletion_scaling() {
  const LatticeModel m = testing::cubic();
  const ScatteringData s = scattering_data(m);
  std::vector<double> rho, dep;
  for (double r : logspace(1e-6, 1e-4, 9)) {
    rho.push_back(r);
    dep.push_back(remainder_diagnostics(m, r, s).depletion_density);
  }
  const double e = power_law_fit(rho, dep).exponent;
  return {e >= 1.35 && e <= 1.65, fmt("depletion exponent %.4f over [1e-6, 1e-4]", e)};
}

// 10. finite-L trial energy
Outcome finite_trial() {
  const LatticeModel m = testing::cubic();
  const ScatteringData s = scattering_data(m);
  const double rho = 1e-2;
  const double e_psi = trial_energy_thermo(m, rho, s).e_psi;
  std::vector<double> d;
  for (int L : {16, 32, 64})
    d.push_back(std::abs(trial_energy_finite(m, {rho, L}, s).energy_density - e_psi));
  const bool decreasing = d[1] < d[0] && d[2] < d[1];
  return {decreasing && d[2] <= 0.01 * e_psi,
          fmt("|diff| = %.3e, %.3e, %.3e; final/e_psi = %.2e", d[0], d[1], d[2], d[2] / e_psi)};
}

// 11. two-body extrapolation
Outcome two_body() {
  const LatticeModel m = testing::cubic();
  const TwoBodyExtraction x = two_body_scattering_extraction(m, 4.0, {4, 6, 8, 10});
  const double target = scattering_data(m).eight_pi_a();
  const double r = rel(x.e_inf, target);
  return {r <= 0.03, fmt("E0 |L| -> %.6f (degree %d), 8 pi a = %.6f, rel %.2e", x.e_inf,
                         x.fit_degree, target, r)};
}

// 12. lower-bound certificate
Outcome certificate_vs_ed() {
  const double U = 0.1;
  const LatticeModel m = testing::cubic(U);
  const ScatteringData s = scattering_data(m);
  EDConfig config;
  config.max_dimension = 10'000'000;
  LanczosParams params;
  params.want_vector = false;
  bool ok = true;
  std::string detail;
  for (auto [n, ell] : {std::pair{2, 4}, std::pair{3, 6}}) {
    const CertificateResult c = certificate(m, {n, ell, std::nullopt}, neumann_spectrum(m, ell), s);
    const EDResult ed =
        ground_state_energy(build_hamiltonian(m, ell, n, U, BoundaryCondition::neumann, config),
                            params);
    const double volume = std::pow(ell + 1.0, 3);
    const double lead = U * n * (n - 1) / (2 * volume);
    ok = ok && c.lb_energy <= ed.e0 && c.lb_energy >= 0.5 * lead;
    detail += fmt("(n=%d, l=%d) lb %.5e, ED %.5e, slack %.2e, lb/lead %.3f; ", n, ell, c.lb_energy,
                  ed.e0, ed.e0 - c.lb_energy, c.lb_energy / lead);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

// 13. ED structural properties
Outcome ed_structure() {
  const LatticeModel m = testing::cubic();
  LanczosParams params;
  params.want_vector = false;
  bool monotone = true, ordered = true;
  double previous = -1.0;
  for (double U : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double neu =
        ground_state_energy(BoseHubbardOperator(m, 2, 3, U, BoundaryCondition::neumann), params).e0;
    const double per =
        ground_state_energy(BoseHubbardOperator(m, 2, 3, U, BoundaryCondition::periodic), params).e0;
    monotone = monotone && neu > previous;
    ordered = ordered && neu <= per + 1e-10;
    previous = neu;
  }
  double slack = std::numeric_limits<double>::infinity();
  try {
    for (double U : {0.5, 1.0, 2.0})
      slack = std::min(slack, superadditivity_check(sector_energies(m, U, 2, 4,
                                                                    BoundaryCondition::neumann))
                                  .min_slack);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  double one_body = 0.0;
  for (const LatticeModel& model : bundled())
    for (BoundaryCondition bc : {BoundaryCondition::periodic, BoundaryCondition::neumann}) {
      const BoseHubbardOperator H(model, 4, 1, model.U(), bc);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.to_dense(), Eigen::EigenvaluesOnly);
      const SpectrumResult lap = dense_spectrum(build_laplacian(
          model, 4, bc == BoundaryCondition::periodic ? LaplacianKind::periodic
                                                      : LaplacianKind::neumann));
      for (std::size_t k = 0; k < lap.eigenvalues.size(); ++k)
        one_body = std::max(one_body, std::abs(es.eigenvalues()[static_cast<Eigen::Index>(k)] -
                                               lap.eigenvalues[k]));
    }
  return {monotone && ordered && slack >= -1e-9 && one_body <= 1e-10,
          fmt("monotone %s, neumann <= periodic %s, superadditivity slack %.3e, one-body %.1e",
              monotone ? "yes" : "no", ordered ? "yes" : "no", slack, one_body)};
}

std::string csv_body(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream body;
  for (std::string line; std::getline(in, line);)
    if (!line.starts_with("#")) body << line << '\n';
  return body.str();
}

// 14. determinism across thread counts
Outcome determinism() {
  const std::string cfg = std::string(LATBOSE_CONFIG_DIR) + "/cubic_nnn.json";
  const std::vector<std::string> jobs{
      "spectra --kind neumann --l-list 2,4,6,8,12",
      "ed --n 2 --l 4 --bc neumann",
      "upper-bound --rho-min 1e-5 --rho-max 1e-2 --points 6",
      "upper-bound --rho-max 1e-2 --finite-l 16"};
  int identical = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    std::string bodies[2];
    int idx = 0;
    for (int threads : {1, 4}) {
      const std::string out = fmt("acceptance_det_%zu_%d.csv", j, threads);
      const std::string cmd = std::string(LATBOSE_CLI_PATH) + " " + jobs[j] + " --config " + cfg +
                              " --seed 7 --threads " + std::to_string(threads) + " --output " +
                              out + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI failed: " + jobs[j]};
      bodies[idx++] = csv_body(out);
      std::remove(out.c_str());
    }
    if (!bodies[0].empty() && bodies[0] == bodies[1]) ++identical;
  }
  return {identical == static_cast<int>(jobs.size()),
          fmt("%d of %zu CSV outputs byte-identical at 1 and 4 threads", identical, jobs.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"scattering identities", scattering_identities},
      {"gamma oracle", gamma_oracle},
      {"Neumann closed form", neumann_closed_form},
      {"operator ordering", operator_ordering},
      {"gap bounds", gap_bounds},
      {"trace-inverse comparison", trace_comparison},
      {"trace powers", trace_powers},
      {"upper bound", upper_bound},
      {"depletion scaling", depletion_scaling},
      {"finite-L trial energy", finite_trial},
      {"two-body universality", two_body},
      {"lower-bound certificate", certificate_vs_ed},
      {"ED structure", ed_structure},
      {"determinism", determinism}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
