#include "latbose/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "latbose/errors.hpp"
#include "latbose/parallel.hpp"

namespace latbose {

double MuWindow::midpoint() const {
  if (mu_min <= 0.0) return 0.5 * (mu_min + mu_max);
  return std::sqrt(mu_min * mu_max);
}

MuWindow mu_window(const LatticeModel& model, int n, int ell, const ScatteringData& scat,
                   double gap, bool require_density_condition) {
  require_even_size(ell);
  if (n < 0) fail(ErrorKind::InvalidArgument, "particle number must be nonnegative");
  const double side = ell + 1.0;
  const double volume = side * side * side;
  const double eight_pi_a = scat.eight_pi_a();
  MuWindow w;
  w.gap = gap;
  w.gap_lower_bound = model.c_gap() / (side * side);
  w.mu_min = 2.0 * eight_pi_a * n / volume;
  w.mu_max = 0.5 * gap - eight_pi_a * n / volume;
  w.density_ratio = n / side;
  w.density_limit = eight_pi_a > 0.0 ? model.c_gap() / (6.0 * eight_pi_a)
                                     : std::numeric_limits<double>::infinity();
  w.density_condition = w.density_ratio < w.density_limit;
  if (!(w.mu_min < w.mu_max))
    fail(ErrorKind::EmptyWindow, "mu window (" + std::to_string(w.mu_min) + ", " +
                                     std::to_string(w.mu_max) + ") is empty for n=" +
                                     std::to_string(n) + ", l=" + std::to_string(ell));
  if (require_density_condition && !w.density_condition)
    fail(ErrorKind::EmptyWindow, "density condition n/(l+1) = " + std::to_string(w.density_ratio) +
                                     " >= c_gap/(48 pi a) = " + std::to_string(w.density_limit));
  return w;
}

MuWindow mu_window(const LatticeModel& model, int n, int ell, const ScatteringData& scat,
                   bool require_density_condition) {
  return mu_window(model, n, ell, scat, neumann_gap(model, ell), require_density_condition);
}

namespace {

double min_condensate_term(const ScatteringData& scat, int n, double volume, double mu,
                           int* argmin) {
  const double phi0 = scat.phi0;
  const double coupling = scat.U * (2.0 * phi0 - phi0 * phi0) / (2.0 * volume);
  double best = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= n; ++m) {
    const double k = n - m;
    const double v = mu * m + coupling * k * (k - 1.0);
    if (v < best) {
      best = v;
      *argmin = m;
    }
  }
  return best;
}

}  // namespace

CertificateResult certificate(const LatticeModel& model, const CertificateInput& input,
                              const SpectrumResult& spectrum, const ScatteringData& scat,
                              bool require_density_condition) {
  if (spectrum.kind == LaplacianKind::periodic || spectrum.ell != input.ell)
    fail(ErrorKind::InvalidArgument, "certificate needs the Neumann spectrum of the same box");
  const double side = input.ell + 1.0;
  const double volume = side * side * side;
  if (spectrum.eigenvalues.size() != static_cast<std::size_t>(volume))
    fail(ErrorKind::InvalidArgument, "spectrum size does not match the box");

  CertificateResult r;
  r.window = mu_window(model, input.n, input.ell, scat, spectrum.gap, require_density_condition);
  r.mu = input.mu.value_or(r.window.midpoint());
  if (input.n > 0 && !r.window.contains(r.mu))
    fail(ErrorKind::InvalidMu, "mu = " + std::to_string(r.mu) + " outside the window (" +
                                   std::to_string(r.window.mu_min) + ", " +
                                   std::to_string(r.window.mu_max) + ")");
  if (input.n == 0 && !(r.mu >= 0.0 && r.mu < r.window.mu_max))
    fail(ErrorKind::InvalidMu, "mu must lie in [0, gap/2) for an empty box");

  const double b = input.n * scat.U * scat.phi0 / volume;
  const double b2 = b * b;
  std::vector<double> terms(spectrum.eigenvalues.size() - 1);
  for (std::size_t k = 1; k < spectrum.eigenvalues.size(); ++k) {
    const double a = spectrum.eigenvalues[k] - r.mu;
    const double disc = a * a - b2;
    if (!(disc >= 0.0) || !(a > 0.0))
      fail(ErrorKind::NegativeDiscriminant,
           "square root argument " + std::to_string(disc) + " at mode " + std::to_string(k));
    // a - sqrt(a^2 - b^2) without cancellation
    terms[k - 1] = b2 / (a + std::sqrt(disc));
  }
  r.bogoliubov_sum = 0.5 * parallel::pairwise_sum(terms);
  r.lb_energy =
      -r.bogoliubov_sum + min_condensate_term(scat, input.n, volume, r.mu, &r.excited);
  r.valid = true;
  return r;
}

CertificateResult certificate_scan(const LatticeModel& model, int n, int ell,
                                   const SpectrumResult& spectrum, const ScatteringData& scat,
                                   int points) {
  if (points < 1) fail(ErrorKind::InvalidArgument, "scan needs at least one point");
  const MuWindow w = mu_window(model, n, ell, scat, spectrum.gap);
  CertificateResult best;
  best.lb_energy = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double mu = w.mu_min + (w.mu_max - w.mu_min) * (i + 0.5) / points;
    const CertificateResult r = certificate(model, {n, ell, mu}, spectrum, scat);
    if (r.lb_energy > best.lb_energy) best = r;
  }
  return best;
}

GPLength gp_length(double rho, double a, double c_gap, int R0) {
  if (!(rho > 0.0) || !(a > 0.0) || !(c_gap > 0.0))
    fail(ErrorKind::InvalidArgument, "gp_length needs rho, a and c_gap positive");
  GPLength g;
  const double x = std::pow(192.0 * std::numbers::pi * a * rho / c_gap, -0.5);
  g.formula = static_cast<long long>(std::ceil(x)) - 1;
  long long ell = g.formula - (g.formula % 2 != 0 ? 1 : 0);
  if (ell < R0) ell = R0;
  if (ell > std::numeric_limits<int>::max() - 1)
    fail(ErrorKind::InvalidArgument, "gp_length: density too small for an int box size");
  g.ell = static_cast<int>(ell);
  g.adjusted = ell != g.formula;
  g.p = c_gap * (g.ell + 1.0) / (48.0 * std::numbers::pi * a);
  return g;
}

SuperadditivityReport superadditivity_check(const std::map<int, double>& energies) {
  SuperadditivityReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& [n1, e1] : energies)
    for (const auto& [n2, e2] : energies) {
      if (n2 < n1) continue;
      const auto it = energies.find(n1 + n2);
      if (it == energies.end()) continue;
      SuperadditivityRow row{n1, n2, it->second, e1 + e2, it->second - e1 - e2};
      rep.min_slack = std::min(rep.min_slack, row.slack);
      rep.rows.push_back(row);
      if (row.slack < -1e-9)
        fail(ErrorKind::SuperadditivityViolation,
             "E0(" + std::to_string(n1 + n2) + ") < E0(" + std::to_string(n1) + ") + E0(" +
                 std::to_string(n2) + ") by " + std::to_string(-row.slack));
    }
  if (rep.rows.empty()) rep.min_slack = 0.0;
  return rep;
}

}  // namespace latbose
