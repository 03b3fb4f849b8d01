#include <doctest.h>

#include <cmath>

#include "latbose/ed.hpp"
#include "latbose/lower_bound.hpp"
#include "models.hpp"

using namespace latbose;
using namespace latbose::testing;

namespace {

// S(mu) summed directly in its unrationalized form, as an independent check.
double bogoliubov_sum_direct(const SpectrumResult& spec, double mu, double b) {
  double s = 0.0;
  for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k) {
    const double a = spec.eigenvalues[k] - mu;
    s += a - std::sqrt(a * a - b * b);
  }
  return 0.5 * s;
}

}  // namespace

TEST_CASE("chemical potential window") {
  const LatticeModel m = cubic(0.1);
  const ScatteringData s = scattering_data(m);
  const double volume = 125.0;
  const MuWindow w = mu_window(m, 2, 4, s);
  CHECK(w.mu_min == doctest::Approx(2 * s.eight_pi_a() * 2 / volume));
  CHECK(w.mu_max == doctest::Approx(0.5 * neumann_gap(m, 4) - s.eight_pi_a() * 2 / volume));
  CHECK(w.contains(w.midpoint()));
  CHECK(w.midpoint() == doctest::Approx(std::sqrt(w.mu_min * w.mu_max)));
  CHECK(w.density_condition);
  CHECK(w.density_limit == doctest::Approx(1.0 / (6 * s.eight_pi_a())));

  const MuWindow empty = mu_window(m, 0, 4, s);
  CHECK(empty.mu_min == 0.0);
  CHECK(empty.mu_max == doctest::Approx(0.5 * neumann_gap(m, 4)));

  // larger n narrows the window from both sides
  const MuWindow w3 = mu_window(m, 3, 4, s);
  CHECK(w3.mu_min > w.mu_min);
  CHECK(w3.mu_max < w.mu_max);

  const LatticeModel strong = cubic(4.0);
  CHECK(kind_of([&] { mu_window(strong, 2, 4, scattering_data(strong)); }) ==
        ErrorKind::EmptyWindow);
  const MuWindow relaxed = mu_window(strong, 2, 4, scattering_data(strong), false);
  CHECK_FALSE(relaxed.density_condition);
  CHECK(kind_of([&] { mu_window(strong, 40, 4, scattering_data(strong), false); }) ==
        ErrorKind::EmptyWindow);
}

TEST_CASE("certificate: trivial sectors") {
  const LatticeModel m = cubic(0.1);
  const ScatteringData s = scattering_data(m);
  const SpectrumResult spec = neumann_spectrum(m, 4);

  const CertificateResult zero = certificate(m, {0, 4, std::nullopt}, spec, s);
  CHECK(zero.lb_energy == 0.0);
  CHECK(zero.bogoliubov_sum == 0.0);

  const CertificateResult one = certificate(m, {1, 4, std::nullopt}, spec, s);
  CHECK(one.lb_energy <= 0.0);
  CHECK(one.lb_energy >= -one.bogoliubov_sum);
  CHECK(one.excited == 0);
}

TEST_CASE("certificate: Bogoliubov sum and validation") {
  const LatticeModel m = cubic(0.1);
  const ScatteringData s = scattering_data(m);
  const SpectrumResult spec = neumann_spectrum(m, 4);
  const CertificateResult r = certificate(m, {2, 4, std::nullopt}, spec, s);
  const double b = 2 * s.U * s.phi0 / 125.0;
  CHECK(r.bogoliubov_sum == doctest::Approx(bogoliubov_sum_direct(spec, r.mu, b)).epsilon(1e-7));
  CHECK(r.bogoliubov_sum > 0.0);

  const double mu = r.mu;
  const CertificateResult r3 = certificate(m, {3, 4, mu}, spec, s);
  CHECK(r3.bogoliubov_sum > r.bogoliubov_sum);

  CHECK(kind_of([&] { certificate(m, {2, 4, r.window.mu_max * 1.01}, spec, s); }) ==
        ErrorKind::InvalidMu);
  CHECK(kind_of([&] { certificate(m, {2, 4, 0.0}, spec, s); }) == ErrorKind::InvalidMu);
  CHECK(kind_of([&] { certificate(m, {2, 6, std::nullopt}, spec, s); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { certificate(m, {2, 4, std::nullopt}, periodic_spectrum(m, 4), s); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("certificate bounds the exact ground energy") {
  const LatticeModel m = cubic(0.1);
  const ScatteringData s = scattering_data(m);
  const SpectrumResult spec = neumann_spectrum(m, 4);
  LanczosParams params;
  params.want_vector = false;
  const double e0 = ground_state_energy(
      BoseHubbardOperator(m, 4, 2, 0.1, BoundaryCondition::neumann), params).e0;
  const CertificateResult mid = certificate(m, {2, 4, std::nullopt}, spec, s);
  const CertificateResult best = certificate_scan(m, 2, 4, spec, s, 12);
  CHECK(mid.lb_energy <= e0);
  CHECK(best.lb_energy <= e0);
  CHECK(best.lb_energy > 0.0);
}

TEST_CASE("certificate approaches first-order perturbation theory as U -> 0") {
  const double U = 1e-4;
  const LatticeModel m = cubic(U);
  const ScatteringData s = scattering_data(m);
  const CertificateResult r = certificate(m, {3, 4, std::nullopt}, neumann_spectrum(m, 4), s);
  const double first_order = U * 3 * 2 / (2 * 125.0);
  CHECK(r.lb_energy / first_order == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("box size from the density") {
  const double a = 0.10572;
  long long previous = 0;
  for (double rho : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const GPLength g = gp_length(rho, a, 1.0);
    CHECK(g.ell % 2 == 0);
    CHECK(g.ell >= 2);
    CHECK(g.ell <= std::max<long long>(g.formula, 2));
    CHECK(g.ell >= previous);
    previous = g.ell;
  }
  const GPLength g1 = gp_length(1e-6, a, 1.0);
  const GPLength g2 = gp_length(0.5e-6, a, 1.0);
  CHECK((g2.ell + 1.0) / (g1.ell + 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));

  const GPLength g = gp_length(1e-4, a, 1.0);
  const double n = 1e-4 * std::pow(g.ell + 1.0, 3);
  CHECK(n < g.p);

  const GPLength dense = gp_length(10.0, a, 1.0);
  CHECK(dense.ell == 2);
  CHECK(dense.adjusted);
  CHECK(kind_of([&] { gp_length(0.0, a, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("superadditivity of the Neumann ground energy") {
  const auto energies = sector_energies(cubic(1.0), 1.0, 2, 4, BoundaryCondition::neumann);
  const SuperadditivityReport rep = superadditivity_check(energies);
  CHECK(rep.rows.size() == 9);
  CHECK(rep.min_slack >= -1e-9);

  std::map<int, double> bad{{0, 0.0}, {1, 0.0}, {2, -1.0}};
  CHECK(kind_of([&] { superadditivity_check(bad); }) == ErrorKind::SuperadditivityViolation);
}
