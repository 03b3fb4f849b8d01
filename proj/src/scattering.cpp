#include "latbose/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latbose/parallel.hpp"

namespace latbose {

double ScatteringData::eight_pi_a() const { return 8.0 * std::numbers::pi * a; }

double compute_gamma(const LatticeModel& model, const QuadratureParams& params,
                     double* rel_error) {
  const auto r = bz_integrate_reduced(
      model, [&](const Vec3& theta) { return 1.0 / dispersion_reduced(model, theta); },
      SingularOrder::inverse_quadratic, params);
  if (rel_error) *rel_error = r.rel_error;
  return 0.5 * r.value;
}

ScatteringData scattering_from_gamma(double gamma, double U, double rel_error) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    fail(ErrorKind::InvalidArgument, "gamma must be positive and finite");
  if (!(U >= 0.0) || !std::isfinite(U))
    fail(ErrorKind::InvalidArgument, "U must be nonnegative and finite");
  ScatteringData d;
  d.U = U;
  d.gamma = gamma;
  const double denom = 1.0 + U * gamma;
  d.phi0 = 1.0 / denom;
  d.w0 = U * gamma / denom;
  d.a = U * d.phi0 / (8.0 * std::numbers::pi);
  d.rel_error_estimate = rel_error;
  return d;
}

ScatteringData scattering_data(const LatticeModel& model, const QuadratureParams& params) {
  return scattering_data(model, model.U(), params);
}

ScatteringData scattering_data(const LatticeModel& model, double U,
                               const QuadratureParams& params) {
  double err = 0.0;
  const double gamma = compute_gamma(model, params, &err);
  return scattering_from_gamma(gamma, U, err);
}

QuadratureResult green_difference(const LatticeModel& model, const IVec3& m,
                                  const QuadratureParams& params) {
  const double freq = std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2])});
  return bz_integrate_reduced(
      model,
      [&](const Vec3& theta) {
        const double s = std::sin(std::numbers::pi * (m[0] * theta[0] + m[1] * theta[1] +
                                                      m[2] * theta[2]));
        // (1 - cos x) / eps with 1 - cos x = 2 sin^2(x/2); the origin limit is finite.
        return 2.0 * s * s / dispersion_reduced(model, theta);
      },
      SingularOrder::none, params, freq);
}

double scattering_solution(const LatticeModel& model, const ScatteringData& scat, const IVec3& m,
                           const QuadratureParams& params) {
  if (scat.U == 0.0) return 1.0;
  if (m == IVec3{0, 0, 0}) return scat.phi0;
  const double diff = green_difference(model, m, params).value;
  return scat.phi0 + 0.5 * scat.U * scat.phi0 * diff;
}

double scattering_solution(const LatticeModel& model, double U, const IVec3& m,
                           const QuadratureParams& params) {
  if (U == 0.0) return 1.0;
  return scattering_solution(model, scattering_data(model, U, params), m, params);
}

double scattering_solution_finite(const LatticeModel& model, double U, const IVec3& m, int L) {
  const FiniteLattice lattice(model, L);
  lattice.require_hopping_fits();
  const auto eps = grid_dispersion(lattice);
  const std::size_t n = lattice.size();
  const long long P = lattice.period();
  const IVec3 x = lattice.wrap(m);

  auto green = [&](const IVec3& y) {
    return parallel::reduce_blocks(n, 4096, [&](std::size_t b, std::size_t e) {
      double acc = 0.0;
      for (std::size_t i = b; i < e; ++i) {
        if (eps[i] == 0.0) continue;
        const IVec3 k = lattice.coords(i);
        long long phase = (1LL * k[0] * y[0] + 1LL * k[1] * y[1] + 1LL * k[2] * y[2]) % P;
        if (phase < 0) phase += P;
        acc += std::cos(2.0 * std::numbers::pi * static_cast<double>(phase) / P) / eps[i];
      }
      return acc;
    }) / static_cast<double>(n);
  };

  const double g0 = green({0, 0, 0});
  const double phi0 = 1.0 / (1.0 + 0.5 * U * g0);
  if (x == IVec3{0, 0, 0}) return phi0;
  return 1.0 - 0.5 * U * phi0 * green(x);
}

double lattice_laplacian_at(const LatticeModel& model,
                            const std::function<double(const IVec3&)>& f, const IVec3& m) {
  const double centre = f(m);
  double acc = 0.0;
  for (const auto& h : model.hopping()) {
    const IVec3 up{m[0] + h.m[0], m[1] + h.m[1], m[2] + h.m[2]};
    const IVec3 down{m[0] - h.m[0], m[1] - h.m[1], m[2] - h.m[2]};
    acc += h.t * (2.0 * centre - f(up) - f(down));
  }
  return acc;
}

}  // namespace latbose
