#pragma once

#include "latbose/lattice.hpp"
#include "latbose/quadrature.hpp"

namespace latbose {

/// Zero-energy scattering data for on-site repulsion U.
///
/// gamma = 1/2 <1/eps> with <.> the normalized zone average, and
/// 8 pi a = U / (1 + U gamma) = U phi0, w0 = 1 - phi0.
struct ScatteringData {
  double U = 0.0;
  double gamma = 0.0;
  double a = 0.0;
  double phi0 = 1.0;
  double w0 = 0.0;
  double rel_error_estimate = 0.0;

  double eight_pi_a() const;
};

double compute_gamma(const LatticeModel& model, const QuadratureParams& params = {},
                     double* rel_error = nullptr);

/// Scattering data from a known gamma (all identities hold to rounding).
ScatteringData scattering_from_gamma(double gamma, double U, double rel_error = 0.0);
ScatteringData scattering_data(const LatticeModel& model, const QuadratureParams& params = {});
ScatteringData scattering_data(const LatticeModel& model, double U,
                               const QuadratureParams& params = {});

/// <(1 - cos(p.x)) / eps(p)> for the lattice point x = A m. Bounded integrand,
/// so no singular correction is needed.
QuadratureResult green_difference(const LatticeModel& model, const IVec3& m,
                                  const QuadratureParams& params = {});

/// phi(x) = 1 - 1/2 U/(1+U gamma) <e^{ip.x}/eps>, evaluated as
/// phi0 + 1/2 U/(1+U gamma) <(1 - cos p.x)/eps>. Integer coordinates m.
/// Large |m| raises OscillatoryNoConvergence; use scattering_solution_finite then.
double scattering_solution(const LatticeModel& model, const ScatteringData& scat, const IVec3& m,
                           const QuadratureParams& params = {});
double scattering_solution(const LatticeModel& model, double U, const IVec3& m,
                           const QuadratureParams& params = {});

/// Finite periodic box analogue. G solves (-Delta_per) G = delta_0 - 1/|Lambda_L|
/// and is summed exactly on the momentum grid, G(m) = |Lambda_L|^{-1} sum_{p != 0}
/// cos(p.x)/eps(p). Returns phi_L(m) = 1 - (U/2) phi_L(0) G(m) with
/// phi_L(0) = 1 / (1 + U G(0) / 2). Converges to phi(m) as L grows.
double scattering_solution_finite(const LatticeModel& model, double U, const IVec3& m, int L);

/// (-Delta f)(x) = sum_v t(v) (2 f(x) - f(x+v) - f(x-v)) at x = m, for a
/// function on the lattice given as a callable over integer coordinates.
double lattice_laplacian_at(const LatticeModel& model,
                            const std::function<double(const IVec3&)>& f, const IVec3& m);

}  // namespace latbose
