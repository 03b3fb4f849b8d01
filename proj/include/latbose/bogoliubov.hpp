#pragma once

#include <functional>
#include <vector>

#include "latbose/lattice.hpp"
#include "latbose/quadrature.hpp"
#include "latbose/scattering.hpp"

// Bogoliubov trial state energies. Densities are particles per lattice site
// and energies are in units of the hopping weights.
namespace latbose {

/// Minimizer and minimum of F(x) = A x^2/(1-2x) + B x/(1-2x) - C x on x < 1/2.
struct ModeMinimum {
  double x0 = 0.0;
  double F_min = 0.0;
};

/// Requires A + 2C > 0; DomainError when 1 + 2(B-C)/(A+2C) < 0.
ModeMinimum mode_minimum(double A, double B, double C);
/// Direct evaluation of F(x).
double mode_objective(double A, double B, double C, double x);

/// s_p = 1/2 - 1/2 sqrt((eps + 2U rho)/(eps + 2U rho w0)), computed without cancellation.
double minimizer_s(double eps, double U, double rho, double w0);

/// Closed-form minimum of the single-mode energy at (eps, U rho, U rho w0).
double mode_energy(double eps, double U, double rho, double w0);

/// The nonnegative thermodynamic integrand of I(rho), written in the
/// cancellation-free rationalized form. Behaves as (U rho (1-w0))^2 / (4 eps)
/// as eps -> 0.
double thermo_integrand(double eps, double U, double rho, double w0);

struct BogoliubovModeData {
  Vec3 p = Vec3::Zero();
  double eps = 0.0;
  double s = 0.0;
  double c = 0.0;
  double mode_energy = 0.0;
};

struct TrialStateConfig {
  double rho = 0.0;  ///< target mean density
  int L = 0;         ///< even box size
};

/// Exact finite-L expectation per site of the Bogoliubov trial state, with the
/// mean particle number fixed to rho |Lambda_L| through N0.
struct FiniteTrialResult {
  int L = 0;
  double rho = 0.0;
  std::size_t sites = 0;
  double N0 = 0.0;
  double depletion = 0.0;  ///< sum_{p != 0} c^2/(1-c^2)
  double energy_density = 0.0;
  // The four groups of the energy expectation, per site.
  double kinetic = 0.0;
  double pair = 0.0;
  double condensate_coupling = 0.0;
  double condensate_self = 0.0;
  // Regrouped form: local mode minima plus the quadratic remainders, per site.
  double local_sum = 0.0;         ///< |Lambda|^{-1} sum_{p != 0} F_min(p)
  double mean_field = 0.0;        ///< (U/2) rho^2 (1 - w0^2)
  double sp_square = 0.0;         ///< (U/2) (|Lambda|^{-1} sum_all (s_p + rho w0))^2
  double depletion_square = 0.0;  ///< (U/2) (depletion / |Lambda|)^2
  std::vector<BogoliubovModeData> modes;
};

/// Optimal c_p from minimizer_s. Throws NegativeCondensate and GridTooCoarse.
FiniteTrialResult trial_energy_finite(const LatticeModel& model, const TrialStateConfig& config,
                                      const ScatteringData& scat, bool keep_modes = false);

/// Same energy for arbitrary pair coefficients c(p, eps) with |c| < 1.
FiniteTrialResult trial_energy_finite_custom(
    const LatticeModel& model, const TrialStateConfig& config, const ScatteringData& scat,
    const std::function<double(const Vec3& p, double eps)>& coefficient);

struct RemainderDiagnostics {
  double depletion_density = 0.0;  ///< <c^2/(1-c^2)>
  double sp_shift_density = 0.0;   ///< |<s_p> + rho w0|
  double sp_square = 0.0;          ///< (U/2) sp_shift^2
  double depletion_square = 0.0;   ///< (U/2) depletion^2
};

struct ThermoResult {
  double rho = 0.0;
  double leading = 0.0;    ///< 4 pi a rho^2
  double integral = 0.0;   ///< I(rho) >= 0
  double e_psi = 0.0;      ///< leading + integral
  double ratio = 0.0;      ///< e_psi / leading
  double remainder = 0.0;  ///< exact quadratic remainder of the L -> infinity limit
  double e_lim = 0.0;      ///< e_psi + remainder
  double rel_error = 0.0;
  RemainderDiagnostics diagnostics;
};

/// Thermodynamic trial energy density. Every integrand sample is checked to be
/// nonnegative (IntegrandNegative otherwise).
ThermoResult trial_energy_thermo(const LatticeModel& model, double rho, const ScatteringData& scat,
                                 const QuadratureParams& params = {});

RemainderDiagnostics remainder_diagnostics(const LatticeModel& model, double rho,
                                           const ScatteringData& scat,
                                           const QuadratureParams& params = {});

struct UpperBoundSweep {
  std::vector<ThermoResult> points;
  /// Power law ratio - 1 ~ prefactor * rho^exponent over the lowest decade.
  double fit_exponent = 0.0;
  double fit_prefactor = 0.0;
  /// Power law of the depletion density over the whole sweep.
  double depletion_exponent = 0.0;
};

/// rho log-spaced over [rho_min, rho_max] with the given number of points
/// (0 selects 8 per decade).
UpperBoundSweep upper_bound_sweep(const LatticeModel& model, const ScatteringData& scat,
                                  double rho_min, double rho_max, int points = 0,
                                  const QuadratureParams& params = {});

}  // namespace latbose
