#include "latbose/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latbose/fit.hpp"
#include "latbose/parallel.hpp"

namespace latbose {

ModeMinimum mode_minimum(double A, double B, double C) {
  const double denom = A + 2.0 * C;
  if (!(denom > 0.0)) fail(ErrorKind::DomainError, "mode_minimum requires A + 2C > 0");
  const double arg = 1.0 + 2.0 * (B - C) / denom;
  if (arg < 0.0) fail(ErrorKind::DomainError, "mode_minimum: 1 + 2(B-C)/(A+2C) is negative");
  const double root = std::sqrt(arg);
  ModeMinimum m;
  // Rationalized forms of 1/2 - 1/2 sqrt(arg) and 1/2 (S - (A+B+C)); the
  // difference S^2 - (A+B+C)^2 equals -(B-C)^2.
  m.x0 = -((B - C) / denom) / (1.0 + root);
  const double S = std::sqrt((A + 2.0 * B) * denom);
  m.F_min = -0.5 * (B - C) * (B - C) / (S + A + B + C);
  return m;
}

double mode_objective(double A, double B, double C, double x) {
  return (A * x * x + B * x) / (1.0 - 2.0 * x) - C * x;
}

double minimizer_s(double eps, double U, double rho, double w0) {
  if (eps < 0.0) fail(ErrorKind::DomainError, "minimizer_s: eps must be nonnegative");
  if (eps == 0.0 && !(U * rho * w0 > 0.0))
    fail(ErrorKind::DomainError, "minimizer_s: eps = 0 needs rho w0 > 0");
  return mode_minimum(eps, U * rho, U * rho * w0).x0;
}

double mode_energy(double eps, double U, double rho, double w0) {
  return mode_minimum(eps, U * rho, U * rho * w0).F_min;
}

double thermo_integrand(double eps, double U, double rho, double w0) {
  const double X = U * rho * (1.0 - w0);
  const double S = std::sqrt((eps + 2.0 * U * rho) * (eps + 2.0 * U * rho * w0));
  const double K = U * rho * (1.0 + w0);
  return X * X * (S - eps + K) / (4.0 * eps * (S + eps + K));
}

namespace {

FiniteTrialResult finite_energy(const LatticeModel& model, const TrialStateConfig& config,
                                const ScatteringData& scat,
                                const std::function<double(const Vec3&, double)>& s_of,
                                bool keep_modes) {
  if (!(config.rho > 0.0)) fail(ErrorKind::InvalidArgument, "rho must be positive");
  const FiniteLattice lattice(model, config.L);
  lattice.require_hopping_fits();
  const MomentumGrid grid = momentum_grid(lattice);
  const std::vector<double> eps = grid_dispersion(lattice);
  const std::size_t n = lattice.size();
  const double volume = static_cast<double>(n);
  const double U = scat.U, rho = config.rho, w0 = scat.w0;

  std::vector<double> kin(n, 0.0), occ(n, 0.0), anom(n, 0.0), local(n, 0.0), sv(n, 0.0);
  std::vector<BogoliubovModeData> modes;
  if (keep_modes) modes.resize(n);
  parallel::for_blocks(n, 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (i == grid.zero_index) continue;
      const double s = s_of(grid.points[i], eps[i]);
      if (!(s < 0.5) || !std::isfinite(s))
        fail(ErrorKind::InvalidArgument, "pair coefficient must satisfy |c| < 1");
      const double o = s * s / (1.0 - 2.0 * s);  // c^2/(1-c^2)
      occ[i] = o;
      anom[i] = s * (1.0 - s) / (1.0 - 2.0 * s);  // c/(1-c^2)
      kin[i] = eps[i] * o;
      local[i] = mode_objective(eps[i], U * rho, U * rho * w0, s);
      sv[i] = s;
      if (keep_modes) modes[i] = {grid.points[i], eps[i], s, s / (1.0 - s), local[i]};
    }
  });

  const double K = parallel::pairwise_sum(kin);
  const double D = parallel::pairwise_sum(occ);
  const double P = parallel::pairwise_sum(anom);
  const double F = parallel::pairwise_sum(local);
  const double S = parallel::pairwise_sum(sv);

  FiniteTrialResult r;
  r.L = config.L;
  r.rho = rho;
  r.sites = n;
  r.depletion = D;
  r.N0 = rho * volume - D;
  if (r.N0 < 0.0)
    fail(ErrorKind::NegativeCondensate,
         "density " + std::to_string(rho) + " is below the depletion at L=" +
             std::to_string(config.L) + " (N0 = " + std::to_string(r.N0) + ")");

  r.kinetic = K / volume;
  r.pair = U / (2.0 * volume) * (P * P + 2.0 * D * D) / volume;
  r.condensate_coupling = U * r.N0 / volume * (P + 2.0 * D) / volume;
  r.condensate_self = U * r.N0 * r.N0 / (2.0 * volume) / volume;
  r.energy_density = r.kinetic + r.pair + r.condensate_coupling + r.condensate_self;

  r.local_sum = F / volume;
  r.mean_field = 0.5 * U * rho * rho * (1.0 - w0 * w0);
  const double shift = (S + volume * rho * w0) / volume;
  r.sp_square = 0.5 * U * shift * shift;
  r.depletion_square = 0.5 * U * (D / volume) * (D / volume);
  r.modes = std::move(modes);
  return r;
}

}  // namespace

FiniteTrialResult trial_energy_finite(const LatticeModel& model, const TrialStateConfig& config,
                                      const ScatteringData& scat, bool keep_modes) {
  return finite_energy(
      model, config, scat,
      [&](const Vec3&, double eps) { return minimizer_s(eps, scat.U, config.rho, scat.w0); },
      keep_modes);
}

FiniteTrialResult trial_energy_finite_custom(
    const LatticeModel& model, const TrialStateConfig& config, const ScatteringData& scat,
    const std::function<double(const Vec3& p, double eps)>& coefficient) {
  return finite_energy(
      model, config, scat,
      [&](const Vec3& p, double eps) {
        const double c = coefficient(p, eps);
        if (!(std::abs(c) < 1.0))
          fail(ErrorKind::InvalidArgument, "pair coefficient must satisfy |c| < 1");
        return c / (1.0 + c);
      },
      false);
}

RemainderDiagnostics remainder_diagnostics(const LatticeModel& model, double rho,
                                           const ScatteringData& scat,
                                           const QuadratureParams& params) {
  if (rho < 0.0) fail(ErrorKind::InvalidArgument, "rho must be nonnegative");
  RemainderDiagnostics d;
  if (rho == 0.0 || scat.U == 0.0) return d;
  const double U = scat.U, w0 = scat.w0, phi0 = scat.phi0;

  d.depletion_density =
      bz_integrate_reduced(
          model,
          [&](const Vec3& theta) {
            const double s = minimizer_s(dispersion_reduced(model, theta), U, rho, w0);
            return s * s / (1.0 - 2.0 * s);
          },
          SingularOrder::none, params)
          .value;

  // rho w0 = <U rho phi0 / (2 eps)>, so <s> + rho w0 is one integral whose
  // 1/eps tails cancel.
  d.sp_shift_density = std::abs(
      bz_integrate_reduced(
          model,
          [&](const Vec3& theta) {
            const double eps = dispersion_reduced(model, theta);
            return minimizer_s(eps, U, rho, w0) + U * rho * phi0 / (2.0 * eps);
          },
          SingularOrder::inverse_quadratic, params)
          .value);
  d.sp_square = 0.5 * U * d.sp_shift_density * d.sp_shift_density;
  d.depletion_square = 0.5 * U * d.depletion_density * d.depletion_density;
  return d;
}

ThermoResult trial_energy_thermo(const LatticeModel& model, double rho, const ScatteringData& scat,
                                 const QuadratureParams& params) {
  if (!(rho > 0.0)) fail(ErrorKind::InvalidArgument, "rho must be positive");
  const double U = scat.U, w0 = scat.w0;
  ThermoResult t;
  t.rho = rho;
  t.leading = 0.5 * scat.eight_pi_a() * rho * rho;
  if (U > 0.0) {
    const auto q = bz_integrate_reduced(
        model,
        [&](const Vec3& theta) {
          const double g = thermo_integrand(dispersion_reduced(model, theta), U, rho, w0);
          if (g < 0.0)
            fail(ErrorKind::IntegrandNegative, "thermodynamic integrand is negative");
          return g;
        },
        SingularOrder::inverse_quadratic, params);
    t.integral = q.value;
    t.rel_error = q.rel_error;
  }
  t.e_psi = t.leading + t.integral;
  t.ratio = t.leading > 0.0 ? t.e_psi / t.leading : 1.0;
  const RemainderDiagnostics d = remainder_diagnostics(model, rho, scat, params);
  t.diagnostics = d;
  t.remainder = d.sp_square - 2.0 * d.depletion_square;
  t.e_lim = t.e_psi + t.remainder;
  return t;
}

UpperBoundSweep upper_bound_sweep(const LatticeModel& model, const ScatteringData& scat,
                                  double rho_min, double rho_max, int points,
                                  const QuadratureParams& params) {
  if (!(rho_min > 0.0) || !(rho_max >= rho_min))
    fail(ErrorKind::InvalidArgument, "sweep needs 0 < rho_min <= rho_max");
  if (points <= 0)
    points = std::max(2, static_cast<int>(std::lround(8.0 * std::log10(rho_max / rho_min))) + 1);
  UpperBoundSweep sweep;
  std::vector<double> rhos = logspace(rho_min, rho_max, points);
  for (double rho : rhos) {
    sweep.points.push_back(trial_energy_thermo(model, rho, scat, params));
  }

  std::vector<double> x, y, dep;
  for (const auto& pt : sweep.points) {
    if (pt.rho <= 10.0 * rho_min * (1.0 + 1e-12)) {
      x.push_back(pt.rho);
      y.push_back(pt.ratio - 1.0);
    }
    dep.push_back(pt.diagnostics.depletion_density);
  }
  if (x.size() < 2) {
    x.clear();
    y.clear();
    for (const auto& pt : sweep.points) {
      x.push_back(pt.rho);
      y.push_back(pt.ratio - 1.0);
    }
  }
  if (x.size() >= 2) {
    const PowerLawFit fit = power_law_fit(x, y);
    sweep.fit_exponent = fit.exponent;
    sweep.fit_prefactor = fit.prefactor;
    sweep.depletion_exponent = power_law_fit(rhos, dep).exponent;
  }
  return sweep;
}

}  // namespace latbose
