#pragma once

#include <map>
#include <optional>
#include <vector>

#include "latbose/lattice.hpp"
#include "latbose/scattering.hpp"
#include "latbose/spectra.hpp"

namespace latbose {

/// Admissible chemical-potential window for the Bogoliubov certificate in a
/// Neumann box of side l+1 holding n particles:
///   16 pi a n/|L| < mu < gap/2 - 8 pi a n/|L|.
struct MuWindow {
  double mu_min = 0.0;
  double mu_max = 0.0;
  double gap = 0.0;             ///< exact Neumann gap used for mu_max
  double gap_lower_bound = 0.0; ///< c_gap / (l+1)^2
  /// n/(l+1) < c_gap/(48 pi a): the density condition that guarantees a
  /// nonempty window through the gap lower bound alone.
  bool density_condition = true;
  double density_ratio = 0.0;   ///< n/(l+1)
  double density_limit = 0.0;   ///< c_gap/(48 pi a)

  bool contains(double mu) const { return mu > mu_min && mu < mu_max; }
  /// Geometric midpoint, or the arithmetic one when mu_min = 0.
  double midpoint() const;
};

/// Throws EmptyWindow when the window is empty, and also when the density
/// condition fails unless `require_density_condition` is false.
MuWindow mu_window(const LatticeModel& model, int n, int ell, const ScatteringData& scat,
                   double gap, bool require_density_condition = true);
MuWindow mu_window(const LatticeModel& model, int n, int ell, const ScatteringData& scat,
                   bool require_density_condition = true);

struct CertificateInput {
  int n = 0;
  int ell = 0;
  std::optional<double> mu;  ///< defaults to the window midpoint
};

struct CertificateResult {
  double lb_energy = 0.0;
  double bogoliubov_sum = 0.0;  ///< S(mu) >= 0
  MuWindow window;
  double mu = 0.0;
  int excited = 0;              ///< minimizing number of excited particles m
  bool valid = false;
};

/// Lower bound on the Neumann ground-state energy E0(n, l):
///   lb = -S(mu) + min_{m=0..n} [mu m + U (2 phi0 - phi0^2)/(2|L|) (n-m)(n-m-1)],
///   S(mu) = 1/2 sum_{k != 0} [lam_k - mu - sqrt((lam_k - mu)^2 - (n U phi0/|L|)^2)],
/// with lam_k the exact Neumann eigenvalues in `spectrum`.
/// Throws InvalidMu outside the window and NegativeDiscriminant if a square
/// root argument is negative.
CertificateResult certificate(const LatticeModel& model, const CertificateInput& input,
                              const SpectrumResult& spectrum, const ScatteringData& scat,
                              bool require_density_condition = true);

/// Evaluates the certificate on `points` mu values spread over the open window
/// and returns the best one.
CertificateResult certificate_scan(const LatticeModel& model, int n, int ell,
                                   const SpectrumResult& spectrum, const ScatteringData& scat,
                                   int points = 16);

struct GPLength {
  long long formula = 0;  ///< ceil((192 pi a rho / c_gap)^{-1/2}) - 1
  int ell = 0;            ///< admissible even value actually used
  bool adjusted = false;
  double p = 0.0;         ///< c_gap (l+1) / (48 pi a)
};

/// Localization box size for density rho, rounded down to an even value and
/// raised to R0 if needed.
GPLength gp_length(double rho, double a, double c_gap, int R0 = 2);

struct SuperadditivityRow {
  int n1 = 0, n2 = 0;
  double lhs = 0.0;  ///< E0(n1 + n2)
  double rhs = 0.0;  ///< E0(n1) + E0(n2)
  double slack = 0.0;
};

struct SuperadditivityReport {
  std::vector<SuperadditivityRow> rows;
  double min_slack = 0.0;
};

/// Checks E0(n1+n2) >= E0(n1) + E0(n2) - 1e-9 for every pair in the map.
/// Throws SuperadditivityViolation.
SuperadditivityReport superadditivity_check(const std::map<int, double>& energies);

}  // namespace latbose
