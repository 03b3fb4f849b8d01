#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "latbose/lanczos.hpp"
#include "latbose/lattice.hpp"
#include "latbose/spectra.hpp"

namespace latbose {

enum class BoundaryCondition { periodic, neumann };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary(const std::string& name);

/// Bosonic occupation basis of n particles on `sites` sites.
///
/// A state is stored as its sorted list of occupied sites x_0 <= ... <= x_{n-1}.
/// Ranking is combinatorial (colexicographic on y_i = x_i + i), so states are
/// never materialized in bulk.
class FockBasis {
 public:
  FockBasis(std::size_t sites, int n);

  std::size_t sites() const noexcept { return sites_; }
  int particles() const noexcept { return n_; }
  std::uint64_t dimension() const noexcept { return dim_; }

  std::uint64_t rank(const std::vector<int>& sorted_sites) const;
  std::vector<int> unrank(std::uint64_t r) const;
  /// Advances to the state of rank r + 1; returns false past the last state.
  bool next(std::vector<int>& sorted_sites) const;

  /// Occupation vector (n_1, ..., n_sites) of a sorted site list.
  std::vector<int> occupations(const std::vector<int>& sorted_sites) const;

  /// C(m, k) for m < sites + n, k <= n.
  std::uint64_t binom(std::size_t m, int k) const;

 private:
  std::size_t sites_;
  int n_;
  std::uint64_t dim_;
  std::vector<std::uint64_t> table_;  // (sites + n) x (n + 1)
};

/// C(n + sites - 1, n), saturating at UINT64_MAX.
std::uint64_t fock_dimension(std::size_t sites, int n);

struct EDConfig {
  /// Cap on the basis dimension (the operator is applied matrix-free).
  std::uint64_t max_dimension = 2'000'000;
};

/// Bose-Hubbard operator sum_{x,y} (-Delta)_{xy} b*_x b_y + U/2 sum_x n_x (n_x - 1).
class BoseHubbardOperator {
 public:
  BoseHubbardOperator(const LatticeModel& model, int ell, int n, double U, BoundaryCondition bc,
                      const EDConfig& config = {});

  const FockBasis& basis() const noexcept { return basis_; }
  std::uint64_t dimension() const noexcept { return basis_.dimension(); }
  BoundaryCondition bc() const noexcept { return bc_; }
  int ell() const noexcept { return ell_; }
  double U() const noexcept { return U_; }

  /// y = H x, rows processed in parallel blocks.
  void apply(const double* x, double* y) const;
  double diagonal(const std::vector<int>& sorted_sites) const;
  /// Dense matrix, for dimensions up to 4000.
  Eigen::MatrixXd to_dense() const;
  /// <n_x> in a normalized state.
  std::vector<double> site_occupations(const Eigen::VectorXd& state) const;

 private:
  FockBasis basis_;
  BoundaryCondition bc_;
  int ell_;
  double U_;
  std::vector<double> onsite_;                                // (-Delta)_xx
  std::vector<std::vector<std::pair<int, double>>> hops_;     // x -> (y, (-Delta)_yx), y != x
};

BoseHubbardOperator build_hamiltonian(const LatticeModel& model, int ell, int n, double U,
                                      BoundaryCondition bc, const EDConfig& config = {});

struct EDResult {
  double e0 = 0.0;
  double residual = 0.0;
  int iterations = 0;
  BoundaryCondition bc = BoundaryCondition::neumann;
  std::uint64_t basis_dim = 0;
  Eigen::VectorXd vector;  ///< empty unless requested
};

EDResult ground_state_energy(const BoseHubbardOperator& H, const LanczosParams& params = {});

/// Dense ground state energy (dimension <= 4000), used as an oracle.
double dense_ground_energy(const BoseHubbardOperator& H);

/// Two-body relative-coordinate Hamiltonian 2(-Delta_per) + U delta_{r,0} on Lambda_L,
/// whose ground state is the zero total-momentum two-boson ground state.
EDResult two_body_relative(const LatticeModel& model, double U, int L,
                           const LanczosParams& params = {});

struct TwoBodyExtraction {
  std::vector<int> L;
  std::vector<double> scaled_energy;  ///< E0(2, L) |Lambda_L|
  double e_inf = 0.0;
  int fit_degree = 0;                 ///< 1 or 2 in x = 1/(L+1)
  double max_residual = 0.0;
};

/// Extrapolates E0(2,L)|Lambda_L| to L -> infinity with a polynomial in
/// 1/(L+1) whose degree (1 or 2) minimizes AIC. Throws PoorFit when the chosen
/// fit misses a point by more than poor_fit_tolerance relative to e_inf.
TwoBodyExtraction two_body_scattering_extraction(const LatticeModel& model, double U,
                                                 const std::vector<int>& L_list,
                                                 bool use_relative = true,
                                                 double poor_fit_tolerance = 5e-3,
                                                 const EDConfig& config = {});

struct EnsembleRow {
  int n = 0;
  double canonical = 0.0;      ///< E0(n)
  double grand_canonical = 0.0;  ///< lower convex envelope of the sector energies at n
};

/// Sector energies E0(m), m = 0..n_max, and the grand-canonical estimate
/// E^GC(n) = sup_mu min_m [E0(m) + mu (n - m)] <= E0(n).
std::vector<EnsembleRow> ensemble_inequality_check(const LatticeModel& model, double U, int ell,
                                                   int n_max, BoundaryCondition bc,
                                                   const EDConfig& config = {});

/// E0(n) for n = 0..n_max from exact diagonalization.
std::map<int, double> sector_energies(const LatticeModel& model, double U, int ell, int n_max,
                                      BoundaryCondition bc, const EDConfig& config = {});

}  // namespace latbose
