#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

#include "latbose/lattice.hpp"

namespace latbose {

enum class LaplacianKind {
  periodic,         ///< edges of the torus Lambda_l
  neumann,          ///< only edges with both ends inside the box
  neumann_special,  ///< Neumann edges along a1, a2, a3 only
};

std::string to_string(LaplacianKind kind);
LaplacianKind parse_laplacian_kind(const std::string& name);

/// Graph Laplacian on the (l+1)^3 box with the site ordering of FiniteLattice.
struct LaplacianMatrix {
  LaplacianKind kind = LaplacianKind::periodic;
  int ell = 0;
  Eigen::SparseMatrix<double> matrix;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// Throws OddLatticeSize, and GridTooCoarse for periodic boxes with l < R0.
LaplacianMatrix build_laplacian(const LatticeModel& model, int ell, LaplacianKind kind);

/// Q(u) = sum over box edges {x, x+v} of t(v) (u(x) - u(x+v))^2 for the kind's edge set.
double laplacian_form(const LatticeModel& model, int ell, LaplacianKind kind,
                      const Eigen::VectorXd& u);

struct SpectrumResult {
  LaplacianKind kind = LaplacianKind::periodic;
  int ell = 0;
  std::vector<double> eigenvalues;  ///< ascending
  double gap = 0.0;                 ///< second smallest eigenvalue
  std::optional<Eigen::MatrixXd> eigenvectors;
};

/// Largest matrix handed to the dense solver.
inline constexpr std::size_t kDenseLimit = 3375;

/// Dense symmetric eigensolve (LAPACK dsyevd). Throws DimensionCap above kDenseLimit.
SpectrumResult dense_spectrum(const LaplacianMatrix& lap, bool want_vectors = false);

/// Closed form eps(k) = 4 sum_i t(a_i) sin^2(k_i pi / (2(l+1))), k in {0..l}^3.
SpectrumResult special_neumann_eigs(const LatticeModel& model, int ell);
/// The 1D factors 4 t sin^2(k pi / (2(l+1))), k = 0..l.
std::vector<double> neumann_1d_factors(double t, int ell);

/// Exact periodic spectrum: eps on the momentum grid of Lambda_l.
SpectrumResult periodic_spectrum(const LatticeModel& model, int ell);

/// Neumann spectrum; uses the closed form when every hopping is primitive
/// (then the two operators coincide), the dense solver otherwise.
SpectrumResult neumann_spectrum(const LatticeModel& model, int ell);

/// Smallest nonzero Neumann eigenvalue. Closed form for primitive-only hopping,
/// dense up to 1000 sites, deflated Lanczos beyond.
double neumann_gap(const LatticeModel& model, int ell);

/// True when the hopping table holds only e1, e2, e3.
bool primitive_only(const LatticeModel& model);

struct ComparisonReport {
  int ell = 0;
  SpectrumResult special, neumann, periodic;
  double min_slack_special_neumann = 0.0;   ///< min_k lambda_k(neu) - lambda_k(special)
  double min_slack_neumann_periodic = 0.0;  ///< min_k lambda_k(per) - lambda_k(neu)
};

/// Eigenvalue-wise ordering special <= neumann <= periodic with 1e-10 slack.
/// Throws OrderingViolation.
ComparisonReport comparison_check(const LatticeModel& model, int ell);

struct GapRow {
  int ell = 0;
  double gap = 0.0;
  double lower_bound = 0.0;  ///< c_gap / (l+1)^2
  double scaled = 0.0;       ///< gap (l+1)^2
};

struct GapReport {
  std::vector<GapRow> rows;
  double c_gap = 0.0;
  double C_gap = 0.0;  ///< max_l gap (l+1)^2
};

/// Throws GapBoundViolation if gap < c_gap/(l+1)^2 - 1e-10 for some l.
GapReport gap_check(const LatticeModel& model, const std::vector<int>& ells);

struct TraceRow {
  int ell = 0;
  double periodic = 0.0;  ///< |Lambda|^{-1} sum_{p != 0} 1/eps(p)
  double neumann = 0.0;   ///< |Lambda|^{-1} sum_{k != 0} 1/lambda_k
  double difference = 0.0;
  double scaled = 0.0;    ///< difference (l+1)^{1/3}
};

struct TraceReport {
  std::vector<TraceRow> rows;
  double C_fit = 0.0;
};

TraceReport trace_inverse_comparison(const LatticeModel& model, const std::vector<int>& ells);

/// |Lambda|^{-1} sum_{k != 0} lambda_k^{-nu} of the Neumann Laplacian, nu > 3/2.
double trace_power(const LatticeModel& model, int ell, double nu);
double trace_power(const SpectrumResult& spectrum, double nu);

}  // namespace latbose
