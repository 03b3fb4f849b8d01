#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace latbose {

/// y = H x for a symmetric operator of dimension n.
using MatVec = std::function<void(const double* x, double* y)>;

struct LanczosParams {
  int max_iterations = 2000;
  double tolerance = 1e-10;  ///< on the residual norm ||H v - e v|| with ||v|| = 1
  std::uint64_t seed = 20240611;
  /// Full reorthogonalization is used while the Krylov basis fits in this budget;
  /// beyond it the three-term recurrence runs alone.
  std::size_t memory_budget_bytes = std::size_t{512} << 20;
  /// Start from a strictly positive random vector (ground states of operators
  /// with nonpositive off-diagonal entries are positive). Otherwise the start
  /// entries are symmetric about zero.
  bool positive_start = true;
  bool want_vector = true;
};

struct LanczosResult {
  double eigenvalue = 0.0;
  /// ||H v - e v|| for the returned vector; when want_vector is false this is
  /// the Krylov estimate |beta_k y_k|.
  double residual = 0.0;
  int iterations = 0;
  bool reorthogonalized = false;
  Eigen::VectorXd vector;
};

/// Smallest eigenpair of H restricted to the orthogonal complement of the
/// (orthonormal) vectors in `deflate`. Throws NoConvergence at the iteration cap.
LanczosResult lanczos_smallest(std::size_t n, const MatVec& apply, const LanczosParams& params,
                               const std::vector<Eigen::VectorXd>& deflate = {});

}  // namespace latbose
