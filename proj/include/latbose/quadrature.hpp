#pragma once

#include <functional>
#include <vector>

#include "latbose/lattice.hpp"

namespace latbose {

/// Behaviour of the integrand at p = 0.
enum class SingularOrder {
  none,               ///< bounded near the origin
  inverse_quadratic,  ///< f(p) |p|^2 bounded near the origin
};

enum class QuadratureMethod {
  graded,   ///< dyadic shells of Gauss-Legendre cubes around the origin
  uniform,  ///< midpoint grid, origin cell excised, Richardson over grid doublings
};

struct QuadratureParams {
  QuadratureMethod method = QuadratureMethod::graded;
  /// Finest per-axis midpoint count of the uniform method (>= 8, even).
  int grid_resolution = 128;
  /// Fraction of the zone inradius the graded origin cube must shrink below
  /// before convergence is tested. In (0, 0.25].
  double singularity_radius = 1e-3;
  /// Uniform method: number of grid doublings ending at grid_resolution (>= 2).
  int refinement_levels = 3;
  double target_rel_error = 1e-6;
  /// Points per axis of the Gauss-Legendre rule on each graded cube. Raised in
  /// steps of two (up to 16) when the error estimate misses the target.
  int gauss_order = 8;
  /// Cap on graded shells.
  int max_levels = 60;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double rel_error = 0.0;
  int levels = 0;
  std::size_t evaluations = 0;
};

/// Integrand in reduced coordinates theta, with p = B theta and theta in [-1/2, 1/2)^3.
using ReducedIntegrand = std::function<double(const Vec3& theta)>;
/// Integrand in Cartesian momentum.
using MomentumIntegrand = std::function<double(const Vec3& p)>;

/// Normalized zone average |Lhat|^{-1} int_Lhat f(p) dp with |Lhat| = |det B|.
///
/// max_frequency bounds |m| for integrands oscillating like cos(2 pi m.theta);
/// graded cubes are subdivided so each holds at most half an oscillation.
/// Throws NoConvergence, NonFiniteIntegrand, OscillatoryNoConvergence.
QuadratureResult bz_integrate_reduced(const LatticeModel& model, const ReducedIntegrand& f,
                                      SingularOrder order, const QuadratureParams& params,
                                      double max_frequency = 0.0);

QuadratureResult bz_integrate(const LatticeModel& model, const MomentumIntegrand& f,
                              SingularOrder order, const QuadratureParams& params);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

}  // namespace latbose
