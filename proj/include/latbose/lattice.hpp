#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "latbose/errors.hpp"

namespace latbose {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
/// Integer lattice coordinates (m1, m2, m3) of the point m1 a1 + m2 a2 + m3 a3.
using IVec3 = std::array<int, 3>;

/// One hopping channel: direction A*m (m in the positive half-space) with weight t.
struct Hopping {
  IVec3 m{};
  double t = 0.0;
};

/// Bravais lattice with finite-range hopping and on-site repulsion U.
///
/// Hopping directions are kept in integer coordinates so membership in the
/// positive direction set and the hopping length are exact. The reciprocal
/// basis B satisfies A^T B = 2 pi I.
class LatticeModel {
 public:
  /// Validates and builds the model. Throws Error with kinds SingularBasis,
  /// NonPositiveWeight, DirectionNotPositive, DuplicateDirection,
  /// MissingPrimitiveHopping, InvalidArgument (negative or non-finite U).
  LatticeModel(const Mat3& primitive_vectors, std::vector<Hopping> hopping, double U);

  const Mat3& primitive_vectors() const noexcept { return A_; }
  const Mat3& reciprocal() const noexcept { return B_; }
  std::span<const Hopping> hopping() const noexcept { return hopping_; }
  double U() const noexcept { return U_; }

  /// Smallest even L >= 2 such that every neighbor of the origin lies in Lambda_L.
  int hopping_length() const noexcept { return R0_; }
  /// min{t(a1), t(a2), t(a3)}.
  double c_gap() const noexcept { return c_gap_; }
  /// t(a_axis) for axis in {0,1,2}.
  double primitive_hopping(int axis) const;
  /// |det B|, the Lebesgue volume of the Brillouin zone.
  double bz_volume() const noexcept { return std::abs(B_.determinant()); }

  Vec3 direction(const Hopping& h) const;
  /// M with eps(p) = p^T M p + O(|p|^4): M = sum_v t(v) v v^T.
  Mat3 quadratic_form() const;

  LatticeModel with_U(double U) const;
  /// Same geometry with every hopping weight multiplied by lambda > 0.
  LatticeModel with_scaled_hopping(double lambda) const;

 private:
  Mat3 A_;
  Mat3 B_;
  std::vector<Hopping> hopping_;
  double U_;
  int R0_ = 2;
  double c_gap_ = 0.0;
};

/// Reciprocal basis: columns b_j with a_i . b_j = 2 pi delta_ij.
Mat3 reciprocal_basis(const Mat3& A);

/// Parses the lattice configuration JSON document
/// {"primitive_vectors": [[...],[...],[...]], "hopping": [{"m": [..], "t": ..}], "U": ..}.
/// Rows of primitive_vectors are a1, a2, a3. Unknown fields and U <= 0 are rejected.
/// sin^2(pi num / den), reduced first so large arguments keep full precision;
/// exact at multiples of pi/6 and pi/4.
double sin2_pi_ratio(long long num, long long den);

LatticeModel build_lattice(const std::string& json_text);
LatticeModel load_lattice(const std::filesystem::path& path);
std::string to_json(const LatticeModel& model);

/// eps(p) = sum_v 2 t(v) (1 - cos(v.p)), evaluated as 4 t sin^2(v.p/2).
double dispersion(const LatticeModel& model, const Vec3& p);
/// Same, with p = B * theta (theta in reduced reciprocal coordinates).
double dispersion_reduced(const LatticeModel& model, const Vec3& theta);

/// Diagnostic radius p0 below which eps(p) >= c_gap |p|^2 / 2 held on a
/// deterministic sample of directions; 0 if no tested radius qualifies.
double quadratic_bound_radius(const LatticeModel& model);

/// Periodic lattice Lambda_L with (L+1)^3 sites, integer coordinates in
/// {-L/2, ..., L/2}^3 and arithmetic mod L+1.
class FiniteLattice {
 public:
  /// Throws OddLatticeSize for odd or non-positive L.
  FiniteLattice(LatticeModel model, int L);

  const LatticeModel& model() const noexcept { return model_; }
  int L() const noexcept { return L_; }
  int period() const noexcept { return L_ + 1; }
  std::size_t size() const noexcept;

  std::size_t index(const IVec3& m) const;
  IVec3 coords(std::size_t index) const;
  /// Reduces each component into {-L/2, ..., L/2}.
  IVec3 wrap(const IVec3& m) const;
  Vec3 position(const IVec3& m) const;

  /// Throws GridTooCoarse when L < R0.
  void require_hopping_fits() const;

 private:
  LatticeModel model_;
  int L_;
};

/// The momentum grid sum_j k_j b_j / (L+1), k_j in {-L/2, ..., L/2}.
struct MomentumGrid {
  int L = 0;
  std::vector<IVec3> labels;
  std::vector<Vec3> points;
  std::size_t zero_index = 0;

  std::size_t size() const noexcept { return points.size(); }
};

MomentumGrid momentum_grid(const FiniteLattice& lattice);

/// eps at every grid point, in grid order (integer phase arithmetic).
std::vector<double> grid_dispersion(const FiniteLattice& lattice);

/// Unitary finite-lattice transform f^(p) = |L|^{-1/2} sum_x f(x) e^{-i p.x},
/// inputs and outputs in site / grid index order.
std::vector<std::complex<double>> fourier_transform(const FiniteLattice& lattice,
                                                    std::span<const std::complex<double>> f);
std::vector<std::complex<double>> inverse_fourier_transform(
    const FiniteLattice& lattice, std::span<const std::complex<double>> g);

void require_even_size(int L);

}  // namespace latbose
