#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <set>

#include "latbose/ed.hpp"
#include "latbose/scattering.hpp"
#include "models.hpp"

using namespace latbose;
using namespace latbose::testing;

namespace {

LanczosParams quiet() {
  LanczosParams p;
  p.want_vector = false;
  return p;
}

LaplacianKind laplacian_of(BoundaryCondition bc) {
  return bc == BoundaryCondition::periodic ? LaplacianKind::periodic : LaplacianKind::neumann;
}

}  // namespace

TEST_CASE("Fock basis ranks every state once") {
  const FockBasis basis(27, 3);
  CHECK(basis.dimension() == 3654);
  std::vector<int> s = basis.unrank(0);
  std::set<std::vector<int>> seen;
  std::uint64_t r = 0;
  do {
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(basis.rank(s) == r);
    CHECK(basis.unrank(r) == s);
    seen.insert(s);
    ++r;
  } while (basis.next(s));
  CHECK(r == basis.dimension());
  CHECK(seen.size() == basis.dimension());

  const auto occ = basis.occupations({2, 2, 5});
  CHECK(occ[2] == 2);
  CHECK(occ[5] == 1);
  CHECK(std::accumulate(occ.begin(), occ.end(), 0) == 3);

  CHECK(fock_dimension(125, 0) == 1);
  CHECK(fock_dimension(343, 3) == 6784540);
  CHECK(fock_dimension(1'000'000, 50) == UINT64_MAX);
}

TEST_CASE("one particle reproduces the Laplacian") {
  const LatticeModel m = orthorhombic();
  for (BoundaryCondition bc : {BoundaryCondition::periodic, BoundaryCondition::neumann}) {
    const BoseHubbardOperator H(m, 4, 1, 3.0, bc);
    const Eigen::MatrixXd lap(build_laplacian(m, 4, laplacian_of(bc)).matrix);
    CHECK((H.to_dense() - lap).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("hand-computed matrix elements") {
  const LatticeModel m = cubic();
  const double U = 2.5;
  const BoseHubbardOperator H(m, 2, 2, U, BoundaryCondition::periodic);
  const FiniteLattice box(m, 2);
  const int x = static_cast<int>(box.index({0, 0, 0}));
  const int y = static_cast<int>(box.index({1, 0, 0}));
  const std::vector<int> pair{x, x};
  std::vector<int> split{std::min(x, y), std::max(x, y)};
  CHECK(H.diagonal(pair) == doctest::Approx(2 * 6 + U));
  CHECK(H.diagonal(split) == doctest::Approx(12.0));
  const Eigen::MatrixXd D = H.to_dense();
  const auto i = static_cast<Eigen::Index>(H.basis().rank(pair));
  const auto j = static_cast<Eigen::Index>(H.basis().rank(split));
  CHECK(D(i, j) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(D(j, i) == D(i, j));
  CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("free bosons have zero ground energy") {
  for (BoundaryCondition bc : {BoundaryCondition::periodic, BoundaryCondition::neumann}) {
    const BoseHubbardOperator H(cubic(), 2, 3, 0.0, bc);
    CHECK(std::abs(ground_state_energy(H, quiet()).e0) < 1e-9);
  }
}

TEST_CASE("Lanczos against the dense ground energy") {
  const BoseHubbardOperator H(cubic(), 2, 2, 1.0, BoundaryCondition::periodic);
  CHECK(H.dimension() == 378);
  const EDResult r = ground_state_energy(H);
  CHECK(r.e0 == doctest::Approx(dense_ground_energy(H)).epsilon(1e-10));
  CHECK(r.residual < 1e-8);

  // translation invariance spreads the particles evenly
  const auto occ = H.site_occupations(r.vector);
  for (double o : occ) CHECK(o == doctest::Approx(2.0 / 27.0).epsilon(1e-6));

  const BoseHubbardOperator N(cubic_nnn(), 2, 3, 2.0, BoundaryCondition::neumann);
  CHECK(ground_state_energy(N, quiet()).e0 ==
        doctest::Approx(dense_ground_energy(N)).epsilon(1e-9));
}

TEST_CASE("ground energy grows with U toward the hard-core limit") {
  const LatticeModel m = cubic();
  const BoseHubbardOperator free(m, 2, 2, 0.0, BoundaryCondition::neumann);
  // hard-core oracle: the dense U = 0 matrix restricted to singly occupied states
  const Eigen::MatrixXd D = free.to_dense();
  std::vector<Eigen::Index> keep;
  std::vector<int> s = free.basis().unrank(0);
  Eigen::Index r = 0;
  do {
    if (s[0] != s[1]) keep.push_back(r);
    ++r;
  } while (free.basis().next(s));
  Eigen::MatrixXd P(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b)
      P(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = D(keep[a], keep[b]);
  const double hard_core = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(P).eigenvalues()[0];

  double previous = -1.0;
  for (double U : {0.0, 0.5, 2.0, 8.0, 32.0, 1e3, 1e5}) {
    const double e = dense_ground_energy(BoseHubbardOperator(m, 2, 2, U, BoundaryCondition::neumann));
    CHECK(e > previous);
    CHECK(e <= hard_core + 1e-12);
    previous = e;
  }
  CHECK(previous == doctest::Approx(hard_core).epsilon(1e-3));
}

TEST_CASE("Neumann energy lies below the periodic one") {
  for (int n : {2, 3}) {
    const double per = ground_state_energy(
        BoseHubbardOperator(cubic(), 2, n, 4.0, BoundaryCondition::periodic), quiet()).e0;
    const double neu = ground_state_energy(
        BoseHubbardOperator(cubic(), 2, n, 4.0, BoundaryCondition::neumann), quiet()).e0;
    CHECK(neu <= per + 1e-10);
  }
}

TEST_CASE("two-body relative Hamiltonian") {
  const LatticeModel m = cubic();
  const double rel = two_body_relative(m, 4.0, 4, quiet()).e0;
  const double full =
      ground_state_energy(BoseHubbardOperator(m, 4, 2, 4.0, BoundaryCondition::periodic), quiet()).e0;
  CHECK(rel == doctest::Approx(full).epsilon(1e-9));

  // first order in U: E0 ~ U/|Lambda|
  const double U = 1e-4;
  const double weak = two_body_relative(m, U, 6, quiet()).e0;
  CHECK(weak * 343 / U == doctest::Approx(1.0).epsilon(1e-3));

  const TwoBodyExtraction zero = two_body_scattering_extraction(m, 0.0, {4, 6, 8});
  CHECK(std::abs(zero.e_inf) < 1e-8);

  const TwoBodyExtraction weak_fit = two_body_scattering_extraction(m, 0.01, {4, 6, 8, 10});
  CHECK(weak_fit.e_inf == doctest::Approx(scattering_data(m, 0.01).eight_pi_a()).epsilon(1e-3));
}

TEST_CASE("grand-canonical energy never exceeds the canonical one") {
  for (BoundaryCondition bc : {BoundaryCondition::periodic, BoundaryCondition::neumann}) {
    const auto rows = ensemble_inequality_check(cubic(), 1.0, 2, 4, bc);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].canonical == 0.0);
    for (const EnsembleRow& row : rows) CHECK(row.grand_canonical <= row.canonical + 1e-10);
  }
}

TEST_CASE("ED validation") {
  EDConfig tiny;
  tiny.max_dimension = 1000;
  CHECK(kind_of([&] { BoseHubbardOperator(cubic(), 4, 3, 1.0, BoundaryCondition::neumann, tiny); }) ==
        ErrorKind::DimensionCap);
  const LatticeModel far(Mat3::Identity(),
                         {{{1, 0, 0}, 1.0}, {{0, 1, 0}, 1.0}, {{0, 0, 1}, 1.0}, {{2, 0, 0}, 0.2}},
                         1.0);
  CHECK(kind_of([&] { BoseHubbardOperator(far, 2, 2, 1.0, BoundaryCondition::periodic); }) ==
        ErrorKind::GridTooCoarse);
  CHECK(kind_of([] { BoseHubbardOperator(cubic(), 3, 2, 1.0, BoundaryCondition::neumann); }) ==
        ErrorKind::OddLatticeSize);
  CHECK(kind_of([] { parse_boundary("dirichlet"); }) == ErrorKind::InvalidArgument);
}
