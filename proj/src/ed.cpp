#include "latbose/ed.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "latbose/errors.hpp"
#include "latbose/fit.hpp"
#include "latbose/parallel.hpp"

namespace latbose {

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::periodic ? "periodic" : "neumann";
}

BoundaryCondition parse_boundary(const std::string& name) {
  if (name == "periodic") return BoundaryCondition::periodic;
  if (name == "neumann") return BoundaryCondition::neumann;
  fail(ErrorKind::InvalidArgument, "unknown boundary condition '" + name + "'");
}

std::uint64_t fock_dimension(std::size_t sites, int n) {
  if (n < 0) fail(ErrorKind::InvalidArgument, "negative particle number");
  // C(n + sites - 1, n) built as a running product of exact binomials.
  unsigned __int128 c = 1;
  for (int k = 1; k <= n; ++k) {
    c = c * (sites - 1 + static_cast<unsigned>(k)) / static_cast<unsigned>(k);
    if (c > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

FockBasis::FockBasis(std::size_t sites, int n) : sites_(sites), n_(n) {
  if (sites == 0) fail(ErrorKind::InvalidArgument, "Fock basis needs at least one site");
  dim_ = fock_dimension(sites, n);
  if (dim_ == std::numeric_limits<std::uint64_t>::max())
    fail(ErrorKind::DimensionCap, "Fock dimension overflows 64 bits");
  const std::size_t rows = sites + static_cast<std::size_t>(n);
  const std::size_t cols = static_cast<std::size_t>(n) + 1;
  table_.assign(rows * cols, 0);
  for (std::size_t m = 0; m < rows; ++m) {
    table_[m * cols] = 1;
    for (std::size_t k = 1; k < cols && k <= m; ++k)
      table_[m * cols + k] = table_[(m - 1) * cols + k - 1] + table_[(m - 1) * cols + k];
  }
}

std::uint64_t FockBasis::binom(std::size_t m, int k) const {
  return table_[m * (static_cast<std::size_t>(n_) + 1) + static_cast<std::size_t>(k)];
}

std::uint64_t FockBasis::rank(const std::vector<int>& s) const {
  std::uint64_t r = 0;
  for (int i = 0; i < n_; ++i) r += binom(static_cast<std::size_t>(s[i] + i), i + 1);
  return r;
}

std::vector<int> FockBasis::unrank(std::uint64_t r) const {
  if (r >= dim_) fail(ErrorKind::InvalidArgument, "rank outside the Fock basis");
  std::vector<int> s(static_cast<std::size_t>(n_));
  std::size_t hi = sites_ + static_cast<std::size_t>(n_) - 1;  // exclusive bound on y
  for (int i = n_ - 1; i >= 0; --i) {
    // largest y in [i, hi) with C(y, i+1) <= r
    std::size_t lo = static_cast<std::size_t>(i), top = hi - 1;
    while (lo < top) {
      const std::size_t mid = (lo + top + 1) / 2;
      if (binom(mid, i + 1) <= r) lo = mid;
      else top = mid - 1;
    }
    r -= binom(lo, i + 1);
    s[i] = static_cast<int>(lo) - i;
    hi = lo;
  }
  return s;
}

bool FockBasis::next(std::vector<int>& s) const {
  for (int i = 0; i < n_; ++i) {
    const bool room = i + 1 < n_ ? s[i] < s[i + 1] : s[i] < static_cast<int>(sites_) - 1;
    if (room) {
      ++s[i];
      for (int j = 0; j < i; ++j) s[j] = 0;
      return true;
    }
  }
  return false;
}

std::vector<int> FockBasis::occupations(const std::vector<int>& s) const {
  std::vector<int> occ(sites_, 0);
  for (int x : s) ++occ[static_cast<std::size_t>(x)];
  return occ;
}

BoseHubbardOperator::BoseHubbardOperator(const LatticeModel& model, int ell, int n, double U,
                                         BoundaryCondition bc, const EDConfig& config)
    : basis_(FiniteLattice(model, ell).size(), n), bc_(bc), ell_(ell), U_(U) {
  if (!(U >= 0.0) || !std::isfinite(U))
    fail(ErrorKind::InvalidArgument, "U must be finite and nonnegative");
  if (basis_.dimension() > config.max_dimension)
    fail(ErrorKind::DimensionCap, "Fock dimension " + std::to_string(basis_.dimension()) +
                                      " exceeds the cap " + std::to_string(config.max_dimension));
  const LaplacianMatrix lap = build_laplacian(
      model, ell, bc == BoundaryCondition::periodic ? LaplacianKind::periodic
                                                    : LaplacianKind::neumann);
  const std::size_t sites = lap.size();
  onsite_.assign(sites, 0.0);
  hops_.assign(sites, {});
  for (int col = 0; col < lap.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(lap.matrix, col); it; ++it) {
      if (it.row() == col) onsite_[col] = it.value();
      else if (it.value() != 0.0) hops_[col].emplace_back(static_cast<int>(it.row()), it.value());
    }
  }
}

double BoseHubbardOperator::diagonal(const std::vector<int>& s) const {
  double kinetic = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double c = static_cast<double>(j - i);
    kinetic += onsite_[static_cast<std::size_t>(s[i])] * c;
    pairs += c * (c - 1.0);
    i = j;
  }
  return kinetic + 0.5 * U_ * pairs;
}

namespace {

constexpr std::size_t kRowBlock = 4096;

// Visits every state reachable from `s` by one hop: visit(target, amplitude).
// `work` is scratch of size n.
template <class Visit>
void for_each_hop(const std::vector<int>& s,
                  const std::vector<std::vector<std::pair<int, double>>>& hops,
                  std::vector<int>& work, Visit&& visit) {
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && s[j] == s[i]) ++j;
    const int from = s[i];
    const double count_from = static_cast<double>(j - i);
    for (const auto& [to, w] : hops[static_cast<std::size_t>(from)]) {
      // target = s with one copy of `from` (position i) replaced by `to`, resorted
      std::size_t lo = 0;
      while (lo < n && s[lo] < to) ++lo;
      std::size_t hi = lo;
      while (hi < n && s[hi] == to) ++hi;
      const double count_to = static_cast<double>(hi - lo);
      std::size_t k = 0;
      bool placed = false;
      for (std::size_t p = 0; p < n; ++p) {
        if (p == i) continue;
        if (!placed && s[p] >= to) {
          work[k++] = to;
          placed = true;
        }
        work[k++] = s[p];
      }
      if (!placed) work[k++] = to;
      visit(work, w * std::sqrt(count_from * (count_to + 1.0)));
    }
    i = j;
  }
}

}  // namespace

void BoseHubbardOperator::apply(const double* x, double* y) const {
  const std::uint64_t dim = basis_.dimension();
  parallel::for_blocks(dim, kRowBlock, [&](std::size_t begin, std::size_t end) {
    std::vector<int> s = basis_.unrank(begin);
    std::vector<int> work(s.size());
    for (std::size_t r = begin; r < end; ++r) {
      double acc = diagonal(s) * x[r];
      for_each_hop(s, hops_, work, [&](const std::vector<int>& t, double amp) {
        acc += amp * x[basis_.rank(t)];
      });
      y[r] = acc;
      basis_.next(s);
    }
  });
}

Eigen::MatrixXd BoseHubbardOperator::to_dense() const {
  const std::uint64_t dim = basis_.dimension();
  if (dim > 4000) fail(ErrorKind::DimensionCap, "dense Hamiltonian limited to dimension 4000");
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
  std::vector<int> s = basis_.unrank(0);
  std::vector<int> work(s.size());
  for (Eigen::Index r = 0; r < d; ++r) {
    H(r, r) = diagonal(s);
    for_each_hop(s, hops_, work, [&](const std::vector<int>& t, double amp) {
      H(r, static_cast<Eigen::Index>(basis_.rank(t))) += amp;
    });
    basis_.next(s);
  }
  return H;
}

std::vector<double> BoseHubbardOperator::site_occupations(const Eigen::VectorXd& state) const {
  std::vector<double> occ(basis_.sites(), 0.0);
  std::vector<int> s = basis_.unrank(0);
  for (Eigen::Index r = 0; r < state.size(); ++r) {
    const double p = state[r] * state[r];
    for (int x : s) occ[static_cast<std::size_t>(x)] += p;
    basis_.next(s);
  }
  return occ;
}

BoseHubbardOperator build_hamiltonian(const LatticeModel& model, int ell, int n, double U,
                                      BoundaryCondition bc, const EDConfig& config) {
  return BoseHubbardOperator(model, ell, n, U, bc, config);
}

EDResult ground_state_energy(const BoseHubbardOperator& H, const LanczosParams& params) {
  const LanczosResult lr = lanczos_smallest(
      H.dimension(), [&](const double* x, double* y) { H.apply(x, y); }, params);
  EDResult r;
  r.e0 = lr.eigenvalue;
  r.residual = lr.residual;
  r.iterations = lr.iterations;
  r.bc = H.bc();
  r.basis_dim = H.dimension();
  r.vector = lr.vector;
  return r;
}

double dense_ground_energy(const BoseHubbardOperator& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.to_dense(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

EDResult two_body_relative(const LatticeModel& model, double U, int L,
                           const LanczosParams& params) {
  if (!(U >= 0.0) || !std::isfinite(U))
    fail(ErrorKind::InvalidArgument, "U must be finite and nonnegative");
  const LaplacianMatrix lap = build_laplacian(model, L, LaplacianKind::periodic);
  const Eigen::Index origin =
      static_cast<Eigen::Index>(FiniteLattice(model, L).index(IVec3{0, 0, 0}));
  const std::size_t n = lap.size();
  const auto& A = lap.matrix;
  const LanczosResult lr = lanczos_smallest(
      n,
      [&](const double* x, double* y) {
        Eigen::Map<const Eigen::VectorXd> xv(x, static_cast<Eigen::Index>(n));
        Eigen::Map<Eigen::VectorXd> yv(y, static_cast<Eigen::Index>(n));
        yv.noalias() = 2.0 * (A * xv);
        yv[origin] += U * xv[origin];
      },
      params);
  EDResult r;
  r.e0 = lr.eigenvalue;
  r.residual = lr.residual;
  r.iterations = lr.iterations;
  r.bc = BoundaryCondition::periodic;
  r.basis_dim = n;
  r.vector = lr.vector;
  return r;
}

TwoBodyExtraction two_body_scattering_extraction(const LatticeModel& model, double U,
                                                 const std::vector<int>& L_list,
                                                 bool use_relative, double poor_fit_tolerance,
                                                 const EDConfig& config) {
  if (L_list.size() < 3)
    fail(ErrorKind::InvalidArgument, "extraction needs at least three box sizes");
  for (std::size_t i = 0; i < L_list.size(); ++i) {
    if (L_list[i] < model.hopping_length())
      fail(ErrorKind::GridTooCoarse, "two-body boxes must satisfy L >= R0");
    if (i > 0 && L_list[i] <= L_list[i - 1])
      fail(ErrorKind::InvalidArgument, "L_list must be increasing");
  }
  LanczosParams params;
  params.want_vector = false;
  TwoBodyExtraction out;
  std::vector<double> x;
  for (int L : L_list) {
    const double volume = static_cast<double>(FiniteLattice(model, L).size());
    double e0 = 0.0;
    if (use_relative) {
      e0 = two_body_relative(model, U, L, params).e0;
    } else {
      const auto H = build_hamiltonian(model, L, 2, U, BoundaryCondition::periodic, config);
      e0 = ground_state_energy(H, params).e0;
    }
    out.L.push_back(L);
    out.scaled_energy.push_back(e0 * volume);
    x.push_back(1.0 / (L + 1.0));
  }
  // Plain AIC: with four points the small-sample correction is undefined for
  // the quadratic model, and mixing corrected and plain values would bias the choice.
  const PolyFit linear = polyfit(x, out.scaled_energy, 1);
  PolyFit chosen = linear;
  if (x.size() >= 4) {
    const PolyFit quadratic = polyfit(x, out.scaled_energy, 2);
    if (quadratic.aic(false) < linear.aic(false)) chosen = quadratic;
  }
  out.fit_degree = static_cast<int>(chosen.coeffs.size()) - 1;
  out.e_inf = chosen.coeffs[0];
  out.max_residual = chosen.max_residual;
  // Relative to the data scale, with an absolute floor for eigenvalue roundoff
  // when the energies vanish (U = 0).
  double scale = std::abs(out.e_inf);
  for (double v : out.scaled_energy) scale = std::max(scale, std::abs(v));
  if (chosen.max_residual > poor_fit_tolerance * scale + 1e-8)
    fail(ErrorKind::PoorFit, "extrapolation residual " + std::to_string(chosen.max_residual) +
                                 " exceeds tolerance for e_inf = " + std::to_string(out.e_inf));
  return out;
}

std::map<int, double> sector_energies(const LatticeModel& model, double U, int ell, int n_max,
                                      BoundaryCondition bc, const EDConfig& config) {
  if (n_max < 0) fail(ErrorKind::InvalidArgument, "n_max must be nonnegative");
  LanczosParams params;
  params.want_vector = false;
  std::map<int, double> out;
  for (int n = 0; n <= n_max; ++n)
    out[n] = ground_state_energy(build_hamiltonian(model, ell, n, U, bc, config), params).e0;
  return out;
}

std::vector<EnsembleRow> ensemble_inequality_check(const LatticeModel& model, double U, int ell,
                                                   int n_max, BoundaryCondition bc,
                                                   const EDConfig& config) {
  const auto E = sector_energies(model, U, ell, n_max, bc, config);
  std::vector<EnsembleRow> rows;
  for (int n = 0; n <= n_max; ++n) {
    // Lower convex envelope at n: best mixture of sectors a <= n <= b with mean n.
    double best = E.at(n);
    for (int a = 0; a <= n; ++a)
      for (int b = n; b <= n_max; ++b) {
        if (a == b) continue;
        const double w = static_cast<double>(n - a) / (b - a);
        best = std::min(best, (1.0 - w) * E.at(a) + w * E.at(b));
      }
    rows.push_back({n, E.at(n), best});
  }
  return rows;
}

}  // namespace latbose
