#include "latbose/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "latbose/lanczos.hpp"
#include "latbose/parallel.hpp"

namespace latbose {

std::string to_string(LaplacianKind kind) {
  switch (kind) {
    case LaplacianKind::periodic: return "periodic";
    case LaplacianKind::neumann: return "neumann";
    case LaplacianKind::neumann_special: return "neumann_special";
  }
  return "unknown";
}

LaplacianKind parse_laplacian_kind(const std::string& name) {
  if (name == "periodic") return LaplacianKind::periodic;
  if (name == "neumann") return LaplacianKind::neumann;
  if (name == "neumann_special") return LaplacianKind::neumann_special;
  fail(ErrorKind::InvalidArgument, "unknown Laplacian kind '" + name + "'");
}

namespace {

bool primitive(const Hopping& h) {
  return (h.m[0] != 0) + (h.m[1] != 0) + (h.m[2] != 0) == 1 &&
         std::abs(h.m[0] + h.m[1] + h.m[2]) == 1;
}

}  // namespace

bool primitive_only(const LatticeModel& model) {
  return std::all_of(model.hopping().begin(), model.hopping().end(), primitive);
}

namespace {

// Calls edge(i, j, t) once per undirected edge of the requested kind.
template <class Edge>
void for_each_edge(const LatticeModel& model, int ell, LaplacianKind kind, Edge&& edge) {
  const FiniteLattice box(model, ell);
  if (kind == LaplacianKind::periodic) box.require_hopping_fits();
  const int half = ell / 2;
  const std::size_t n = box.size();
  for (std::size_t i = 0; i < n; ++i) {
    const IVec3 x = box.coords(i);
    for (const auto& h : model.hopping()) {
      if (kind == LaplacianKind::neumann_special && !primitive(h)) continue;
      const IVec3 y{x[0] + h.m[0], x[1] + h.m[1], x[2] + h.m[2]};
      if (kind != LaplacianKind::periodic) {
        bool inside = true;
        for (int c = 0; c < 3; ++c) inside = inside && y[c] >= -half && y[c] <= half;
        if (!inside) continue;
      }
      edge(i, box.index(y), h.t);
    }
  }
}

SpectrumResult from_values(LaplacianKind kind, int ell, std::vector<double> values) {
  std::stable_sort(values.begin(), values.end());
  SpectrumResult r;
  r.kind = kind;
  r.ell = ell;
  r.eigenvalues = std::move(values);
  r.gap = r.eigenvalues.size() > 1 ? r.eigenvalues[1] : 0.0;
  return r;
}

}  // namespace

LaplacianMatrix build_laplacian(const LatticeModel& model, int ell, LaplacianKind kind) {
  require_even_size(ell);
  const std::size_t n = FiniteLattice(model, ell).size();
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> diagonal(n, 0.0);
  for_each_edge(model, ell, kind, [&](std::size_t i, std::size_t j, double t) {
    diagonal[i] += t;
    diagonal[j] += t;
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), -t);
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), -t);
  });
  for (std::size_t i = 0; i < n; ++i)
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diagonal[i]);
  LaplacianMatrix lap;
  lap.kind = kind;
  lap.ell = ell;
  lap.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  lap.matrix.setFromTriplets(triplets.begin(), triplets.end());
  lap.matrix.makeCompressed();
  return lap;
}

double laplacian_form(const LatticeModel& model, int ell, LaplacianKind kind,
                      const Eigen::VectorXd& u) {
  double q = 0.0;
  for_each_edge(model, ell, kind, [&](std::size_t i, std::size_t j, double t) {
    const double d = u[static_cast<Eigen::Index>(i)] - u[static_cast<Eigen::Index>(j)];
    q += t * d * d;
  });
  return q;
}

SpectrumResult dense_spectrum(const LaplacianMatrix& lap, bool want_vectors) {
  const std::size_t n = lap.size();
  if (n > kDenseLimit)
    fail(ErrorKind::DimensionCap, "dense eigensolver limited to " + std::to_string(kDenseLimit) +
                                      " sites, got " + std::to_string(n));
  Eigen::MatrixXd a = Eigen::MatrixXd(lap.matrix);
  std::vector<double> w(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'U',
                     static_cast<lapack_int>(n), a.data(), static_cast<lapack_int>(n), w.data());
  if (info != 0)
    fail(ErrorKind::NoConvergence, "dsyevd failed with info = " + std::to_string(info));
  SpectrumResult r;
  r.kind = lap.kind;
  r.ell = lap.ell;
  r.eigenvalues = std::move(w);  // dsyevd returns ascending order
  r.gap = n > 1 ? r.eigenvalues[1] : 0.0;
  if (want_vectors) r.eigenvectors = std::move(a);
  return r;
}

std::vector<double> neumann_1d_factors(double t, int ell) {
  std::vector<double> f(static_cast<std::size_t>(ell) + 1);
  for (int k = 0; k <= ell; ++k) f[k] = 4.0 * t * sin2_pi_ratio(k, 2LL * (ell + 1));
  return f;
}

SpectrumResult special_neumann_eigs(const LatticeModel& model, int ell) {
  require_even_size(ell);
  const auto f1 = neumann_1d_factors(model.primitive_hopping(0), ell);
  const auto f2 = neumann_1d_factors(model.primitive_hopping(1), ell);
  const auto f3 = neumann_1d_factors(model.primitive_hopping(2), ell);
  std::vector<double> values;
  values.reserve(f1.size() * f2.size() * f3.size());
  for (double a : f1)
    for (double b : f2)
      for (double c : f3) values.push_back(a + b + c);
  return from_values(LaplacianKind::neumann_special, ell, std::move(values));
}

SpectrumResult periodic_spectrum(const LatticeModel& model, int ell) {
  const FiniteLattice box(model, ell);
  box.require_hopping_fits();
  return from_values(LaplacianKind::periodic, ell, grid_dispersion(box));
}

SpectrumResult neumann_spectrum(const LatticeModel& model, int ell) {
  if (primitive_only(model)) {
    SpectrumResult r = special_neumann_eigs(model, ell);
    r.kind = LaplacianKind::neumann;
    return r;
  }
  return dense_spectrum(build_laplacian(model, ell, LaplacianKind::neumann));
}

double neumann_gap(const LatticeModel& model, int ell) {
  if (primitive_only(model)) return special_neumann_eigs(model, ell).gap;
  const LaplacianMatrix lap = build_laplacian(model, ell, LaplacianKind::neumann);
  const std::size_t n = lap.size();
  if (n <= 1000) return dense_spectrum(lap).gap;
  const Eigen::VectorXd constant =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(double(n)));
  LanczosParams params;
  params.positive_start = false;
  params.want_vector = false;
  params.tolerance = 1e-11;
  params.max_iterations = 3000;
  const auto& A = lap.matrix;
  const auto r = lanczos_smallest(
      n,
      [&](const double* x, double* y) {
        Eigen::Map<const Eigen::VectorXd> xv(x, static_cast<Eigen::Index>(n));
        Eigen::Map<Eigen::VectorXd> yv(y, static_cast<Eigen::Index>(n));
        yv.noalias() = A * xv;
      },
      params, {constant});
  return r.eigenvalue;
}

ComparisonReport comparison_check(const LatticeModel& model, int ell) {
  ComparisonReport rep;
  rep.ell = ell;
  rep.special = special_neumann_eigs(model, ell);
  rep.neumann = dense_spectrum(build_laplacian(model, ell, LaplacianKind::neumann));
  rep.periodic = periodic_spectrum(model, ell);
  double s1 = std::numeric_limits<double>::infinity(), s2 = s1;
  for (std::size_t k = 0; k < rep.neumann.eigenvalues.size(); ++k) {
    s1 = std::min(s1, rep.neumann.eigenvalues[k] - rep.special.eigenvalues[k]);
    s2 = std::min(s2, rep.periodic.eigenvalues[k] - rep.neumann.eigenvalues[k]);
  }
  rep.min_slack_special_neumann = s1;
  rep.min_slack_neumann_periodic = s2;
  if (s1 < -1e-10 || s2 < -1e-10)
    fail(ErrorKind::OrderingViolation,
         "eigenvalue ordering violated at l=" + std::to_string(ell) + " (slacks " +
             std::to_string(s1) + ", " + std::to_string(s2) + ")");
  return rep;
}

GapReport gap_check(const LatticeModel& model, const std::vector<int>& ells) {
  GapReport rep;
  rep.c_gap = model.c_gap();
  for (int ell : ells) {
    require_even_size(ell);
    if (ell < model.hopping_length())
      fail(ErrorKind::GridTooCoarse, "gap_check needs l >= R0");
    GapRow row;
    row.ell = ell;
    row.gap = neumann_gap(model, ell);
    const double side = ell + 1.0;
    row.lower_bound = rep.c_gap / (side * side);
    row.scaled = row.gap * side * side;
    rep.C_gap = std::max(rep.C_gap, row.scaled);
    rep.rows.push_back(row);
    if (row.gap < row.lower_bound - 1e-10)
      fail(ErrorKind::GapBoundViolation,
           "Neumann gap " + std::to_string(row.gap) + " below c_gap/(l+1)^2 at l=" +
               std::to_string(ell));
  }
  return rep;
}

namespace {
double inverse_trace(const std::vector<double>& values) {
  std::vector<double> inv;
  inv.reserve(values.size());
  for (std::size_t k = 1; k < values.size(); ++k) inv.push_back(1.0 / values[k]);
  return parallel::pairwise_sum(inv);
}
}  // namespace

TraceReport trace_inverse_comparison(const LatticeModel& model, const std::vector<int>& ells) {
  TraceReport rep;
  for (int ell : ells) {
    TraceRow row;
    row.ell = ell;
    const SpectrumResult per = periodic_spectrum(model, ell);
    const SpectrumResult neu = neumann_spectrum(model, ell);
    const double volume = static_cast<double>(per.eigenvalues.size());
    row.periodic = inverse_trace(per.eigenvalues) / volume;
    row.neumann = inverse_trace(neu.eigenvalues) / volume;
    row.difference = std::abs(row.neumann - row.periodic);
    row.scaled = row.difference * std::cbrt(ell + 1.0);
    rep.C_fit = std::max(rep.C_fit, row.scaled);
    rep.rows.push_back(row);
  }
  return rep;
}

double trace_power(const SpectrumResult& spectrum, double nu) {
  if (!(nu > 1.5)) fail(ErrorKind::InvalidArgument, "trace_power needs nu > 3/2");
  std::vector<double> terms;
  for (std::size_t k = 1; k < spectrum.eigenvalues.size(); ++k)
    terms.push_back(std::pow(spectrum.eigenvalues[k], -nu));
  return parallel::pairwise_sum(terms) / static_cast<double>(spectrum.eigenvalues.size());
}

double trace_power(const LatticeModel& model, int ell, double nu) {
  return trace_power(neumann_spectrum(model, ell), nu);
}

}  // namespace latbose
