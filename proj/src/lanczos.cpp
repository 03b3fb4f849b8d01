#include "latbose/lanczos.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "latbose/errors.hpp"
#include "latbose/parallel.hpp"

namespace latbose {

namespace {

constexpr std::size_t kBlock = 1 << 14;

double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return parallel::reduce_blocks(static_cast<std::size_t>(a.size()), kBlock,
                                 [&](std::size_t s, std::size_t e) {
                                   double acc = 0.0;
                                   for (std::size_t i = s; i < e; ++i) acc += a[i] * b[i];
                                   return acc;
                                 });
}

// y += alpha * x
void axpy(double alpha, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  parallel::for_blocks(static_cast<std::size_t>(x.size()), kBlock,
                       [&](std::size_t s, std::size_t e) {
                         for (std::size_t i = s; i < e; ++i) y[i] += alpha * x[i];
                       });
}

void scale(double alpha, Eigen::VectorXd& y) {
  parallel::for_blocks(static_cast<std::size_t>(y.size()), kBlock,
                       [&](std::size_t s, std::size_t e) {
                         for (std::size_t i = s; i < e; ++i) y[i] *= alpha;
                       });
}

void project_out(const std::vector<Eigen::VectorXd>& basis, Eigen::VectorXd& w) {
  for (const auto& q : basis) axpy(-dot(q, w), q, w);
}

Eigen::VectorXd start_vector(std::size_t n, const LanczosParams& params) {
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> dist(params.positive_start ? 0.5 : -1.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

struct Ritz {
  double theta = 0.0;
  Eigen::VectorXd y;
};

Ritz smallest_ritz(const std::vector<double>& alpha, const std::vector<double>& beta, int k) {
  Ritz r;
  if (k == 1) {
    r.theta = alpha[0];
    r.y = Eigen::VectorXd::Ones(1);
    return r;
  }
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(beta.data(), k - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  r.theta = solver.eigenvalues()[0];
  r.y = solver.eigenvectors().col(0);
  return r;
}

}  // namespace

LanczosResult lanczos_smallest(std::size_t n, const MatVec& apply, const LanczosParams& params,
                               const std::vector<Eigen::VectorXd>& deflate) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "Lanczos needs a nonempty space");
  if (deflate.size() >= n) fail(ErrorKind::InvalidArgument, "deflation removes the whole space");
  const int kmax = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(params.max_iterations), n - deflate.size()));
  const bool reorth = static_cast<std::size_t>(kmax + 1) * n * sizeof(double) <=
                      params.memory_budget_bytes;

  Eigen::VectorXd v = start_vector(n, params);
  project_out(deflate, v);
  const double nv = std::sqrt(dot(v, v));
  if (!(nv > 0.0)) fail(ErrorKind::NoConvergence, "Lanczos start vector vanished after deflation");
  scale(1.0 / nv, v);
  const Eigen::VectorXd v_start = v;

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;
  Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));

  LanczosResult result;
  result.reorthogonalized = reorth;
  Ritz ritz;
  bool converged = false;
  int k = 0;
  for (; k < kmax; ++k) {
    if (reorth) basis.push_back(v);
    apply(v.data(), w.data());
    const double a = dot(v, w);
    alpha.push_back(a);
    axpy(-a, v, w);
    if (k > 0) axpy(-beta.back(), v_prev, w);
    if (reorth) {
      for (int pass = 0; pass < 2; ++pass) project_out(basis, w);
    }
    project_out(deflate, w);
    const double b = std::sqrt(dot(w, w));

    const bool exhausted = b <= 1e-14 * std::max(1.0, std::abs(a)) || k + 1 == kmax;
    if ((k + 1) % 5 == 0 || exhausted) {
      ritz = smallest_ritz(alpha, beta, k + 1);
      const double estimate = b * std::abs(ritz.y[k]);
      if (estimate <= params.tolerance * std::max(1.0, std::abs(ritz.theta)) || exhausted) {
        result.residual = estimate;
        converged = estimate <= params.tolerance * std::max(1.0, std::abs(ritz.theta)) ||
                    b <= 1e-14 * std::max(1.0, std::abs(a));
        ++k;
        break;
      }
    }
    beta.push_back(b);
    v_prev.swap(v);
    v = w;
    scale(1.0 / b, v);
  }
  result.iterations = k;
  result.eigenvalue = ritz.theta;
  if (!converged)
    fail(ErrorKind::NoConvergence, "Lanczos did not reach residual " +
                                       std::to_string(params.tolerance) + " in " +
                                       std::to_string(k) + " iterations");
  if (!params.want_vector) return result;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (reorth) {
    for (int j = 0; j < k; ++j) axpy(ritz.y[j], basis[j], x);
  } else {
    // Second pass: regenerate the Krylov vectors from the same start.
    v = v_start;
    v_prev.setZero();
    for (int j = 0; j < k; ++j) {
      axpy(ritz.y[j], v, x);
      if (j + 1 == k) break;
      apply(v.data(), w.data());
      axpy(-alpha[j], v, w);
      if (j > 0) axpy(-beta[j - 1], v_prev, w);
      project_out(deflate, w);
      v_prev.swap(v);
      v = w;
      scale(1.0 / beta[j], v);
    }
  }
  scale(1.0 / std::sqrt(dot(x, x)), x);
  apply(x.data(), w.data());
  result.eigenvalue = dot(x, w);
  axpy(-result.eigenvalue, x, w);
  result.residual = std::sqrt(dot(w, w));
  result.vector = std::move(x);
  return result;
}

}  // namespace latbose
