#include "latbose/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "latbose/parallel.hpp"

namespace latbose {

void QuadratureParams::validate() const {
  if (grid_resolution < 8 || grid_resolution % 2 != 0)
    fail(ErrorKind::InvalidArgument, "grid_resolution must be an even integer >= 8");
  if (!(singularity_radius > 0.0 && singularity_radius <= 0.25))
    fail(ErrorKind::InvalidArgument, "singularity_radius must lie in (0, 0.25]");
  if (refinement_levels < 2)
    fail(ErrorKind::InvalidArgument, "refinement_levels must be at least 2");
  if (!(target_rel_error > 0.0))
    fail(ErrorKind::InvalidArgument, "target_rel_error must be positive");
  if (gauss_order < 4 || gauss_order > 64)
    fail(ErrorKind::InvalidArgument, "gauss_order must lie in [4, 64]");
  if (max_levels < 4) fail(ErrorKind::InvalidArgument, "max_levels must be at least 4");
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;

  auto rule = std::make_unique<GaussRule>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Tricomi initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule->nodes[i] = -x;
    rule->nodes[n - 1 - i] = x;
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
  slot = std::move(rule);
  return *slot;
}

namespace {

constexpr int kMaxGaussOrder = 16;

double checked(double v, const Vec3& theta) {
  if (!std::isfinite(v)) {
    fail(ErrorKind::NonFiniteIntegrand,
         "integrand is not finite at theta = (" + std::to_string(theta[0]) + ", " +
             std::to_string(theta[1]) + ", " + std::to_string(theta[2]) + ")");
  }
  return v;
}

// Tensor Gauss rule over the cube [lo, lo + side]^3 (componentwise lo).
double cube_rule(const ReducedIntegrand& f, const Vec3& lo, double side, const GaussRule& g) {
  const int n = static_cast<int>(g.nodes.size());
  const double half = 0.5 * side;
  double total = 0.0;
  Vec3 x;
  for (int i = 0; i < n; ++i) {
    x[0] = lo[0] + half * (g.nodes[i] + 1.0);
    double si = 0.0;
    for (int j = 0; j < n; ++j) {
      x[1] = lo[1] + half * (g.nodes[j] + 1.0);
      double sj = 0.0;
      for (int k = 0; k < n; ++k) {
        x[2] = lo[2] + half * (g.nodes[k] + 1.0);
        sj += g.weights[k] * checked(f(x), x);
      }
      si += g.weights[j] * sj;
    }
    total += g.weights[i] * si;
  }
  return total * half * half * half;
}

// Integral over the cube [-s/2, s/2]^3 assuming f is homogeneous of degree -d
// there: each of the six pyramids with apex at the origin reduces to a face
// integral of f at the cube surface.
double origin_cube(const ReducedIntegrand& f, double s, int degree, const GaussRule& g) {
  const int n = static_cast<int>(g.nodes.size());
  double faces = 0.0;
  Vec3 w;
  for (int axis = 0; axis < 3; ++axis) {
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    for (int sign : {-1, 1}) {
      double face = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          w[axis] = 0.5 * sign * s;
          w[a1] = 0.5 * g.nodes[i] * s;
          w[a2] = 0.5 * g.nodes[j] * s;
          face += g.weights[i] * g.weights[j] * checked(f(w), w);
        }
      }
      faces += 0.25 * face;  // [-1,1]^2 weights onto the unit face
    }
  }
  return 0.5 * s * s * s * faces / (3.0 - degree);
}

QuadratureResult graded(const ReducedIntegrand& f, SingularOrder order,
                        const QuadratureParams& params, double max_frequency) {
  const GaussRule& hi = gauss_legendre(params.gauss_order);
  const GaussRule& lo = gauss_legendre(params.gauss_order - 2);
  const GaussRule& face_rule = gauss_legendre(params.gauss_order + 4);
  const int degree = order == SingularOrder::inverse_quadratic ? 2 : 0;
  const std::size_t per_cube = hi.nodes.size() * hi.nodes.size() * hi.nodes.size() +
                               lo.nodes.size() * lo.nodes.size() * lo.nodes.size();

  QuadratureResult result;
  double shells = 0.0, gauss_err = 0.0, abs_scale = 0.0;
  double previous = 0.0, last_change = 0.0;
  int stable = 0;

  for (int level = 0; level < params.max_levels; ++level) {
    const double h = std::ldexp(1.0, -level - 1);  // outer half-width of this shell
    const double side = 0.5 * h;
    int q = 1;
    if (max_frequency > 0.0) {
      q = std::max(1, static_cast<int>(std::ceil(side * max_frequency / 0.5)));
      if (q > 16)
        fail(ErrorKind::OscillatoryNoConvergence,
             "oscillation frequency " + std::to_string(max_frequency) +
                 " is too high for the graded rule");
    }

    std::vector<Vec3> corners;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          const bool inner = (i == 1 || i == 2) && (j == 1 || j == 2) && (k == 1 || k == 2);
          if (inner) continue;
          const Vec3 base(-h + i * side, -h + j * side, -h + k * side);
          const double sub = side / q;
          for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
              for (int c = 0; c < q; ++c) corners.push_back(base + Vec3(a * sub, b * sub, c * sub));
        }
    const double sub = side / q;
    std::vector<double> vhi(corners.size()), vlo(corners.size());
    parallel::for_blocks(corners.size(), 1, [&](std::size_t b0, std::size_t b1) {
      for (std::size_t c = b0; c < b1; ++c) {
        vhi[c] = cube_rule(f, corners[c], sub, hi);
        vlo[c] = cube_rule(f, corners[c], sub, lo);
      }
    });
    const double shell_hi = parallel::pairwise_sum(vhi);
    const double shell_lo = parallel::pairwise_sum(vlo);
    for (double v : vhi) abs_scale += std::abs(v);
    shells += shell_hi;
    gauss_err += std::abs(shell_hi - shell_lo);
    result.evaluations += corners.size() * per_cube;

    const double s = h;  // side of the remaining origin cube
    const double centre = origin_cube(f, s, degree, face_rule);
    result.evaluations += 6 * face_rule.nodes.size() * face_rule.nodes.size();

    const double total = shells + centre;
    const double denom = std::max({std::abs(total), 1e-3 * abs_scale, 1e-300});
    last_change = std::abs(total - previous);
    previous = total;
    result.value = total;
    result.levels = level + 1;

    if (level == 0 || 0.5 * s > params.singularity_radius * 0.5) continue;
    if (last_change <= 0.1 * params.target_rel_error * denom) {
      if (++stable >= 2) {
        result.rel_error = (gauss_err + last_change) / denom;
        if (result.rel_error > params.target_rel_error)
          fail(ErrorKind::NoConvergence,
               "graded quadrature error estimate " + std::to_string(result.rel_error) +
                   " exceeds target");
        return result;
      }
    } else {
      stable = 0;
    }
  }
  fail(ErrorKind::NoConvergence, "graded quadrature did not settle within " +
                                     std::to_string(params.max_levels) + " shells");
}

double uniform_level(const ReducedIntegrand& f, int N, int degree, const GaussRule& face_rule) {
  const double h = 1.0 / N;
  const std::size_t n = static_cast<std::size_t>(N);
  const double sum = parallel::reduce_blocks(n, 1, [&](std::size_t i0, std::size_t i1) {
    double acc = 0.0;
    Vec3 x;
    for (std::size_t i = i0; i < i1; ++i) {
      const long ii = static_cast<long>(i) - N / 2;
      x[0] = ii * h;
      for (long j = -N / 2; j < N / 2; ++j) {
        x[1] = j * h;
        double row = 0.0;
        for (long k = -N / 2; k < N / 2; ++k) {
          if (ii == 0 && j == 0 && k == 0) continue;
          x[2] = k * h;
          row += checked(f(x), x);
        }
        acc += row;
      }
    }
    return acc;
  });
  return sum * h * h * h + origin_cube(f, h, degree, face_rule);
}

QuadratureResult uniform(const ReducedIntegrand& f, SingularOrder order,
                         const QuadratureParams& params) {
  const int levels = params.refinement_levels;
  const int coarsest = params.grid_resolution >> (levels - 1);
  if (coarsest < 4 || (coarsest << (levels - 1)) != params.grid_resolution || coarsest % 2)
    fail(ErrorKind::InvalidArgument,
         "grid_resolution must be an even multiple of 2^(refinement_levels-1)");
  const int degree = order == SingularOrder::inverse_quadratic ? 2 : 0;
  const GaussRule& face_rule = gauss_legendre(params.gauss_order + 4);

  // Richardson table over grid doublings; error terms are odd powers of h for
  // the excised 1/|p|^2 singularity.
  std::vector<std::vector<double>> table(levels);
  QuadratureResult result;
  for (int j = 0; j < levels; ++j) {
    const int N = coarsest << j;
    table[j].push_back(uniform_level(f, N, degree, face_rule));
    result.evaluations += static_cast<std::size_t>(N) * N * N;
    for (int k = 1; k <= j; ++k) {
      const int p = degree == 2 ? 2 * k - 1 : 2 * k + 1;
      const double factor = std::ldexp(1.0, p) - 1.0;
      table[j].push_back(table[j][k - 1] + (table[j][k - 1] - table[j - 1][k - 1]) / factor);
    }
  }
  const auto& last = table.back();
  result.value = last.back();
  result.levels = levels;
  const double denom = std::max(std::abs(result.value), 1e-300);
  result.rel_error = std::abs(last.back() - last[last.size() - 2]) / denom;
  if (result.rel_error > params.target_rel_error)
    fail(ErrorKind::NoConvergence, "uniform quadrature error estimate " +
                                       std::to_string(result.rel_error) + " exceeds target");
  return result;
}

}  // namespace

QuadratureResult bz_integrate_reduced(const LatticeModel& model, const ReducedIntegrand& f,
                                      SingularOrder order, const QuadratureParams& params,
                                      double max_frequency) {
  (void)model;  // the reduced zone is the unit cube for every lattice
  params.validate();
  if (params.method == QuadratureMethod::uniform) return uniform(f, order, params);
  // Strongly anisotropic zones can leave the embedded error estimate above the
  // target at the requested order; raise the order before giving up.
  QuadratureParams p = params;
  for (;;) {
    try {
      return graded(f, order, p, max_frequency);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence || p.gauss_order + 2 > kMaxGaussOrder) throw;
      p.gauss_order += 2;
    }
  }
}

QuadratureResult bz_integrate(const LatticeModel& model, const MomentumIntegrand& f,
                              SingularOrder order, const QuadratureParams& params) {
  const Mat3 B = model.reciprocal();
  return bz_integrate_reduced(
      model, [&](const Vec3& theta) { return f(B * theta); }, order, params);
}

}  // namespace latbose
