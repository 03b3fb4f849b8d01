#include "latbose/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "latbose/errors.hpp"

namespace latbose {

double PolyFit::operator()(double x) const {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

double PolyFit::aic(bool small_sample) const {
  const double n = static_cast<double>(samples);
  const double k = static_cast<double>(coeffs.size());
  const double floor = std::numeric_limits<double>::min();
  double value = n * std::log(std::max(rss / n, floor)) + 2.0 * k;
  if (small_sample && n - k - 1.0 > 0.0) value += 2.0 * k * (k + 1.0) / (n - k - 1.0);
  return value;
}

PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size()) fail(ErrorKind::InvalidArgument, "polyfit: size mismatch");
  if (degree < 0 || x.size() < static_cast<std::size_t>(degree) + 1)
    fail(ErrorKind::InvalidArgument, "polyfit: not enough points for the requested degree");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd V(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      V(i, k) = p;
      p *= x[i];
    }
    b(i) = y[i];
  }
  const Eigen::VectorXd c = V.colPivHouseholderQr().solve(b);
  PolyFit fit;
  fit.coeffs.assign(c.data(), c.data() + c.size());
  fit.samples = x.size();
  const Eigen::VectorXd r = V * c - b;
  fit.rss = r.squaredNorm();
  fit.max_residual = r.cwiseAbs().maxCoeff();
  return fit;
}

PowerLawFit power_law_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) fail(ErrorKind::InvalidArgument, "power-law fit needs two positive points");
  const PolyFit line = polyfit(lx, ly, 1);
  return {line.coeffs[1], std::exp(line.coeffs[0]), line.max_residual};
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1)
    fail(ErrorKind::InvalidArgument, "logspace needs 0 < lo <= hi and n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace latbose
