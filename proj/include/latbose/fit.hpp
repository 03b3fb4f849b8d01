#pragma once

#include <span>
#include <vector>

namespace latbose {

/// Least-squares polynomial y ~ sum_k coeffs[k] x^k.
struct PolyFit {
  std::vector<double> coeffs;
  double rss = 0.0;        ///< residual sum of squares
  double max_residual = 0.0;
  std::size_t samples = 0;

  double operator()(double x) const;
  /// Akaike information criterion for Gaussian residuals. With small_sample set,
  /// the AICc correction is added when there are enough points for it.
  double aic(bool small_sample = true) const;
};

PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree);

/// Fit log y = log prefactor + exponent log x over points with x, y > 0.
struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double max_log_residual = 0.0;
};
PowerLawFit power_law_fit(std::span<const double> x, std::span<const double> y);

/// n points log-spaced over [lo, hi] inclusive.
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace latbose
