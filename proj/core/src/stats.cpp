#include "fgt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fgt::stats {

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean: empty series");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("sample_sd: need at least 2 values");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: size mismatch");
  const auto n = x.size();
  if (n < 2) throw std::invalid_argument("linear_fit: need at least 2 points");

  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw std::invalid_argument("linear_fit: zero variance in x");

  LinearFit fit;
  fit.n = static_cast<int>(n);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 0.0) {
    fit.r_squared = 1.0;  // constant y reproduced exactly by slope 0
  } else {
    const double ss_res = syy - fit.slope * sxy;
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: size mismatch");
  const auto n = x.size();
  if (n < 2) throw std::invalid_argument("pearson: need at least 2 points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw std::invalid_argument("pearson: zero-variance series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

PlanarCoeffs planar_least_squares(std::span<const double> x1,
                                  std::span<const double> x2,
                                  std::span<const double> y) {
  const auto n = y.size();
  if (x1.size() != n || x2.size() != n)
    throw std::invalid_argument("planar_least_squares: size mismatch");
  if (n < 4) throw std::invalid_argument("planar_least_squares: need at least 4 points");

  const double m1 = mean(x1);
  const double m2 = mean(x2);
  const double my = mean(y);
  double s11 = 0.0, s22 = 0.0, s12 = 0.0, s1y = 0.0, s2y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = x1[i] - m1;
    const double d2 = x2[i] - m2;
    const double dy = y[i] - my;
    s11 += d1 * d1;
    s22 += d2 * d2;
    s12 += d1 * d2;
    s1y += d1 * dy;
    s2y += d2 * dy;
  }
  const double det = s11 * s22 - s12 * s12;
  const double scale = std::max(s11 * s22, 1e-300);
  if (s11 <= 0.0 || s22 <= 0.0 || det <= 1e-12 * scale)
    throw std::invalid_argument("planar_least_squares: rank-deficient design");

  PlanarCoeffs c;
  c.c1 = (s1y * s22 - s2y * s12) / det;
  c.c2 = (s2y * s11 - s1y * s12) / det;
  c.c0 = my - c.c1 * m1 - c.c2 * m2;
  return c;
}

}  // namespace fgt::stats
