#pragma once

#include <span>
#include <vector>

namespace fgt::stats {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n = 0;
};

/// Ordinary least squares of y on x. Throws std::invalid_argument for
/// mismatched sizes, n < 2, or zero variance in x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Pearson correlation. Throws std::invalid_argument when either series has
/// zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
double sample_sd(std::span<const double> v);  // n-1 denominator

struct PlanarCoeffs {
  double c0 = 0.0;   // intercept
  double c1 = 0.0;   // coefficient on x1
  double c2 = 0.0;   // coefficient on x2
};

/// Least squares of y on (1, x1, x2) via centered normal equations.
/// Throws std::invalid_argument on rank deficiency (a command held constant)
/// or n < 4.
PlanarCoeffs planar_least_squares(std::span<const double> x1,
                                  std::span<const double> x2,
                                  std::span<const double> y);

}  // namespace fgt::stats
