#include "faslab/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace faslab {

double erf_inv(double p) {
  if (!(p > -1.0 && p < 1.0)) throw std::domain_error("erf_inv: argument must lie in (-1, 1)");
  if (p == 0.0) return 0.0;

  // Winitzki approximation as the seed, then Newton on erf(x) - p.
  constexpr double a = 0.147;
  const double ln1mp2 = std::log(1.0 - p * p);
  const double t = 2.0 / (std::numbers::pi * a) + 0.5 * ln1mp2;
  double x = std::copysign(std::sqrt(std::sqrt(t * t - ln1mp2 / a) - t), p);

  constexpr double two_over_sqrt_pi = 1.1283791670955126;
  for (int i = 0; i < 4; ++i) {
    const double err = std::erf(x) - p;
    const double slope = two_over_sqrt_pi * std::exp(-x * x);
    if (slope == 0.0) break;
    x -= err / slope;
  }
  return x;
}

}  // namespace faslab
