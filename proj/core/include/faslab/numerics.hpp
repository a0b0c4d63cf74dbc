#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace faslab {

// Normalized sinc: sin(pi t) / (pi t), continuous at 0.
inline double sinc_pi(double t) noexcept {
  const double a = std::numbers::pi * t;
  if (std::abs(a) < 1e-8) return 1.0 - a * a / 6.0;
  return std::sin(a) / a;
}

// Inverse error function on (-1, 1).
double erf_inv(double p);

// Raised when adaptive quadrature exhausts its subdivision budget.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double partial, double tolerance)
      : std::runtime_error("adaptive quadrature did not converge within depth budget"
                           " (partial estimate " + std::to_string(partial) +
                           ", tolerance " + std::to_string(tolerance) + ")"),
        partial_estimate(partial),
        tolerance(tolerance) {}

  double partial_estimate;
  double tolerance;
};

namespace detail {

template <class F>
double simpson_step(F&& f, double a, double fa, double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_step(f, a, fa, m, fm, lm, flm);
  const double right = simpson_step(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw QuadratureError(left + right, tol);
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature with absolute tolerance `tol`.
// Throws QuadratureError carrying the partial estimate when `max_depth` is exhausted.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
  if (!(b > a)) {
    if (a == b) return 0.0;
    throw std::domain_error("adaptive_simpson: require a <= b");
  }
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = detail::simpson_step(f, a, fa, b, fb, m, fm);
  try {
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
  } catch (const QuadratureError& e) {
    // The recursion halves tol per level; report the caller's tolerance.
    throw QuadratureError(e.partial_estimate, tol);
  }
}

}  // namespace faslab
