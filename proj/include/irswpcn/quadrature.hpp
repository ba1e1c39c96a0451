#pragma once

#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace irswpcn {

// Non-convergence of a quadrature, series or inversion.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Cached Gauss-Legendre rule of order n.
const GaussRule& gauss_legendre(int n);

// Fixed composite rule: sum over panels of f at mapped nodes.
template <class F>
auto gl_integrate(F&& f, double a, double b, int n) {
  const GaussRule& r = gauss_legendre(n);
  double h = 0.5 * (b - a), c = 0.5 * (b + a);
  decltype(f(c)) acc{};
  for (int i = 0; i < n; ++i) acc += r.w[i] * f(c + h * r.x[i]);
  return acc * h;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {
struct Gk15 {
  double value, error;
};
Gk15 gk15(const std::function<double(double)>& f, double a, double b);
}  // namespace detail

// Globally adaptive Gauss-Kronrod 7/15 on a finite interval. Throws
// NumericError when the tolerance is not met within max_intervals.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10,
                     double rel_tol = 1e-8, int max_intervals = 2000);

// Integral over [a, inf) using r = a + (1 - u)/u.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double abs_tol = 1e-10,
                                 double rel_tol = 1e-8, int max_intervals = 2000);

}  // namespace irswpcn
