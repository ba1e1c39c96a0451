#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "irswpcn/config.hpp"
#include "irswpcn/geometry.hpp"

namespace irswpcn {

// A transform of the form exp(V(s)). Derivatives come from the scaled
// Taylor coefficients t_j(s) = s^j V^(j)(s) / j!, which stay finite where
// the raw derivatives overflow.
struct LaplaceFn {
  std::function<std::complex<double>(std::complex<double>)> exponent;
  std::function<void(double, int, std::vector<double>&)> taylor;
  std::string descriptor;

  std::complex<double> eval(std::complex<double> s) const { return std::exp(exponent(s)); }
  double eval(double s) const;
  // n-th derivative in s
  double deriv(double s, int n) const;
};

struct SeriesSurvival {
  int k = 0;
  double value = 0.0;
  bool precision_loss = false;
  double cancellation = 1.0;  // largest term over the result
};

struct CdfResult {
  double probability = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

// Shot-noise field function of the charging stage, with the serving BS at x0.
double u_fn(double x, double x0, const NetworkParams& p);
std::complex<double> u_fn(std::complex<double> x, double x0, const NetworkParams& p);
// x^n U^(n)(x) / n! for n = 0..nmax
std::vector<double> u_fn_scaled(double x, double x0, const NetworkParams& p, int nmax);

// Interference field function (pdf-weighted over the interferer link length).
class InterferenceKernel {
 public:
  explicit InterferenceKernel(const NetworkParams& p);
  double value(double x) const;
  std::complex<double> value(std::complex<double> x) const;
  void scaled(double x, int nmax, std::vector<double>& out) const;

 private:
  double a_;
  std::vector<double> weight_, gain_, t0_;
};

double u_i_fn(double x, const NetworkParams& p);

LaplaceFn laplace_exponential(double a);
LaplaceFn laplace_sid(const CondGeometry& cond, const NetworkParams& p);
LaplaceFn laplace_interference(const NetworkParams& p, double lambda_u_prime);
LaplaceFn laplace_interference(std::shared_ptr<const InterferenceKernel> kernel, const NetworkParams& p,
                               double lambda_u_prime);

// exp(-shift s + sign * V(factor s)) built from base = exp(V).
LaplaceFn affine(const LaplaceFn& base, double factor, double shift, double sign, std::string descriptor);

// CDF at x > 0 of the variable with transform lf.
CdfResult invert_cdf(const LaplaceFn& lf, double x, int m = 18);

// sum_{i<k} (-1)^i / i! * d^i/ds^i lf(s) at s0; k above k_tilde is rejected.
SeriesSurvival survival_series(const LaplaceFn& lf, int k, int k_tilde = 80, double s0 = 1.0);
// Same sum from precomputed scaled Taylor coefficients t_0..t_{k-1} at s0.
SeriesSurvival survival_from_taylor(const std::vector<double>& t, int k, double s0 = 1.0);

}  // namespace irswpcn
