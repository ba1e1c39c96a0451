#include "irswpcn/transforms.hpp"

#include <algorithm>
#include <boost/math/special_functions/binomial.hpp>
#include <cmath>
#include <stdexcept>

#include "irswpcn/moments.hpp"
#include "irswpcn/quadrature.hpp"
#include "irswpcn/special.hpp"

namespace irswpcn {

double LaplaceFn::eval(double s) const {
  std::vector<double> t;
  taylor(s, 0, t);
  return std::exp(t[0]);
}

double LaplaceFn::deriv(double s, int n) const {
  if (n == 0) return eval(s);
  std::vector<double> v;
  taylor(s, n, v);
  std::vector<double> c(static_cast<size_t>(n + 1), 0.0);
  c[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (int j = 1; j <= m; ++j) acc += j * v[j] * c[m - j];
    c[m] = acc / m;
  }
  return std::exp(v[0] + std::lgamma(n + 1.0) - n * std::log(s)) * c[n];
}

double u_fn(double x, double x0, const NetworkParams& p) {
  if (x <= 0.0) return 0.0;
  double a = p.alpha / 2.0;
  double t0 = x0 * x0 + p.h_b * p.h_b;
  double b = beta(p);
  double w = x * b * std::pow(t0, -a);
  double z = -1.0 / w;
  if (z < -2.0) return ucore(x * b, t0, a);  // closed form cancels here
  return M_PI / (p.alpha * std::sin(2.0 * M_PI / p.alpha)) * std::pow(b * x, 2.0 / p.alpha) -
         0.5 * t0 * hyp2f1(1.0, 2.0 / p.alpha, 1.0 + 2.0 / p.alpha, z);
}

std::complex<double> u_fn(std::complex<double> x, double x0, const NetworkParams& p) {
  return ucore(x * beta(p), x0 * x0 + p.h_b * p.h_b, p.alpha / 2.0);
}

std::vector<double> u_fn_scaled(double x, double x0, const NetworkParams& p, int nmax) {
  std::vector<double> out;
  ucore_scaled(x * beta(p), x0 * x0 + p.h_b * p.h_b, p.alpha / 2.0, nmax, out);
  return out;
}

InterferenceKernel::InterferenceKernel(const NetworkParams& p) : a_(p.alpha / 2.0) {
  // link length D enters through z = pi lambda_u D^2, whose law is Exp(1)
  // panels graded toward the branch point at z = -pi lambda_u h_b^2
  double b = beta(p), h2 = p.h_b * p.h_b;
  std::vector<double> edges = {0.0};
  for (double z = M_PI * p.lambda_u * h2; z < 0.5; z *= 2.0) edges.push_back(z);
  for (double z = 0.5; z <= 64.0; z *= 2.0) edges.push_back(z);
  const int order = 8;
  const GaussRule& r = gauss_legendre(order);
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    double lo = edges[e], hi = edges[e + 1];
    for (int i = 0; i < order; ++i) {
      double z = 0.5 * (hi - lo) * r.x[i] + 0.5 * (hi + lo);
      double t0 = z / (M_PI * p.lambda_u) + h2;
      weight_.push_back(0.5 * (hi - lo) * r.w[i] * std::exp(-z));
      gain_.push_back(b * std::pow(t0, p.eps * a_));
      t0_.push_back(t0);
    }
  }
}

double InterferenceKernel::value(double x) const {
  double acc = 0.0;
  for (size_t i = 0; i < weight_.size(); ++i) acc += weight_[i] * ucore(x * gain_[i], t0_[i], a_);
  return acc;
}

std::complex<double> InterferenceKernel::value(std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (size_t i = 0; i < weight_.size(); ++i) acc += weight_[i] * ucore(x * gain_[i], t0_[i], a_);
  return acc;
}

void InterferenceKernel::scaled(double x, int nmax, std::vector<double>& out) const {
  out.assign(static_cast<size_t>(nmax + 1), 0.0);
  std::vector<double> node;
  for (size_t i = 0; i < weight_.size(); ++i) {
    ucore_scaled(x * gain_[i], t0_[i], a_, nmax, node);
    for (int n = 0; n <= nmax; ++n) out[n] += weight_[i] * node[n];
  }
}

double u_i_fn(double x, const NetworkParams& p) { return InterferenceKernel(p).value(x); }

LaplaceFn laplace_exponential(double a) {
  LaplaceFn lf;
  lf.exponent = [a](std::complex<double> s) { return -a * s; };
  lf.taylor = [a](double s, int nmax, std::vector<double>& out) {
    out.assign(static_cast<size_t>(nmax + 1), 0.0);
    out[0] = -a * s;
    if (nmax >= 1) out[1] = -a * s;
  };
  lf.descriptor = "exponential";
  return lf;
}

LaplaceFn laplace_sid(const CondGeometry& cond, const NetworkParams& p) {
  double scale = p.p_t * upsilon(cond.d0, p) * beta(p);
  double t0 = cond.x0 * cond.x0 + p.h_b * p.h_b;
  double a = p.alpha / 2.0;
  double lam = 2.0 * M_PI * p.lambda_b;
  LaplaceFn lf;
  lf.exponent = [=](std::complex<double> s) { return -lam * ucore(s * scale, t0, a); };
  lf.taylor = [=](double s, int nmax, std::vector<double>& out) {
    ucore_scaled(s * scale, t0, a, nmax, out);
    for (auto& v : out) v *= -lam;
  };
  lf.descriptor = "S_id";
  return lf;
}

LaplaceFn laplace_interference(std::shared_ptr<const InterferenceKernel> kernel, const NetworkParams& p,
                               double lambda_u_prime) {
  double scale = upsilon(0.0, p) * p.rho;
  double lam = 2.0 * M_PI * lambda_u_prime;
  LaplaceFn lf;
  lf.exponent = [=](std::complex<double> s) { return -lam * kernel->value(s * scale); };
  lf.taylor = [=](double s, int nmax, std::vector<double>& out) {
    kernel->scaled(s * scale, nmax, out);
    for (auto& v : out) v *= -lam;
  };
  lf.descriptor = "I";
  return lf;
}

LaplaceFn laplace_interference(const NetworkParams& p, double lambda_u_prime) {
  return laplace_interference(std::make_shared<const InterferenceKernel>(p), p, lambda_u_prime);
}

LaplaceFn affine(const LaplaceFn& base, double factor, double shift, double sign, std::string descriptor) {
  LaplaceFn lf;
  auto be = base.exponent;
  auto bt = base.taylor;
  lf.exponent = [=](std::complex<double> s) { return -shift * s + sign * be(factor * s); };
  lf.taylor = [=](double s, int nmax, std::vector<double>& out) {
    bt(factor * s, nmax, out);
    for (auto& v : out) v *= sign;
    out[0] -= shift * s;
    if (nmax >= 1) out[1] -= shift * s;
  };
  lf.descriptor = std::move(descriptor);
  return lf;
}

namespace {

double euler_sum(const LaplaceFn& lf, double x, int m) {
  const double a = m * std::log(10.0) / 3.0;
  const double tail = std::pow(2.0, -m);
  std::vector<double> xi(static_cast<size_t>(2 * m + 1), 1.0);
  xi[0] = 0.5;
  xi[2 * m] = tail;
  for (int k = 1; k < m; ++k)
    xi[2 * m - k] = xi[2 * m - k + 1] + tail * boost::math::binomial_coefficient<double>(m, k);
  double acc = 0.0;
  for (int k = 0; k <= 2 * m; ++k) {
    std::complex<double> s(a / x, M_PI * k / x);
    double f = std::real(lf.eval(s) / s);
    acc += ((k % 2) ? -xi[k] : xi[k]) * f;
  }
  return std::pow(10.0, m / 3.0) / x * acc;
}

}  // namespace

CdfResult invert_cdf(const LaplaceFn& lf, double x, int m) {
  if (!(x > 0.0)) throw std::domain_error("invert_cdf: x must be positive");
  double f1 = euler_sum(lf, x, m);
  double f2 = euler_sum(lf, x, m - 4);
  CdfResult r;
  r.error_estimate = std::fabs(f1 - f2);
  r.converged = std::isfinite(f1) && r.error_estimate < 1e-4;
  r.probability = std::isfinite(f1) ? std::clamp(f1, 0.0, 1.0) : 0.0;
  return r;
}

SeriesSurvival survival_series(const LaplaceFn& lf, int k, int k_tilde, double s0) {
  if (k < 1) throw std::domain_error("survival_series: k must be at least 1");
  if (k > k_tilde) throw std::domain_error("survival_series: k exceeds the large-shape threshold");
  std::vector<double> v;
  lf.taylor(s0, k - 1, v);
  return survival_from_taylor(v, k, s0);
}

SeriesSurvival survival_from_taylor(const std::vector<double>& v, int k, double s0) {
  if (k < 1 || static_cast<int>(v.size()) < k) throw std::domain_error("survival_from_taylor: too few coefficients");
  // rescale so |v_j| / r^j <= 1; terms are then assembled in log space
  double logr = -INFINITY;
  for (int j = 1; j < k; ++j)
    if (v[j] != 0.0) logr = std::max(logr, std::log(std::fabs(v[j])) / j);
  if (!std::isfinite(logr)) logr = 0.0;
  std::vector<double> vs(static_cast<size_t>(k), 0.0);
  for (int j = 1; j < k; ++j)
    if (v[j] != 0.0) vs[j] = std::copysign(std::exp(std::log(std::fabs(v[j])) - j * logr), v[j]);
  std::vector<double> e(static_cast<size_t>(k), 0.0);
  e[0] = 1.0;
  for (int n = 1; n < k; ++n) {
    double acc = 0.0;
    for (int j = 1; j <= n; ++j) acc += j * vs[j] * e[n - j];
    e[n] = acc / n;
  }
  double sum = 0.0, biggest = 0.0;
  double logs0 = std::log(s0);
  for (int n = 0; n < k; ++n) {
    if (e[n] == 0.0) continue;
    double mag = std::exp(std::log(std::fabs(e[n])) + v[0] + n * (logr - logs0));
    double term = ((n % 2) ? -1.0 : 1.0) * (e[n] > 0 ? mag : -mag);
    sum += term;
    biggest = std::max(biggest, mag);
  }
  SeriesSurvival out;
  out.k = k;
  out.cancellation = (sum != 0.0) ? biggest / std::fabs(sum) : (biggest > 0.0 ? INFINITY : 1.0);
  out.precision_loss = out.cancellation > 1e6 && biggest > 1e-12;
  out.value = std::clamp(sum, 0.0, 1.0);
  return out;
}

}  // namespace irswpcn
