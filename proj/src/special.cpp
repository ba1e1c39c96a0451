#include "irswpcn/special.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <stdexcept>

#include "irswpcn/quadrature.hpp"

namespace irswpcn {

namespace {

constexpr int kMaxTerms = 5000;

double family_series(double b, double z) {
  double sum = 0.0, zn = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    double t = b / (b + n) * zn;
    sum += t;
    if (std::fabs(t) <= 1e-17 * std::fabs(sum)) return sum;
    zn *= z;
  }
  throw NumericError("hyp2f1 series did not converge");
}

// 2F1(b, b; 1 + b; x) for 0 <= x < 1
double pfaff_series(double b, double x) {
  double sum = 1.0, term = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (b + n) * (b + n) / ((1.0 + b + n) * (n + 1.0)) * x;
    sum += term;
    if (std::fabs(term) <= 1e-17 * sum) return sum;
  }
  throw NumericError("hyp2f1 transformed series did not converge");
}

double large_z(double b, double big) {
  double sum = 0.0, zn = 1.0 / big, sign = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    double t = sign * zn / (n + 1.0 - b);
    sum += t;
    if (std::fabs(t) <= 1e-17 * std::fabs(sum)) break;
    zn /= big;
    sign = -sign;
  }
  return b * std::pow(big, -b) * M_PI / std::sin(M_PI * b) - b * sum;
}

template <class T>
T ucore_small(T w, double t0, double a) {
  // |w| < 1: expand u/(1+u) in powers of u
  T sum = 0.0, wn = w;
  double sign = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    T t = sign * wn / (a * (n + 1) - 1.0);
    sum += t;
    if (std::abs(t) <= 1e-17 * std::abs(sum)) return 0.5 * t0 * sum;
    wn *= w;
    sign = -sign;
  }
  throw NumericError("Ucore small-argument series did not converge");
}

template <class T>
T ucore_large(T c, T w, double t0, double a) {
  // |w| > 1: full integral from zero minus the piece below t0
  T full = std::exp(std::log(c) / a) * (M_PI / (a * std::sin(M_PI / a)));
  T sum = 0.0, wn = 1.0;
  T winv = 1.0 / w;
  double sign = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    T t = sign * wn / (a * n + 1.0);
    sum += t;
    if (std::abs(t) <= 1e-17 * std::abs(sum)) return 0.5 * (full - t0 * sum);
    wn *= winv;
    sign = -sign;
  }
  throw NumericError("Ucore large-argument series did not converge");
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
  if (a != 1.0 || !(b > 0.0 && b < 1.0) || std::fabs(c - (1.0 + b)) > 1e-15 || !(z <= 0.0))
    throw std::domain_error("hyp2f1: only (1, b; 1 + b; z <= 0) with 0 < b < 1 is supported");
  if (z >= -0.5) return family_series(b, z);
  if (z >= -2.0) return std::pow(1.0 - z, -b) * pfaff_series(b, z / (z - 1.0));
  return large_z(b, -z);
}

std::vector<double> incomplete_beta_ladder(double p0, double q, double w, int count) {
  std::vector<double> out(static_cast<size_t>(std::max(count, 0)), 0.0);
  if (count <= 0 || w <= 0.0) return out;
  double log1pw = std::log1p(w);
  double logv = std::log(w) - log1pw;  // log v
  double log1mv = -log1pw;             // log(1 - v)
  double v = w / (1.0 + w);
  double y = 1.0 / (1.0 + w);
  double ptop = p0 + (count - 1);
  double top;
  if (v <= 0.5) {
    top = boost::math::beta(ptop, q, v);
  } else {
    top = boost::math::beta(ptop, q) - boost::math::beta(q, ptop, y);
    if (top <= 0.0) top = boost::math::beta(ptop, q, v);
  }
  out[count - 1] = top;
  for (int j = count - 2; j >= 0; --j) {
    double p = p0 + j;
    out[j] = ((p + q) * out[j + 1] + std::exp(p * logv + q * log1mv)) / p;
  }
  return out;
}

double ucore(double c, double t0, double a) {
  if (c <= 0.0) return 0.0;
  double w = c * std::pow(t0, -a);
  if (w < 0.25) return ucore_small<double>(w, t0, a);
  double b = incomplete_beta_ladder(1.0 - 1.0 / a, 1.0 / a, w, 1)[0];
  return 0.5 / a * std::exp(std::log(c) / a) * b;
}

std::complex<double> ucore(std::complex<double> c, double t0, double a) {
  if (c == 0.0) return 0.0;
  std::complex<double> w = c * std::pow(t0, -a);
  double aw = std::abs(w);
  if (aw < 0.5) return ucore_small(w, t0, a);
  if (aw > 2.0) return ucore_large(c, w, t0, a);
  // split where |w| drops to 1/4, quadrature below, series above
  double t1 = t0 * std::pow(aw / 0.25, 1.0 / a);
  auto f = [&](double t) {
    std::complex<double> u = c * std::pow(t, -a);
    return u / (1.0 + u);
  };
  std::complex<double> head = 0.5 * gl_integrate(f, t0, t1, 32);
  std::complex<double> w1 = c * std::pow(t1, -a);
  return head + ucore_small(w1, t1, a);
}

void ucore_scaled(double c, double t0, double a, int nmax, std::vector<double>& out) {
  out.assign(static_cast<size_t>(nmax + 1), 0.0);
  if (c <= 0.0) return;
  double w = c * std::pow(t0, -a);
  double pref = 0.5 / a * std::exp(std::log(c) / a);
  out[0] = ucore(c, t0, a);
  if (nmax == 0) return;
  auto ladder = incomplete_beta_ladder(1.0 - 1.0 / a, 1.0 + 1.0 / a, w, nmax);
  for (int n = 1; n <= nmax; ++n) {
    double s = (n % 2 == 1) ? 1.0 : -1.0;
    out[n] = s * pref * ladder[n - 1];
  }
}

}  // namespace irswpcn
