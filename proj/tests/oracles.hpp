#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Asymptotic Kolmogorov p-value for statistic d over n samples, with the
// usual small-sample correction.
inline double kolmogorov_pvalue(double d, double n) {
  double sn = std::sqrt(n);
  double lam = (sn + 0.12 + 0.11 / sn) * d;
  if (lam < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lam * lam);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

// One-sample KS distance of x against a continuous CDF.
inline double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  double n = static_cast<double>(x.size()), d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

// Two-sample KS distance.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

// Standard library samplers, independent of the library under test.
struct Sampler {
  std::mt19937_64 gen;
  explicit Sampler(unsigned long long seed) : gen(seed) {}
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen); }
  double exponential() { return std::exponential_distribution<double>(1.0)(gen); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  long poisson(double mean) { return mean > 0.0 ? std::poisson_distribution<long>(mean)(gen) : 0; }
  // |CN(0, 1)|
  double rayleigh() { return std::sqrt(exponential()); }
  std::complex<double> cn(double var) { return std::sqrt(var / 2.0) * std::complex<double>(normal(), normal()); }
};

// Element-wise composite channel of the typical link: a phase-aligned direct
// path plus N beamformed double-Rayleigh products, plus CSCG scattering from
// every other IRS in the annulus d0 < r < D, with IRS-BS gains equal to gd.
struct CompositeChannel {
  double beta, alpha, lambda_i, d_local, h_i;
  int n;

  double gain(double d2) const { return beta * std::pow(d2, -alpha / 2.0); }

  double power(double gd, double d0, Sampler& s) const {
    double gr = gain(d0 * d0 + h_i * h_i);
    double beam = 0.0;
    for (int i = 0; i < n; ++i) beam += s.rayleigh() * s.rayleigh();
    double a1 = std::sqrt(gd) * s.rayleigh() + beam * std::sqrt(gd * gr);
    std::complex<double> a2 = 0.0;
    long count = s.poisson(lambda_i * M_PI * (d_local * d_local - d0 * d0));
    for (long j = 0; j < count; ++j) {
      double r2 = d0 * d0 + (d_local * d_local - d0 * d0) * s.uniform();
      a2 += s.cn(n * gd * gain(r2 + h_i * h_i));
    }
    return std::norm(a1 + a2);
  }
};

}  // namespace oracle
