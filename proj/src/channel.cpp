#include "irswpcn/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace irswpcn {

namespace {
constexpr double kQ = 1.0 - M_PI * M_PI / 16.0;
}

LinkGain avg_gain(double beta, double alpha, double horizontal, double h1, double h2, LinkKind kind) {
  if (horizontal < 0.0) throw std::domain_error("avg_gain: negative horizontal distance");
  double dh = h1 - h2;
  double d2 = horizontal * horizontal + dh * dh;
  if (d2 == 0.0) throw std::domain_error("avg_gain: zero link distance");
  return {beta * std::pow(d2, -alpha / 2.0), kind};
}

double gsc(double n) { return M_PI * M_PI / 16.0 * n * n + kQ * n; }

CascadeStats beamformed_cascade_stats(LinkGain g_i, LinkGain g_r, int n) {
  if (n < 1) throw std::domain_error("beamformed_cascade_stats: needs at least one element");
  double gg = g_i.value * g_r.value;
  CascadeStats s;
  s.mean_amp = n * M_PI / 4.0 * std::sqrt(gg);
  s.var_amp = n * kQ * gg;
  s.mean_power = gsc(n) * gg;
  return s;
}

double sample_exponential(Rng& rng) { return -std::log1p(-uniform01(rng)); }

double sample_normal(Rng& rng) {
  // Marsaglia polar method; one value per call keeps streams simple
  for (;;) {
    double u = 2.0 * uniform01(rng) - 1.0;
    double v = 2.0 * uniform01(rng) - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

std::complex<double> sample_cscg(double var, Rng& rng) {
  double r = std::sqrt(var * sample_exponential(rng));
  double t = 2.0 * M_PI * uniform01(rng);
  return {r * std::cos(t), r * std::sin(t)};
}

double sample_rayleigh_amp(double mean_power, Rng& rng) {
  return std::sqrt(mean_power * sample_exponential(rng));
}

double sample_beamformed_amp(double g_i, double g_r, int n, SamplingMode mode, Rng& rng) {
  if (n <= 0) return 0.0;
  if (mode == SamplingMode::exact) {
    double acc = 0.0;
    for (int e = 0; e < n; ++e) acc += std::sqrt(sample_exponential(rng) * sample_exponential(rng));
    return acc * std::sqrt(g_i * g_r);
  }
  double gg = g_i * g_r;
  double mu = n * M_PI / 4.0 * std::sqrt(gg);
  double sd = std::sqrt(n * kQ * gg);
  for (;;) {
    double a = mu + sd * sample_normal(rng);
    if (a >= 0.0) return a;
  }
}

std::complex<double> sample_scattered(double g_i, double g_r, int n, SamplingMode mode, Rng& rng) {
  if (n <= 0) return {0.0, 0.0};
  if (mode == SamplingMode::exact) {
    std::complex<double> acc{0.0, 0.0};
    for (int e = 0; e < n; ++e) {
      double amp = std::sqrt(sample_exponential(rng) * sample_exponential(rng));
      double t = 2.0 * M_PI * uniform01(rng);
      acc += std::complex<double>(amp * std::cos(t), amp * std::sin(t));
    }
    return acc * std::sqrt(g_i * g_r);
  }
  return sample_cscg(n * g_i * g_r, rng);
}

}  // namespace irswpcn
