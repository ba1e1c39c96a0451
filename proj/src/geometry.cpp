#include "irswpcn/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace irswpcn {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng make_stream(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0xD1B54A32D192ED03ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
  return Rng(seq);
}

double uniform01(Rng& rng) {
  // 53-bit uniform in [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

PointSet sample_ppp(double density, double radius, Rng& rng, Point2 center) {
  if (density < 0.0 || !(radius > 0.0)) throw std::domain_error("sample_ppp: invalid density or radius");
  PointSet out;
  out.density = density;
  out.radius = radius;
  out.center = center;
  if (density == 0.0) return out;
  std::poisson_distribution<long> count(density * M_PI * radius * radius);
  long n = count(rng);
  out.points.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    double r = radius * std::sqrt(uniform01(rng));
    double t = 2.0 * M_PI * uniform01(rng);
    out.points.push_back({center.x + r * std::cos(t), center.y + r * std::sin(t)});
  }
  return out;
}

PointSet thin(const PointSet& set, double keep, Rng& rng) {
  PointSet out = set;
  out.points.clear();
  out.density = set.density * keep;
  for (const auto& q : set.points)
    if (uniform01(rng) < keep) out.points.push_back(q);
  return out;
}

long nearest_index(const PointSet& set, Point2 q) {
  long best = -1;
  double bd = INFINITY;
  for (size_t i = 0; i < set.points.size(); ++i) {
    double d = dist2(set.points[i], q);
    if (d < bd) {
      bd = d;
      best = static_cast<long>(i);
    }
  }
  return best;
}

double nearest_pdf(double density, double r) {
  if (r < 0.0) throw std::domain_error("nearest_pdf: negative distance");
  return 2.0 * M_PI * density * r * std::exp(-density * M_PI * r * r);
}

double nearest_cdf(double density, double r) {
  if (r <= 0.0) return 0.0;
  return -std::expm1(-density * M_PI * r * r);
}

double cond_link_pdf(double lambda_u, double y_k, double r) {
  if (r < 0.0 || r > y_k) throw std::domain_error("cond_link_pdf: r outside [0, y_k]");
  return nearest_pdf(lambda_u, r) / nearest_cdf(lambda_u, y_k);
}

double cond_link_cdf(double lambda_u, double y_k, double r) {
  if (r < 0.0 || r > y_k) throw std::domain_error("cond_link_cdf: r outside [0, y_k]");
  return nearest_cdf(lambda_u, r) / nearest_cdf(lambda_u, y_k);
}

double sample_cond_link(double lambda_u, double y_k, Rng& rng) {
  double fy = nearest_cdf(lambda_u, y_k);
  double u = uniform01(rng) * fy;
  return std::min(y_k, std::sqrt(-std::log1p(-u) / (M_PI * lambda_u)));
}

double sample_truncated_nearest(double density, double radius, Rng& rng) {
  return sample_cond_link(density, radius, rng);
}

}  // namespace irswpcn
