#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace irswpcn {

using Rng = std::mt19937_64;

// Independent stream for sub-task `index` of a run seeded with `master`.
Rng make_stream(std::uint64_t master, std::uint64_t index);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dist2(Point2 a, Point2 b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct PointSet {
  std::vector<Point2> points;
  double density = 0.0;
  double radius = 0.0;
  Point2 center;
};

// Conditioning pair for all conditional quantities.
struct CondGeometry {
  double d0 = 0.0;  // UE to serving IRS
  double x0 = 0.0;  // UE to serving BS
};

PointSet sample_ppp(double density, double radius, Rng& rng, Point2 center = {});

// Keeps each point independently with probability keep.
PointSet thin(const PointSet& set, double keep, Rng& rng);

// Index of the point closest to q; -1 when the set is empty.
long nearest_index(const PointSet& set, Point2 q);

double nearest_pdf(double density, double r);
double nearest_cdf(double density, double r);

// Link length D_k given the interferer-to-BS distance y_k.
double cond_link_pdf(double lambda_u, double y_k, double r);
double cond_link_cdf(double lambda_u, double y_k, double r);
double sample_cond_link(double lambda_u, double y_k, Rng& rng);

// Nearest-neighbour distance restricted to [0, radius].
double sample_truncated_nearest(double density, double radius, Rng& rng);

double uniform01(Rng& rng);

}  // namespace irswpcn
