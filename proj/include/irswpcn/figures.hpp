#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "irswpcn/config.hpp"

namespace irswpcn {

struct FigurePoint {
  std::string series;
  std::string quantity;
  double x = 0.0;
  double analytic = 0.0;
  double simulated = NAN;  // NaN when the point was not simulated
  double ci95 = NAN;
};

struct FigureCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct FigureReport {
  std::string id;
  std::string axis;
  std::vector<FigurePoint> points;
  std::vector<FigureCheck> checks;

  bool pass() const;
  const FigureCheck* find(const std::string& name) const;
};

struct FigureOptions {
  long trials = 10000;
  std::uint64_t seed = 1;
  bool simulate = true;
  unsigned threads = 0;
};

// fig2 ... fig10
std::vector<std::string> figure_ids();

// Runs the preset sweep for one figure on top of base and evaluates its
// claims. Throws std::invalid_argument for an unknown id.
FigureReport run_figure(const std::string& id, const NetworkParams& base, const FigureOptions& opts = {});

}  // namespace irswpcn
