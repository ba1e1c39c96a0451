#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "irswpcn/channel.hpp"
#include "irswpcn/config.hpp"
#include "irswpcn/geometry.hpp"

namespace irswpcn {

enum class CampaignMode { decoupled, coupled };

// approximated: IRS-BS gains replaced by the direct BS-UE gain, as the
// analysis does; actual: every cascade uses its own 3-D distance.
enum class CascadeGeometry { approximated, actual };

// palm: interfering cells are a fresh PPP seen from the serving BS, which
// is how the interference field is modelled; shared: the charging-stage
// BS set is reused.
enum class CellLayout { palm, shared };

struct SimOptions {
  CampaignMode mode = CampaignMode::decoupled;
  SamplingMode sampling = SamplingMode::approximate;
  CascadeGeometry geometry = CascadeGeometry::approximated;
  CellLayout layout = CellLayout::palm;
  double disk_radius = 0.0;  // 0 selects max(5 / sqrt(pi lambda_b), 300)
  unsigned threads = 0;
  // Interferer activity in decoupled mode; NaN takes the analytic P_en.
  double p_active = NAN;
  // Every device is powered: P_en = 1 and all interferers are active.
  bool regularly_powered = false;
};

struct Interferer {
  Point2 ue;
  std::size_t cell = 0;  // index of its serving BS in cell_points
  double y = 0.0;        // serving-BS to BS0 distance
  double link = 0.0;     // D_k
  std::vector<Point2> irs;  // IRSs within D of the device
};

struct NetworkRealization {
  PointSet bs_points;
  PointSet irs_points;  // around the typical UE at the origin
  PointSet ue_points;   // candidate interferers, one per non-serving cell
  PointSet cell_points; // BSs of the interfering cells
  std::size_t serving_bs = 0;
  std::size_t serving_irs = 0;
  std::uint64_t seed = 0;
  std::vector<Interferer> interferers;
};

struct MetricEstimate {
  double mean = 0.0;
  double ci95_halfwidth = 0.0;
  long n_trials = 0;
};

struct ChargingOutcome {
  double s_dr = 0.0;
  double s_id = 0.0;
  double e_h = 0.0;
  double e_min = 0.0;
  bool covered = false;
};

struct UlOutcome {
  double s_ul = 0.0;
  double interference = 0.0;
  double sinr = 0.0;
};

struct CampaignResult {
  MetricEstimate p_en, p_ul, p_cov, nu, ehe, ee, mean_s_ul, mean_i;
  double p_active = 0.0;
  std::uint64_t seed = 0;
  CampaignMode mode = CampaignMode::decoupled;
};

double default_disk_radius(const NetworkParams& p);

NetworkRealization drop_network(const NetworkParams& p, const SimOptions& opts, Rng& rng);

ChargingOutcome simulate_charging(const NetworkRealization& net, double tau, const NetworkParams& p,
                                  const SimOptions& opts, Rng& rng);

// active has one flag per interferer.
UlOutcome simulate_ul(const NetworkRealization& net, const NetworkParams& p, const std::vector<char>& active,
                      const SimOptions& opts, Rng& rng);

// Energy outcome of interferer k charging from its own cell.
bool interferer_covered(const NetworkRealization& net, std::size_t k, double tau, const NetworkParams& p, Rng& rng);

CampaignResult run_campaign(const NetworkParams& p, double tau, long n_trials, const SimOptions& opts,
                            std::uint64_t master_seed);

MetricEstimate estimate_mean(const std::vector<double>& x);

// Conditional draws at fixed (d0, x0), other IRSs beyond d0 and other BSs
// beyond x0, with IRS-BS gains approximated as in the analysis.
struct ConditionalDraw {
  double s_dr = 0.0;
  double s_id = 0.0;
  double s_ul = 0.0;
};
ConditionalDraw sample_conditional(const CondGeometry& cond, const NetworkParams& p, SamplingMode sampling, Rng& rng,
                                   bool with_sid = true);

}  // namespace irswpcn
