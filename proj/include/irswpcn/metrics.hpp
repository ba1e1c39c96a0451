#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "irswpcn/config.hpp"
#include "irswpcn/geometry.hpp"
#include "irswpcn/transforms.hpp"

namespace irswpcn {

// Which density the active-interferer process is thinned from.
enum class InterfererBase { bs_density, device_density };

struct AnalysisOptions {
  // Route P{S_dr > C} through the S_id transform instead of the Erlang survival.
  bool paper_literal_sdr = false;
  InterfererBase interferer_base = InterfererBase::bs_density;
  // Pin P_en to 1 (regularly powered devices).
  bool regularly_powered = false;
  double outer_tol = 1e-4;
  int outer_start = 16;
  int outer_levels = 3;
  unsigned threads = 0;
};

struct CoverageBreakdown {
  double p_en = 0.0;
  double p_ul = 0.0;
  double p_cov = 0.0;
  double p_sdr_gt = 0.0;
  double p_sid_gt = 0.0;
  double p_joint = 0.0;
  double lambda_u_prime = 0.0;
};

struct EfficiencyReport {
  double ehe = 0.0;
  double ee = 0.0;
  double mean_eh = 0.0;
  double mean_p0 = 0.0;
};

struct EnergyCond {
  double p_en = 0.0;
  double p_sdr_gt = 0.0;
  double p_sid_gt = 0.0;
  double p_joint = 0.0;
  double k = 0.0;
  bool large_k = false;
};

// Averages over d0 (nearest IRS within D) and x0 (nearest BS).
struct GeometryAverage {
  std::vector<double> values;
  double delta = 0.0;  // change at the last refinement
  bool converged = false;
  int points = 0;
};

GeometryAverage average_over_geometry(const NetworkParams& p,
                                      const std::function<std::vector<double>(const CondGeometry&)>& fn,
                                      const AnalysisOptions& opts = {});

double c_threshold(double tau, double x0, const NetworkParams& p);

double noninteger_blend(double p_floor, double p_ceil, double k, double zeta);

EnergyCond energy_coverage_cond(const CondGeometry& cond, double tau, const NetworkParams& p,
                                const AnalysisOptions& opts = {});
double energy_coverage(double tau, const NetworkParams& p, const AnalysisOptions& opts = {});
// Energy coverage with the averaged event probabilities.
CoverageBreakdown energy_breakdown(double tau, const NetworkParams& p, const AnalysisOptions& opts = {});

double ul_coverage_cond(const CondGeometry& cond, const NetworkParams& p, double lambda_u_prime,
                        const AnalysisOptions& opts = {});
double ul_coverage_cond(const CondGeometry& cond, const NetworkParams& p, double lambda_u_prime,
                        const std::shared_ptr<const InterferenceKernel>& kernel, const AnalysisOptions& opts = {});
double ul_coverage(const NetworkParams& p, double lambda_u_prime, const AnalysisOptions& opts = {});

double interferer_density(double p_en, const NetworkParams& p, const AnalysisOptions& opts = {});

CoverageBreakdown overall_coverage(double tau, const NetworkParams& p, const AnalysisOptions& opts = {});

// nats per square metre per slot
double spatial_throughput(double tau, const NetworkParams& p, const AnalysisOptions& opts = {});
double spatial_throughput(double tau, const NetworkParams& p, const CoverageBreakdown& cov);

double mean_harvested_energy(double tau, const NetworkParams& p);
double mean_ue_power(const NetworkParams& p);
EfficiencyReport power_efficiency(double tau, const NetworkParams& p, const AnalysisOptions& opts = {});
EfficiencyReport power_efficiency(double tau, const NetworkParams& p, const CoverageBreakdown& cov);

}  // namespace irswpcn
