#include "irswpcn/metrics.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "irswpcn/moments.hpp"
#include "irswpcn/parallel.hpp"
#include "irswpcn/quadrature.hpp"

namespace irswpcn {

namespace {

// d0 below which the fitted shape exceeds k_tilde (0 when it never does).
double large_shape_split(const NetworkParams& p) {
  if (p.n_elems == 0) return 0.0;
  double lo = 0.0, hi = p.d_local;
  if (shape_at(lo, p) <= p.k_tilde) return 0.0;
  if (shape_at(hi, p) > p.k_tilde) return hi;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (shape_at(mid, p) > p.k_tilde ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Shape snapped to an integer when it is one up to rounding, floored at 1.
double usable_shape(double k) {
  double r = std::round(k);
  if (std::fabs(k - r) < 1e-9 * std::max(1.0, k)) k = r;
  return std::max(k, 1.0);
}

std::vector<double> grid_average(const NetworkParams& p,
                                 const std::function<std::vector<double>(const CondGeometry&)>& fn,
                                 const std::vector<std::pair<double, double>>& upanels, int n, unsigned threads,
                                 int& points) {
  struct Node {
    CondGeometry cond;
    double weight;
  };
  std::vector<Node> nodes;
  double span = upanels.back().second - upanels.front().first;
  for (const auto& [ua, ub] : upanels) {
    // panels carrying under a tenth of the mass get a coarser rule
    int m = (ub - ua) >= 0.1 * span ? n : std::max(4, n / 8);
    const GaussRule& r = gauss_legendre(m);
    for (int i = 0; i < m; ++i) {
      double u = 0.5 * (ub - ua) * r.x[i] + 0.5 * (ub + ua);
      double d0 = std::min(p.d_local, std::sqrt(-std::log1p(-u) / (M_PI * p.lambda_i)));
      double wd = 0.5 * (ub - ua) * r.w[i];
      for (int j = 0; j < m; ++j) {
        double v = 0.5 * (r.x[j] + 1.0);
        double x0 = std::sqrt(-std::log1p(-v) / (M_PI * p.lambda_b));
        nodes.push_back({{d0, x0}, wd * 0.5 * r.w[j]});
      }
    }
  }
  std::vector<std::vector<double>> vals(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) { vals[i] = fn(nodes[i].cond); }, threads);
  points += static_cast<int>(nodes.size());
  double norm = nearest_cdf(p.lambda_i, p.d_local);
  std::vector<double> total(vals.empty() ? 0 : vals[0].size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t c = 0; c < total.size(); ++c) total[c] += nodes[i].weight * vals[i][c];
  for (auto& t : total) t /= norm;
  return total;
}

}  // namespace

GeometryAverage average_over_geometry(const NetworkParams& p,
                                      const std::function<std::vector<double>(const CondGeometry&)>& fn,
                                      const AnalysisOptions& opts) {
  double fd = nearest_cdf(p.lambda_i, p.d_local);
  double split = large_shape_split(p);
  std::vector<std::pair<double, double>> upanels;
  if (split > 0.0 && split < p.d_local) {
    double us = nearest_cdf(p.lambda_i, split);
    upanels = {{0.0, us}, {us, fd}};
  } else {
    upanels = {{0.0, fd}};
  }
  GeometryAverage out;
  std::vector<double> prev;
  int n = opts.outer_start;
  for (int level = 0; level < opts.outer_levels; ++level, n *= 2) {
    auto cur = grid_average(p, fn, upanels, n, opts.threads, out.points);
    if (!prev.empty()) {
      double d = 0.0;
      for (std::size_t c = 0; c < cur.size(); ++c) d = std::max(d, std::fabs(cur[c] - prev[c]));
      out.delta = d;
      if (d < opts.outer_tol) {
        out.values = cur;
        out.converged = true;
        return out;
      }
    }
    prev = std::move(cur);
  }
  out.values = prev;
  out.converged = false;
  return out;
}

double c_threshold(double tau, double x0, const NetworkParams& p) {
  return (1.0 - tau) * ul_tx_power(x0, p) / (tau * p.eta);
}

double noninteger_blend(double p_floor, double p_ceil, double k, double zeta) {
  double fl = std::floor(k), ce = std::ceil(k);
  if (fl == ce) return p_floor;
  double om = zeta * (ce - k) / (zeta * (ce - k) + (k - fl));
  return om * p_floor + (1.0 - om) * p_ceil;
}

EnergyCond energy_coverage_cond(const CondGeometry& cond, double tau, const NetworkParams& p,
                                const AnalysisOptions& opts) {
  EnergyCond out;
  if (tau <= 0.0) return out;
  if (tau >= 1.0) {
    out.p_en = out.p_sdr_gt = out.p_sid_gt = 1.0;
    return out;
  }
  double c = c_threshold(tau, cond.x0, p);
  SignalMoments m = sdr_moments(cond, p);
  LaplaceFn lsid = laplace_sid(cond, p);
  double f_c = invert_cdf(lsid, c).probability;
  double p_id = 1.0 - f_c;
  out.p_sid_gt = p_id;

  GammaFit fit;
  bool large = false;
  try {
    fit = gamma_fit(m);
    large = fit.k > p.k_tilde;
  } catch (const DegenerateMoments&) {
    large = true;
  }
  if (large) {
    // S_dr is replaced by its mean
    out.large_k = true;
    out.k = fit.k > 0.0 ? fit.k : INFINITY;
    double mu = m.m1;
    if (mu > c) {
      out.p_en = 1.0;
      out.p_sdr_gt = 1.0;
      out.p_joint = 0.0;
      return out;
    }
    double f_rest = (c - mu > 0.0) ? invert_cdf(lsid, c - mu).probability : 0.0;
    double p_sic = f_c > 0.0 ? std::clamp((f_c - f_rest) / f_c, 0.0, 1.0) : 0.0;
    out.p_joint = p_sic;
    out.p_en = std::clamp(p_id + p_sic * (1.0 - p_id), 0.0, 1.0);
    return out;
  }

  double k = usable_shape(fit.k);
  out.k = fit.k;
  double th = fit.theta;
  int kf = static_cast<int>(std::floor(k)), kc = static_cast<int>(std::ceil(k));
  LaplaceFn yc = affine(lsid, 1.0 / th, c / th, -1.0, "Y_C");
  std::vector<double> tc, ts;
  yc.taylor(1.0, kc - 1, tc);
  if (opts.paper_literal_sdr) affine(lsid, 1.0 / th, 0.0, 1.0, "Y_S").taylor(1.0, kc - 1, ts);
  auto at = [&](int kk, double& sdr, double& sic) {
    if (opts.paper_literal_sdr)
      sdr = survival_from_taylor(ts, kk).value;
    else
      sdr = boost::math::gamma_q(static_cast<double>(kk), c / th);
    sic = survival_from_taylor(tc, kk).value;
    return std::clamp(sdr + p_id + sic * (1.0 - sdr) * (1.0 - p_id) - sdr * p_id, 0.0, 1.0);
  };
  double sdr_f, sic_f;
  double pf = at(kf, sdr_f, sic_f);
  if (kc == kf) {
    out.p_en = pf;
    out.p_sdr_gt = sdr_f;
    out.p_joint = sic_f;
    return out;
  }
  double sdr_c, sic_c;
  double pc = at(kc, sdr_c, sic_c);
  out.p_en = noninteger_blend(pf, pc, k, p.zeta_en);
  out.p_sdr_gt = noninteger_blend(sdr_f, sdr_c, k, p.zeta_en);
  out.p_joint = noninteger_blend(sic_f, sic_c, k, p.zeta_en);
  return out;
}

CoverageBreakdown energy_breakdown(double tau, const NetworkParams& p, const AnalysisOptions& opts) {
  CoverageBreakdown out;
  if (tau <= 0.0) return out;
  if (tau >= 1.0) {
    out.p_en = out.p_sdr_gt = out.p_sid_gt = 1.0;
    return out;
  }
  auto avg = average_over_geometry(
      p,
      [&](const CondGeometry& c) {
        EnergyCond e = energy_coverage_cond(c, tau, p, opts);
        return std::vector<double>{e.p_en, e.p_sdr_gt, e.p_sid_gt, e.p_joint};
      },
      opts);
  out.p_en = std::clamp(avg.values[0], 0.0, 1.0);
  out.p_sdr_gt = std::clamp(avg.values[1], 0.0, 1.0);
  out.p_sid_gt = std::clamp(avg.values[2], 0.0, 1.0);
  out.p_joint = std::clamp(avg.values[3], 0.0, 1.0);
  return out;
}

double energy_coverage(double tau, const NetworkParams& p, const AnalysisOptions& opts) {
  return energy_breakdown(tau, p, opts).p_en;
}

double ul_coverage_cond(const CondGeometry& cond, const NetworkParams& p, double lambda_u_prime,
                        const std::shared_ptr<const InterferenceKernel>& kernel, const AnalysisOptions& /*opts*/) {
  SignalMoments m = sul_moments(cond, p);
  double g = p.gamma_th, w = p.noise;
  LaplaceFn li = laplace_interference(kernel, p, lambda_u_prime);
  GammaFit fit;
  bool large = false;
  try {
    fit = gamma_fit(m);
    large = fit.k > p.k_tilde;
  } catch (const DegenerateMoments&) {
    large = true;
  }
  if (large) {
    double z = m.m1 / g - w;
    if (z <= 0.0) return 0.0;
    if (lambda_u_prime <= 0.0) return 1.0;
    return invert_cdf(li, z).probability;
  }
  double k = usable_shape(fit.k);
  double th = fit.theta;
  LaplaceFn yi = affine(li, g / th, g * w / th, 1.0, "Y_I");
  int kf = static_cast<int>(std::floor(k)), kc = static_cast<int>(std::ceil(k));
  std::vector<double> t;
  yi.taylor(1.0, kc - 1, t);
  double pf = survival_from_taylor(t, kf).value;
  if (kc == kf) return pf;
  double pc = survival_from_taylor(t, kc).value;
  return noninteger_blend(pf, pc, k, p.zeta_ul);
}

double ul_coverage_cond(const CondGeometry& cond, const NetworkParams& p, double lambda_u_prime,
                        const AnalysisOptions& opts) {
  return ul_coverage_cond(cond, p, lambda_u_prime, std::make_shared<const InterferenceKernel>(p), opts);
}

double ul_coverage(const NetworkParams& p, double lambda_u_prime, const AnalysisOptions& opts) {
  auto kernel = std::make_shared<const InterferenceKernel>(p);
  auto avg = average_over_geometry(
      p,
      [&](const CondGeometry& c) {
        return std::vector<double>{ul_coverage_cond(c, p, lambda_u_prime, kernel, opts)};
      },
      opts);
  return std::clamp(avg.values[0], 0.0, 1.0);
}

double interferer_density(double p_en, const NetworkParams& p, const AnalysisOptions& opts) {
  return p_en * (opts.interferer_base == InterfererBase::bs_density ? p.lambda_b : p.lambda_u);
}

CoverageBreakdown overall_coverage(double tau, const NetworkParams& p, const AnalysisOptions& opts) {
  CoverageBreakdown out;
  if (opts.regularly_powered) {
    out.p_en = out.p_sdr_gt = out.p_sid_gt = 1.0;
  } else {
    out = energy_breakdown(tau, p, opts);
  }
  out.lambda_u_prime = interferer_density(out.p_en, p, opts);
  out.p_ul = out.p_en > 0.0 ? ul_coverage(p, out.lambda_u_prime, opts) : ul_coverage(p, 0.0, opts);
  out.p_cov = out.p_en * out.p_ul;
  return out;
}

double spatial_throughput(double tau, const NetworkParams& p, const CoverageBreakdown& cov) {
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  return (1.0 - tau) * cov.lambda_u_prime * std::log1p(p.gamma_th) * cov.p_cov;
}

double spatial_throughput(double tau, const NetworkParams& p, const AnalysisOptions& opts) {
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  return spatial_throughput(tau, p, overall_coverage(tau, p, opts));
}

double mean_harvested_energy(double tau, const NetworkParams& p) {
  AnalysisOptions o;
  o.outer_tol = 1e-6;
  auto avg = average_over_geometry(
      p, [&](const CondGeometry& c) { return std::vector<double>{sdr_moments(c, p).m1 + mean_sid(c.x0, p)}; }, o);
  return tau * p.slot * p.eta * avg.values[0];
}

double mean_ue_power(const NetworkParams& p) {
  auto f = [&](double x0) { return ul_tx_power(x0, p) * nearest_pdf(p.lambda_b, x0); };
  return integrate_to_infinity(f, 0.0, 0.0, 1e-10).value;
}

EfficiencyReport power_efficiency(double tau, const NetworkParams& p, const CoverageBreakdown& cov) {
  EfficiencyReport r;
  r.mean_eh = mean_harvested_energy(tau, p);
  r.mean_p0 = mean_ue_power(p);
  if (tau > 0.0) r.ehe = r.mean_eh * p.lambda_u / (tau * p.slot * p.lambda_b * (p.p_cb + p.p_t / p.eta_b));
  r.ee = std::log2(1.0 + p.gamma_th) * cov.p_cov / (p.p_cu + r.mean_p0 / p.eta_u);
  return r;
}

EfficiencyReport power_efficiency(double tau, const NetworkParams& p, const AnalysisOptions& opts) {
  return power_efficiency(tau, p, overall_coverage(tau, p, opts));
}

}  // namespace irswpcn
