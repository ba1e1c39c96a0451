#include "irswpcn/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "irswpcn/metrics.hpp"
#include "irswpcn/moments.hpp"
#include "irswpcn/parallel.hpp"

namespace irswpcn {

namespace {

struct Gains {
  double beta, alpha;
  double operator()(double d2) const { return gain_from_d2(beta, alpha, d2); }
};

// |direct + beamformed + scattered|^2 for a link whose beamformed term is
// phase-aligned with the direct path.
double composite_power(double g_direct, double g_in, double g_out, double scattered_var,
                       const std::vector<std::pair<double, double>>* elementwise, int n, SamplingMode mode,
                       Rng& rng) {
  double amp = sample_rayleigh_amp(g_direct, rng) + sample_beamformed_amp(g_in, g_out, n, mode, rng);
  std::complex<double> sc{0.0, 0.0};
  if (mode == SamplingMode::exact && elementwise) {
    for (const auto& [gi, gr] : *elementwise) sc += sample_scattered(gi, gr, n, mode, rng);
  } else if (n > 0 && scattered_var > 0.0) {
    sc = sample_cscg(scattered_var, rng);
  }
  return std::norm(amp + sc);
}

}  // namespace

double default_disk_radius(const NetworkParams& p) {
  return std::max(5.0 / std::sqrt(M_PI * p.lambda_b), 300.0);
}

NetworkRealization drop_network(const NetworkParams& p, const SimOptions& opts, Rng& rng) {
  NetworkRealization net;
  double radius = opts.disk_radius > 0.0 ? opts.disk_radius : default_disk_radius(p);
  do {
    net.bs_points = sample_ppp(p.lambda_b, radius, rng);
  } while (net.bs_points.points.empty());
  net.serving_bs = static_cast<std::size_t>(nearest_index(net.bs_points, {0.0, 0.0}));
  // the analysis conditions on at least one IRS within D
  do {
    net.irs_points = sample_ppp(p.lambda_i, p.d_local, rng);
  } while (net.irs_points.points.empty());
  net.serving_irs = static_cast<std::size_t>(nearest_index(net.irs_points, {0.0, 0.0}));

  const Point2 bs0 = net.bs_points.points[net.serving_bs];
  if (opts.layout == CellLayout::palm) {
    net.cell_points = sample_ppp(p.lambda_b, radius, rng, bs0);
  } else {
    net.cell_points = net.bs_points;
    net.cell_points.points.erase(net.cell_points.points.begin() + static_cast<long>(net.serving_bs));
  }
  net.ue_points.density = p.lambda_b;
  net.ue_points.radius = radius;
  for (std::size_t m = 0; m < net.cell_points.points.size(); ++m) {
    const Point2 bm = net.cell_points.points[m];
    double y = std::sqrt(dist2(bm, bs0));
    if (uniform01(rng) >= nearest_cdf(p.lambda_u, y)) continue;
    Interferer it;
    it.cell = m;
    it.y = y;
    it.link = sample_cond_link(p.lambda_u, y, rng);
    double t = 2.0 * M_PI * uniform01(rng);
    it.ue = {bm.x + it.link * std::cos(t), bm.y + it.link * std::sin(t)};
    if (p.n_elems > 0) {
      PointSet local;
      do {
        local = sample_ppp(p.lambda_i, p.d_local, rng, it.ue);
      } while (local.points.empty());
      it.irs = std::move(local.points);
    }
    net.ue_points.points.push_back(it.ue);
    net.interferers.push_back(std::move(it));
  }
  return net;
}

ChargingOutcome simulate_charging(const NetworkRealization& net, double tau, const NetworkParams& p,
                                  const SimOptions& opts, Rng& rng) {
  const Gains g{beta(p), p.alpha};
  const int n = p.n_elems;
  const double hb2 = p.h_b * p.h_b, hi2 = p.h_i * p.h_i, dh2 = (p.h_b - p.h_i) * (p.h_b - p.h_i);
  const bool approx = opts.geometry == CascadeGeometry::approximated;
  const auto& bs = net.bs_points.points;
  const auto& irs = net.irs_points.points;
  const Point2 ue{0.0, 0.0};
  const Point2 bs0 = bs[net.serving_bs];
  const double x0sq = dist2(bs0, ue);

  std::vector<double> gr(irs.size());
  double sum_gr = 0.0;
  for (std::size_t j = 0; j < irs.size(); ++j) {
    gr[j] = g(dist2(irs[j], ue) + hi2);
    sum_gr += gr[j];
  }

  ChargingOutcome out;
  const double gd0 = g(x0sq + hb2);
  const std::size_t j0 = net.serving_irs;
  double gi0 = approx ? gd0 : g(dist2(bs0, irs[j0]) + dh2);
  double scat = 0.0;
  std::vector<std::pair<double, double>> elems;
  for (std::size_t j = 0; j < irs.size(); ++j) {
    if (j == j0) continue;
    double gi = approx ? gd0 : g(dist2(bs0, irs[j]) + dh2);
    scat += gi * gr[j];
    if (opts.sampling == SamplingMode::exact) elems.emplace_back(gi, gr[j]);
  }
  out.s_dr = p.p_t * composite_power(gd0, gi0, gr[j0], n * scat, &elems, n, opts.sampling, rng);

  for (std::size_t m = 0; m < bs.size(); ++m) {
    if (m == net.serving_bs) continue;
    double gdm = g(dist2(bs[m], ue) + hb2);
    double var;
    if (approx) {
      var = gdm * (1.0 + n * sum_gr);
    } else {
      double acc = 0.0;
      for (std::size_t j = 0; j < irs.size(); ++j) acc += g(dist2(bs[m], irs[j]) + dh2) * gr[j];
      var = gdm + n * acc;
    }
    out.s_id += p.p_t * var * sample_exponential(rng);
  }
  double x0 = std::sqrt(x0sq);
  out.e_h = tau * p.slot * p.eta * (out.s_dr + out.s_id);
  out.e_min = (1.0 - tau) * p.slot * ul_tx_power(x0, p);
  out.covered = out.e_h >= out.e_min;
  return out;
}

UlOutcome simulate_ul(const NetworkRealization& net, const NetworkParams& p, const std::vector<char>& active,
                      const SimOptions& opts, Rng& rng) {
  const Gains g{beta(p), p.alpha};
  const int n = p.n_elems;
  const double hb2 = p.h_b * p.h_b, hi2 = p.h_i * p.h_i, dh2 = (p.h_b - p.h_i) * (p.h_b - p.h_i);
  const bool approx = opts.geometry == CascadeGeometry::approximated;
  const auto& irs = net.irs_points.points;
  const Point2 ue{0.0, 0.0};
  const Point2 bs0 = net.bs_points.points[net.serving_bs];
  const double x0sq = dist2(bs0, ue);
  const double fd = g(x0sq + hb2);
  const std::size_t j0 = net.serving_irs;

  double scat = 0.0, fr0 = 0.0, fi0 = 0.0;
  std::vector<std::pair<double, double>> elems;
  for (std::size_t j = 0; j < irs.size(); ++j) {
    double fi = g(dist2(irs[j], ue) + hi2);
    double fr = approx ? fd : g(dist2(irs[j], bs0) + dh2);
    if (j == j0) {
      fi0 = fi;
      fr0 = fr;
      continue;
    }
    scat += fi * fr;
    if (opts.sampling == SamplingMode::exact) elems.emplace_back(fi, fr);
  }
  UlOutcome out;
  double p0 = ul_tx_power(std::sqrt(x0sq), p);
  out.s_ul = p0 * composite_power(fd, fi0, fr0, n * scat, &elems, n, opts.sampling, rng);

  for (std::size_t k = 0; k < net.interferers.size(); ++k) {
    if (!active[k]) continue;
    const Interferer& it = net.interferers[k];
    double pk = p.rho * std::pow(it.link * it.link + hb2, p.eps * p.alpha / 2.0);
    double var;
    if (approx) {
      double fdk = g(it.y * it.y + hb2);
      double acc = 0.0;
      for (const auto& q : it.irs) acc += g(dist2(q, it.ue) + hi2);
      var = fdk * (1.0 + n * acc);
    } else {
      double fdk = g(dist2(it.ue, bs0) + hb2);
      double acc = 0.0;
      for (const auto& q : it.irs) acc += g(dist2(q, it.ue) + hi2) * g(dist2(q, bs0) + dh2);
      var = fdk + n * acc;
    }
    out.interference += pk * var * sample_exponential(rng);
  }
  out.sinr = out.s_ul / (out.interference + p.noise);
  return out;
}

bool interferer_covered(const NetworkRealization& net, std::size_t k, double tau, const NetworkParams& p, Rng& rng) {
  const Gains g{beta(p), p.alpha};
  const int n = p.n_elems;
  const double hb2 = p.h_b * p.h_b, hi2 = p.h_i * p.h_i;
  const Interferer& it = net.interferers[k];
  const auto& cells = net.cell_points.points;

  double gd = g(it.link * it.link + hb2);
  double sum_gr = 0.0, gr0 = 0.0, best = INFINITY;
  for (const auto& q : it.irs) {
    double d2 = dist2(q, it.ue);
    double gr = g(d2 + hi2);
    sum_gr += gr;
    if (d2 < best) {
      best = d2;
      gr0 = gr;
    }
  }
  double scat = gd * (sum_gr - gr0);
  double s_dr =
      p.p_t * composite_power(gd, gd, gr0, n * scat, nullptr, n, SamplingMode::approximate, rng);
  double ups = 1.0 + n * sum_gr;
  const Point2 bs0 = net.bs_points.points[net.serving_bs];
  double s_id = p.p_t * g(dist2(bs0, it.ue) + hb2) * ups * sample_exponential(rng);
  for (std::size_t m = 0; m < cells.size(); ++m) {
    if (m == it.cell) continue;
    s_id += p.p_t * g(dist2(cells[m], it.ue) + hb2) * ups * sample_exponential(rng);
  }
  double e_h = tau * p.slot * p.eta * (s_dr + s_id);
  double e_min = (1.0 - tau) * p.slot * ul_tx_power(it.link, p);
  return e_h >= e_min;
}

MetricEstimate estimate_mean(const std::vector<double>& x) {
  MetricEstimate e;
  e.n_trials = static_cast<long>(x.size());
  if (x.empty()) return e;
  double s = 0.0;
  for (double v : x) s += v;
  e.mean = s / x.size();
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - e.mean) * (v - e.mean);
    e.ci95_halfwidth = 1.96 * std::sqrt(ss / (x.size() - 1) / x.size());
  }
  return e;
}

CampaignResult run_campaign(const NetworkParams& p, double tau, long n_trials, const SimOptions& opts,
                            std::uint64_t master_seed) {
  if (n_trials < 1) throw std::invalid_argument("run_campaign: n_trials must be positive");
  CampaignResult res;
  res.seed = master_seed;
  res.mode = opts.mode;
  double p_active = 1.0;
  if (!opts.regularly_powered && opts.mode == CampaignMode::decoupled)
    p_active = std::isnan(opts.p_active) ? energy_coverage(tau, p) : opts.p_active;

  struct Trial {
    char covered = 0, success = 0;
    double e_h = 0.0, s_ul = 0.0, interference = 0.0, p0 = 0.0, active_share = 0.0;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(n_trials));
  parallel_for(
      trials.size(),
      [&](std::size_t t) {
        Rng rng = make_stream(master_seed, t);
        NetworkRealization net = drop_network(p, opts, rng);
        net.seed = master_seed;
        ChargingOutcome ch = simulate_charging(net, tau, p, opts, rng);
        std::vector<char> active(net.interferers.size(), 0);
        double on = 0.0;
        for (std::size_t k = 0; k < active.size(); ++k) {
          if (opts.regularly_powered)
            active[k] = 1;
          else if (opts.mode == CampaignMode::coupled)
            active[k] = interferer_covered(net, k, tau, p, rng) ? 1 : 0;
          else
            active[k] = uniform01(rng) < p_active ? 1 : 0;
          on += active[k];
        }
        UlOutcome ul = simulate_ul(net, p, active, opts, rng);
        Trial& tr = trials[t];
        tr.covered = (opts.regularly_powered || ch.covered) ? 1 : 0;
        tr.success = ul.sinr > p.gamma_th ? 1 : 0;
        tr.e_h = ch.e_h;
        tr.s_ul = ul.s_ul;
        tr.interference = ul.interference;
        tr.p0 = ul_tx_power(std::sqrt(dist2(net.bs_points.points[net.serving_bs], {0.0, 0.0})), p);
        tr.active_share = active.empty() ? 0.0 : on / active.size();
      },
      opts.threads);

  const std::size_t nt = trials.size();
  std::vector<double> cov(nt), joint(nt), succ(nt), eh(nt), sul(nt), itf(nt);
  std::vector<double> succ_given;
  double p0_sum = 0.0, share = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    const Trial& tr = trials[t];
    cov[t] = tr.covered;
    succ[t] = tr.success;
    joint[t] = tr.covered && tr.success;
    eh[t] = tr.e_h;
    sul[t] = tr.s_ul;
    itf[t] = tr.interference;
    p0_sum += tr.p0;
    share += tr.active_share;
    if (tr.covered) succ_given.push_back(tr.success);
  }
  res.p_active = opts.mode == CampaignMode::coupled ? share / nt : p_active;
  res.p_en = estimate_mean(cov);
  res.p_cov = estimate_mean(joint);
  res.p_ul = opts.mode == CampaignMode::coupled ? estimate_mean(succ_given) : estimate_mean(succ);
  res.mean_s_ul = estimate_mean(sul);
  res.mean_i = estimate_mean(itf);

  double lam_prime = res.p_en.mean * p.lambda_b;
  double nu_scale = (1.0 - tau) * lam_prime * std::log1p(p.gamma_th);
  res.nu = {res.p_cov.mean * nu_scale, res.p_cov.ci95_halfwidth * nu_scale, res.p_cov.n_trials};
  auto ehe_scale = p.lambda_u / (tau * p.slot * p.lambda_b * (p.p_cb + p.p_t / p.eta_b));
  MetricEstimate e = estimate_mean(eh);
  res.ehe = {e.mean * ehe_scale, e.ci95_halfwidth * ehe_scale, e.n_trials};
  double ee_scale = std::log2(1.0 + p.gamma_th) / (p.p_cu + p0_sum / nt / p.eta_u);
  res.ee = {res.p_cov.mean * ee_scale, res.p_cov.ci95_halfwidth * ee_scale, res.p_cov.n_trials};
  return res;
}

ConditionalDraw sample_conditional(const CondGeometry& cond, const NetworkParams& p, SamplingMode sampling, Rng& rng,
                                   bool with_sid) {
  const Gains g{beta(p), p.alpha};
  const int n = p.n_elems;
  const double hb2 = p.h_b * p.h_b, hi2 = p.h_i * p.h_i;
  const double gd = g(cond.x0 * cond.x0 + hb2);
  const double gr0 = g(cond.d0 * cond.d0 + hi2);
  PointSet others = sample_ppp(p.lambda_i, p.d_local, rng);
  double sum_gr = 0.0;
  std::vector<std::pair<double, double>> elems;
  for (const auto& q : others.points) {
    double r2 = q.x * q.x + q.y * q.y;
    if (r2 <= cond.d0 * cond.d0) continue;
    double gr = g(r2 + hi2);
    sum_gr += gr;
    if (sampling == SamplingMode::exact) elems.emplace_back(gd, gr);
  }
  ConditionalDraw out;
  out.s_dr = p.p_t * composite_power(gd, gd, gr0, n * gd * sum_gr, &elems, n, sampling, rng);
  out.s_ul = ul_tx_power(cond.x0, p) * composite_power(gd, gr0, gd, n * gd * sum_gr, &elems, n, sampling, rng);
  if (with_sid) {
    PointSet bs = sample_ppp(p.lambda_b, default_disk_radius(p), rng);
    for (const auto& b : bs.points) {
      double r2 = b.x * b.x + b.y * b.y;
      if (r2 <= cond.x0 * cond.x0) continue;
      out.s_id += p.p_t * g(r2 + hb2) * (1.0 + n * sum_gr) * sample_exponential(rng);
    }
  }
  return out;
}

}  // namespace irswpcn
