#include "irswpcn/figures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "irswpcn/metrics.hpp"
#include "irswpcn/moments.hpp"
#include "irswpcn/parallel.hpp"
#include "irswpcn/simulator.hpp"

namespace irswpcn {

bool FigureReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const FigureCheck& c) { return c.pass; });
}

const FigureCheck* FigureReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> figure_ids() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"};
}

namespace {

std::string num(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 5);
  return std::string(buf, r.ptr);
}

FigureReport report(std::string id, std::string axis) {
  FigureReport r;
  r.id = std::move(id);
  r.axis = std::move(axis);
  return r;
}

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> v;
  int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) v.push_back(std::round((start + i * step) * 1e12) / 1e12);
  return v;
}

// Sets lambda_b and keeps lambda_u tied to it when the base ties them.
NetworkParams with_bs_density(NetworkParams p, double lambda_b) {
  bool tied = p.lambda_u == p.lambda_b;
  p.lambda_b = lambda_b;
  if (tied) p.lambda_u = lambda_b;
  return p;
}

NetworkParams with_elems(NetworkParams p, int n) {
  p.n_elems = n;
  return p;
}

int irs_elems(const NetworkParams& base) { return base.n_elems > 0 ? base.n_elems : 1000; }

struct Case {
  std::string series;
  double x = 0.0;
  NetworkParams p;
  bool regular = false;
};

struct CaseResult {
  CoverageBreakdown cov;
  CampaignResult sim;
  bool simulated = false;
};

// Evaluates every case in parallel; analytic coverage is optional because
// some figures only need moments.
std::vector<CaseResult> evaluate(const std::vector<Case>& cases, const FigureOptions& fo, bool coverage,
                                 bool simulate) {
  std::vector<CaseResult> out(cases.size());
  parallel_for(
      cases.size(),
      [&](std::size_t i) {
        const Case& c = cases[i];
        AnalysisOptions ao;
        ao.regularly_powered = c.regular;
        ao.threads = 1;
        if (coverage) out[i].cov = overall_coverage(c.p.tau, c.p, ao);
        if (simulate && fo.simulate) {
          SimOptions so;
          so.regularly_powered = c.regular;
          so.threads = 1;
          out[i].sim = run_campaign(c.p, c.p.tau, fo.trials, so, fo.seed);
          out[i].simulated = true;
        }
      },
      fo.threads);
  return out;
}

void add_point(FigureReport& r, const std::string& series, const std::string& quantity, double x, double analytic,
               const MetricEstimate* sim) {
  FigurePoint pt{series, quantity, x, analytic};
  if (sim) {
    pt.simulated = sim->mean;
    pt.ci95 = sim->ci95_halfwidth;
  }
  r.points.push_back(pt);
}

std::vector<const FigurePoint*> series_of(const FigureReport& r, const std::string& series, const std::string& q) {
  std::vector<const FigurePoint*> v;
  for (const auto& pt : r.points)
    if (pt.series == series && pt.quantity == q) v.push_back(&pt);
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return a->x < b->x; });
  return v;
}

double value_at(const FigureReport& r, const std::string& series, const std::string& q, double x) {
  for (const auto& pt : r.points)
    if (pt.series == series && pt.quantity == q && std::fabs(pt.x - x) <= 1e-12 * std::max(1.0, std::fabs(x)))
      return pt.analytic;
  throw std::logic_error("missing figure point " + series + "/" + q);
}

// Monotonicity of one series; sim selects the simulated column.
void check_monotone(FigureReport& r, const std::string& series, const std::string& q, bool increasing, bool strict,
                    bool sim) {
  auto v = series_of(r, series, q);
  bool ok = true;
  std::string where;
  for (std::size_t i = 1; i < v.size(); ++i) {
    double a = sim ? v[i - 1]->simulated : v[i - 1]->analytic;
    double b = sim ? v[i]->simulated : v[i]->analytic;
    if (std::isnan(a) || std::isnan(b)) continue;
    double d = increasing ? b - a : a - b;
    if (strict ? !(d > 0.0) : d < 0.0) {
      ok = false;
      where = " (breaks between " + r.axis + "=" + num(v[i - 1]->x) + " and " + num(v[i]->x) + ")";
      break;
    }
  }
  std::string kind = std::string(strict ? "strictly " : "") + (increasing ? (strict ? "increasing" : "nondecreasing")
                                                                          : (strict ? "decreasing" : "nonincreasing"));
  r.checks.push_back({q + " " + (sim ? "simulated" : "analytic") + " " + kind + " in " + r.axis + " [" + series + "]",
                      ok, ok ? "" : "monotonicity violated" + where});
}

// Largest |analytic - simulated| over a quantity, absolute or relative.
void check_agreement(FigureReport& r, const std::string& q, double tol, bool relative) {
  double worst = 0.0;
  std::string where;
  bool any = false;
  for (const auto& pt : r.points) {
    if (pt.quantity != q || std::isnan(pt.simulated)) continue;
    any = true;
    double d = std::fabs(pt.analytic - pt.simulated);
    if (relative) d /= std::fabs(pt.analytic);
    if (d > worst) {
      worst = d;
      where = pt.series + " at " + r.axis + "=" + num(pt.x);
    }
  }
  if (!any) return;
  std::string name = q + (relative ? " relative" : " absolute") + " gap analytic vs simulated <= " + num(tol);
  r.checks.push_back({name, worst <= tol, "max " + num(worst) + (where.empty() ? "" : " (" + where + ")")});
}

FigureReport fig2(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig2", "tau");
  std::vector<Case> cases;
  for (double tau : grid(0.1, 0.9, 0.1)) {
    NetworkParams p = base;
    p.tau = tau;
    cases.push_back({"irs", tau, p});
  }
  std::vector<double> pen(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) { pen[i] = energy_coverage(cases[i].p.tau, cases[i].p); },
               fo.threads);
  std::vector<CaseResult> res = evaluate(cases, fo, false, true);
  for (std::size_t i = 0; i < cases.size(); ++i)
    add_point(r, "irs", "p_en", cases[i].x, pen[i], res[i].simulated ? &res[i].sim.p_en : nullptr);
  check_monotone(r, "irs", "p_en", true, false, false);
  if (fo.simulate) check_monotone(r, "irs", "p_en", true, false, true);
  check_agreement(r, "p_en", 0.1, false);
  return r;
}

FigureReport fig3(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig3", "lambda_b");
  const std::vector<double> densities = {1e-4, 5e-4, 1e-3, 2e-3, 5e-3};
  const int big = 4000;
  const std::vector<std::pair<std::string, int>> series = {
      {"no-irs", 0}, {"n=" + std::to_string(irs_elems(base)), irs_elems(base)}, {"n=4000", big}};
  std::vector<Case> cases;
  for (const auto& [name, n] : series)
    for (double lb : densities) cases.push_back({name, lb, with_elems(with_bs_density(base, lb), n)});
  std::vector<double> pen(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) { pen[i] = energy_coverage(cases[i].p.tau, cases[i].p); },
               fo.threads);
  std::vector<CaseResult> res = evaluate(cases, fo, false, true);
  for (std::size_t i = 0; i < cases.size(); ++i)
    add_point(r, cases[i].series, "p_en", cases[i].x, pen[i], res[i].simulated ? &res[i].sim.p_en : nullptr);
  for (const auto& s : series) check_monotone(r, s.first, "p_en", true, false, false);
  double gain = value_at(r, "n=4000", "p_en", 1e-3) - value_at(r, "no-irs", "p_en", 1e-3);
  r.checks.push_back({"p_en gain n=4000 over no-irs at lambda_b=1e-3 > 0.25", gain > 0.25, "gain " + num(gain)});
  double top = value_at(r, "n=4000", "p_en", 5e-3);
  r.checks.push_back({"p_en >= 0.99 at lambda_b=5e-3 [n=4000]", top >= 0.99,
                      "n=4000 " + num(top) + ", " + series[1].first + " " +
                          num(value_at(r, series[1].first, "p_en", 5e-3)) + ", no-irs " +
                          num(value_at(r, "no-irs", "p_en", 5e-3))});
  check_agreement(r, "p_en", 0.1, false);
  return r;
}

FigureReport fig4(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig4", "gamma_th_db");
  const std::vector<std::pair<std::string, int>> series = {
      {"no-irs", 0}, {"n=" + std::to_string(irs_elems(base)), irs_elems(base)}, {"n=4000", 4000}};
  std::vector<Case> cases;
  for (const auto& [name, n] : series)
    for (double db : grid(-10.0, 20.0, 5.0)) {
      NetworkParams p = with_elems(base, n);
      p.gamma_th = db_to_linear(db);
      cases.push_back({name, db, p, true});
    }
  std::vector<CaseResult> res = evaluate(cases, fo, true, true);
  for (std::size_t i = 0; i < cases.size(); ++i)
    add_point(r, cases[i].series, "p_ul", cases[i].x, res[i].cov.p_ul, res[i].simulated ? &res[i].sim.p_ul : nullptr);
  for (const auto& s : series) check_monotone(r, s.first, "p_ul", false, false, false);
  double gain = value_at(r, "n=4000", "p_ul", 0.0) - value_at(r, "no-irs", "p_ul", 0.0);
  r.checks.push_back({"p_ul gain n=4000 over no-irs at 0 dB within [0.55, 0.75]", gain >= 0.55 && gain <= 0.75,
                      "gain " + num(gain)});
  check_agreement(r, "p_ul", 0.05, false);
  return r;
}

FigureReport fig5(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig5", "lambda_i");
  const std::vector<double> densities = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  const std::vector<std::pair<std::string, int>> series = {{"n=" + std::to_string(irs_elems(base)), irs_elems(base)},
                                                           {"n=4000", 4000}};
  std::vector<Case> cases;
  for (const auto& [name, n] : series)
    for (double li : densities) {
      NetworkParams p = with_elems(base, n);
      p.lambda_i = li;
      cases.push_back({name, li, p, true});
    }
  std::vector<double> sul(cases.size()), itf(cases.size());
  parallel_for(
      cases.size(),
      [&](std::size_t i) {
        sul[i] = mean_sul(cases[i].p);
        itf[i] = mean_interference(cases[i].p, cases[i].p.lambda_b);
      },
      fo.threads);
  std::vector<CaseResult> res = evaluate(cases, fo, false, true);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    add_point(r, cases[i].series, "mean_s_ul", cases[i].x, sul[i], res[i].simulated ? &res[i].sim.mean_s_ul : nullptr);
    add_point(r, cases[i].series, "mean_i", cases[i].x, itf[i], res[i].simulated ? &res[i].sim.mean_i : nullptr);
  }
  for (const auto& s : series) {
    check_monotone(r, s.first, "mean_s_ul", true, true, false);
    auto v = series_of(r, s.first, "mean_i");
    auto [lo, hi] = std::minmax_element(v.begin(), v.end(), [](auto a, auto b) { return a->analytic < b->analytic; });
    double change = ((*hi)->analytic - (*lo)->analytic) / (*lo)->analytic;
    r.checks.push_back({"mean_i relative change over lambda_i < 0.1 [" + s.first + "]", change < 0.1,
                        "change " + num(change)});
  }
  check_agreement(r, "mean_s_ul", 0.05, true);
  check_agreement(r, "mean_i", 0.05, true);
  return r;
}

FigureReport fig6(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig6", "tau");
  NetworkParams dense = with_bs_density(base, 5e-3);
  const std::vector<std::pair<std::string, int>> series = {{"irs", irs_elems(base)}, {"no-irs", 0}};
  const auto taus = grid(0.1, 0.9, 0.1);
  std::vector<Case> cases;
  for (const auto& [name, n] : series)
    for (double tau : taus) {
      NetworkParams p = with_elems(dense, n);
      p.tau = tau;
      cases.push_back({name, tau, p});
    }
  // regularly powered coverage does not depend on tau
  for (const auto& [name, n] : series) cases.push_back({name + "-regular", 0.0, with_elems(dense, n), true});
  std::vector<CaseResult> res = evaluate(cases, fo, true, true);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const CaseResult& cr = res[i];
    auto sim = [&](const MetricEstimate& m) { return cr.simulated ? &m : nullptr; };
    if (!c.regular) {
      add_point(r, c.series, "p_en", c.x, cr.cov.p_en, sim(cr.sim.p_en));
      add_point(r, c.series, "p_ul", c.x, cr.cov.p_ul, sim(cr.sim.p_ul));
      add_point(r, c.series, "p_cov", c.x, cr.cov.p_cov, sim(cr.sim.p_cov));
    } else {
      for (double tau : taus) add_point(r, c.series, "p_cov", tau, cr.cov.p_cov, sim(cr.sim.p_cov));
    }
  }
  for (const auto& s : series) {
    check_monotone(r, s.first, "p_en", true, false, false);
    check_monotone(r, s.first, "p_cov", true, false, false);
  }
  bool dominates = true;
  for (double tau : taus)
    for (const char* q : {"p_en", "p_cov"})
      if (value_at(r, "irs", q, tau) < value_at(r, "no-irs", q, tau)) dominates = false;
  r.checks.push_back({"irs p_en and p_cov at least no-irs at every tau", dominates, ""});
  double reg_gain = value_at(r, "irs-regular", "p_cov", taus[0]) - value_at(r, "no-irs-regular", "p_cov", taus[0]);
  r.checks.push_back({"regularly powered p_cov gain from irs > 0.3", reg_gain > 0.3, "gain " + num(reg_gain)});
  double gap = std::fabs(value_at(r, "irs", "p_cov", 0.4) - value_at(r, "irs-regular", "p_cov", 0.4));
  r.checks.push_back({"irs p_cov within 0.05 of regularly powered at tau=0.4", gap <= 0.05, "gap " + num(gap)});
  check_agreement(r, "p_cov", 0.1, false);
  return r;
}

const std::vector<double> kEpsilons = {0.6, 0.8, 1.0};

std::string eps_name(double e) { return "eps=" + num(e); }

FigureReport fig7(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig7", "tau");
  const auto taus = grid(0.1, 0.9, 0.1);
  std::vector<Case> cases;
  for (double e : kEpsilons)
    for (double tau : taus) {
      NetworkParams p = with_elems(base, irs_elems(base));
      p.eps = e;
      p.tau = tau;
      cases.push_back({eps_name(e), tau, p});
    }
  std::vector<CaseResult> res = evaluate(cases, fo, true, true);
  for (std::size_t i = 0; i < cases.size(); ++i)
    add_point(r, cases[i].series, "p_cov", cases[i].x, res[i].cov.p_cov,
              res[i].simulated ? &res[i].sim.p_cov : nullptr);
  for (double e : kEpsilons) check_monotone(r, eps_name(e), "p_cov", true, false, false);
  bool order = true;
  for (double tau : taus)
    if (!(value_at(r, eps_name(0.6), "p_cov", tau) > value_at(r, eps_name(1.0), "p_cov", tau))) order = false;
  r.checks.push_back({"p_cov at eps=0.6 above eps=1 at every tau", order, ""});
  check_agreement(r, "p_cov", 0.1, false);
  return r;
}

// Index of the maximum and whether the sequence rises strictly to it and
// falls strictly after it.
std::pair<std::size_t, bool> unimodal(const std::vector<double>& v) {
  std::size_t arg = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  bool ok = true;
  for (std::size_t i = 1; i <= arg; ++i) ok = ok && v[i] > v[i - 1];
  for (std::size_t i = arg + 1; i < v.size(); ++i) ok = ok && v[i] < v[i - 1];
  return {arg, ok};
}

FigureReport fig8(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig8", "tau");
  const auto taus = grid(0.0, 1.0, 0.05);
  struct Series {
    std::string name;
    int n;
    double eps;
  };
  const std::vector<Series> series = {{"irs", irs_elems(base), base.eps},
                                      {"no-irs", 0, base.eps},
                                      {"irs " + eps_name(0.6), irs_elems(base), 0.6},
                                      {"irs " + eps_name(1.0), irs_elems(base), 1.0}};
  std::vector<Case> cases;
  for (const auto& s : series)
    for (double tau : taus) {
      NetworkParams p = with_elems(base, s.n);
      p.eps = s.eps;
      if (tau > 0.0 && tau < 1.0) p.tau = tau;
      cases.push_back({s.name, tau, p});
    }
  std::vector<double> nu(cases.size(), 0.0);
  std::vector<CampaignResult> sims(cases.size());
  std::vector<char> simulated(cases.size(), 0);
  parallel_for(
      cases.size(),
      [&](std::size_t i) {
        const Case& c = cases[i];
        if (c.x <= 0.0 || c.x >= 1.0) return;  // no time to charge or to transmit
        AnalysisOptions ao;
        ao.threads = 1;
        nu[i] = spatial_throughput(c.x, c.p, ao);
        if (fo.simulate) {
          SimOptions so;
          so.threads = 1;
          sims[i] = run_campaign(c.p, c.x, fo.trials, so, fo.seed);
          simulated[i] = 1;
        }
      },
      fo.threads);
  for (std::size_t i = 0; i < cases.size(); ++i)
    add_point(r, cases[i].series, "nu", cases[i].x, nu[i], simulated[i] ? &sims[i].nu : nullptr);

  bool ends = true;
  std::map<std::string, double> argmax;
  for (const auto& s : series) {
    auto v = series_of(r, s.name, "nu");
    ends = ends && v.front()->analytic == 0.0 && v.back()->analytic == 0.0;
    std::vector<double> vals;
    for (auto* pt : v) vals.push_back(pt->analytic);
    auto [arg, ok] = unimodal(vals);
    bool interior = arg > 0 && arg + 1 < vals.size();
    argmax[s.name] = v[arg]->x;
    r.checks.push_back({"nu unimodal with interior argmax [" + s.name + "]", ok && interior,
                        "argmax tau=" + num(v[arg]->x)});
  }
  r.checks.push_back({"nu is exactly zero at tau=0 and tau=1", ends, ""});
  r.checks.push_back({"nu argmax identical for irs and no-irs", argmax["irs"] == argmax["no-irs"],
                      "irs " + num(argmax["irs"]) + ", no-irs " + num(argmax["no-irs"])});
  double a06 = argmax["irs " + eps_name(0.6)], a10 = argmax["irs " + eps_name(1.0)];
  r.checks.push_back({"nu argmax does not decrease with eps", a06 <= argmax["irs"] && argmax["irs"] <= a10,
                      "eps=0.6 " + num(a06) + ", base " + num(argmax["irs"]) + ", eps=1 " + num(a10)});
  check_agreement(r, "nu", 0.1 * *std::max_element(nu.begin(), nu.end()), false);
  return r;
}

FigureReport fig9(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig9", "lambda_i");
  const std::vector<double> densities = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  const std::vector<std::pair<std::string, int>> series = {
      {"no-irs", 0}, {"n=" + std::to_string(irs_elems(base)), irs_elems(base)}, {"n=4000", 4000}};
  std::vector<Case> cases;
  for (const auto& [name, n] : series)
    for (double li : densities) {
      NetworkParams p = with_elems(base, n);
      p.lambda_i = li;
      cases.push_back({name, li, p});
    }
  std::vector<double> ehe(cases.size());
  parallel_for(
      cases.size(), [&](std::size_t i) { ehe[i] = power_efficiency(cases[i].p.tau, cases[i].p, CoverageBreakdown{}).ehe; },
      fo.threads);
  std::vector<CaseResult> res = evaluate(cases, fo, false, true);
  for (std::size_t i = 0; i < cases.size(); ++i)
    add_point(r, cases[i].series, "ehe", cases[i].x, ehe[i], res[i].simulated ? &res[i].sim.ehe : nullptr);
  for (std::size_t s = 1; s < series.size(); ++s) check_monotone(r, series[s].first, "ehe", true, true, false);
  bool order = true;
  for (double li : densities)
    for (std::size_t s = 1; s < series.size(); ++s)
      if (!(value_at(r, series[s].first, "ehe", li) > value_at(r, series[s - 1].first, "ehe", li))) order = false;
  r.checks.push_back({"ehe increases with n at every lambda_i", order, ""});
  check_agreement(r, "ehe", 0.05, true);
  return r;
}

FigureReport fig10(const NetworkParams& base, const FigureOptions& fo) {
  FigureReport r = report("fig10", "tau");
  const auto taus = grid(0.1, 0.9, 0.1);
  std::vector<Case> cases;
  for (double e : kEpsilons)
    for (double tau : taus) {
      NetworkParams p = with_elems(base, irs_elems(base));
      p.eps = e;
      p.tau = tau;
      cases.push_back({eps_name(e), tau, p});
    }
  std::vector<CaseResult> res = evaluate(cases, fo, true, true);
  std::vector<double> ee(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) { ee[i] = power_efficiency(cases[i].p.tau, cases[i].p, res[i].cov).ee; },
               fo.threads);
  for (std::size_t i = 0; i < cases.size(); ++i)
    add_point(r, cases[i].series, "ee", cases[i].x, ee[i], res[i].simulated ? &res[i].sim.ee : nullptr);
  for (double e : kEpsilons) {
    check_monotone(r, eps_name(e), "ee", true, false, false);
    auto v = series_of(r, eps_name(e), "ee");
    double last = v.back()->analytic, before = v[v.size() - 3]->analytic;
    double rise = (last - before) / last;
    r.checks.push_back({"ee flat over the last 0.2 of tau, rise < 0.1 [" + eps_name(e) + "]", rise < 0.1,
                        "rise " + num(rise)});
  }
  bool order = true;
  for (double tau : taus)
    if (!(value_at(r, eps_name(0.6), "ee", tau) > value_at(r, eps_name(1.0), "ee", tau))) order = false;
  r.checks.push_back({"ee at eps=0.6 above eps=1 at every tau", order, ""});
  check_agreement(r, "ee", 0.1 * *std::max_element(ee.begin(), ee.end()), false);
  return r;
}

}  // namespace

FigureReport run_figure(const std::string& id, const NetworkParams& base, const FigureOptions& opts) {
  static const std::map<std::string, std::function<FigureReport(const NetworkParams&, const FigureOptions&)>> presets =
      {{"fig2", fig2}, {"fig3", fig3}, {"fig4", fig4}, {"fig5", fig5}, {"fig6", fig6},
       {"fig7", fig7}, {"fig8", fig8}, {"fig9", fig9}, {"fig10", fig10}};
  auto it = presets.find(id);
  if (it == presets.end()) throw std::invalid_argument("unknown figure id '" + id + "'");
  return it->second(base, opts);
}

}  // namespace irswpcn
