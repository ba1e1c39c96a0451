#include "irswpcn/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <set>
#include <variant>

#include "irswpcn/config.hpp"
#include "irswpcn/figures.hpp"
#include "irswpcn/metrics.hpp"
#include "irswpcn/moments.hpp"
#include "irswpcn/parallel.hpp"
#include "irswpcn/quadrature.hpp"
#include "irswpcn/simulator.hpp"

namespace irswpcn {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

namespace {

const std::vector<std::string> kMetrics = {"p_en", "p_ul", "p_cov", "nu", "ehe", "ee", "mean_s_ul", "mean_i"};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- tables ----

using Cell = std::variant<std::monostate, std::string, double, long long, std::uint64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<std::uint64_t>(c)) return std::to_string(std::get<std::uint64_t>(c));
  return "";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<double>(c)) {
    double v = std::get<double>(c);
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v));
  }
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<std::uint64_t>(c)) return std::get<std::uint64_t>(c);
  return nullptr;
}

void write_table(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "jsonl") {
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
      os << obj.dump() << '\n';
    }
    return;
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << '\n';
  }
}

// ---- sweep and scenarios ----

struct Settings {
  std::string config;
  std::string sweep;
  std::string scenarios = "baseline";
  std::string metrics;
  std::string out;
  std::string format = "csv";
  std::string mode = "decoupled";
  std::string sampling = "approximate";
  std::string geometry = "approximated";
  std::string layout = "palm";
  std::string interferer_base = "bs";
  long trials = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool literal_sdr = false;
  bool no_sim = false;
  std::string figure;
};

struct SweepSpec {
  std::string axis;  // empty without --sweep
  std::vector<double> values;
};

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw UsageError("bad number '" + s + "' in " + what);
  return v;
}

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec sw;
  if (text.empty()) return sw;
  auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("--sweep expects axis=start:stop:step");
  sw.axis = text.substr(0, eq);
  if (!is_field(sw.axis)) throw UsageError("--sweep: unknown parameter '" + sw.axis + "'");
  std::vector<std::string> parts;
  std::string rest = text.substr(eq + 1);
  for (std::size_t pos = 0;;) {
    auto c = rest.find(':', pos);
    parts.push_back(rest.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  if (parts.size() == 1) {
    sw.values = {parse_double(parts[0], "--sweep")};
    return sw;
  }
  if (parts.size() != 3) throw UsageError("--sweep expects axis=start:stop:step");
  double a = parse_double(parts[0], "--sweep"), b = parse_double(parts[1], "--sweep");
  double h = parse_double(parts[2], "--sweep");
  if (!(h > 0.0) || b < a) throw UsageError("--sweep needs start <= stop and a positive step");
  long n = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
  if (n > 100000) throw UsageError("--sweep has too many points");
  for (long i = 0; i < n; ++i) sw.values.push_back(std::stod(format_number(a + i * h)));
  return sw;
}

// Field setter that keeps lambda_u following lambda_b unless set on its own.
void apply_field(NetworkParams& p, bool& tied, const std::string& key, const std::string& value) {
  set_field(p, key, value);
  if (key.rfind("lambda_u", 0) == 0) tied = false;
  if (key.rfind("lambda_b", 0) == 0 && tied) p.lambda_u = p.lambda_b;
}

struct Point {
  std::string axis;
  Cell value;
  std::string scenario;
  NetworkParams p;
  bool regular = false;
};

// A scenario is a '+'-joined chain of patches: baseline, no-irs, regular or
// key=value.
void apply_scenario(const std::string& name, NetworkParams& p, bool& tied, bool& regular) {
  std::size_t pos = 0;
  while (pos <= name.size()) {
    auto plus = name.find('+', pos);
    std::string tok = name.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
    if (tok == "baseline" || tok == "irs") {
    } else if (tok == "no-irs") {
      p.n_elems = 0;
    } else if (tok == "regular") {
      regular = true;
    } else if (auto eq = tok.find('='); eq != std::string::npos) {
      apply_field(p, tied, tok.substr(0, eq), tok.substr(eq + 1));
    } else {
      throw UsageError("unknown scenario '" + tok + "'");
    }
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto c = s.find(',', pos);
    std::string tok = s.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
    if (!tok.empty()) out.push_back(tok);
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  return out;
}

NetworkParams base_params(const Settings& s) {
  return s.config.empty() ? load_from_environment() : load_file(s.config);
}

std::vector<Point> build_points(const Settings& s) {
  NetworkParams base = base_params(s);
  SweepSpec sw = parse_sweep(s.sweep);
  auto scenarios = split_list(s.scenarios);
  if (scenarios.empty()) throw UsageError("--scenario is empty");
  std::vector<Point> pts;
  std::vector<double> values = sw.axis.empty() ? std::vector<double>{NAN} : sw.values;
  for (double v : values)
    for (const auto& sc : scenarios) {
      Point pt;
      pt.p = base;
      pt.scenario = sc;
      bool tied = base.lambda_u == base.lambda_b;
      if (sw.axis.empty()) {
        pt.axis = "none";
      } else {
        pt.axis = sw.axis;
        pt.value = v;
        apply_field(pt.p, tied, sw.axis, format_number(v));
      }
      apply_scenario(sc, pt.p, tied, pt.regular);
      validate(pt.p);
      pts.push_back(std::move(pt));
    }
  return pts;
}

std::vector<std::string> requested_metrics(const Settings& s, const std::vector<std::string>& fallback,
                                           bool decompose) {
  std::vector<std::string> req = s.metrics.empty() ? fallback : split_list(s.metrics);
  std::set<std::string> want;
  for (const auto& m : req) {
    if (std::find(kMetrics.begin(), kMetrics.end(), m) == kMetrics.end())
      throw UsageError("unknown metric '" + m + "'");
    want.insert(m);
  }
  if (decompose && want.count("p_cov")) want.insert({"p_en", "p_ul"});
  std::vector<std::string> out;
  for (const auto& m : kMetrics)
    if (want.count(m)) out.push_back(m);
  return out;
}

AnalysisOptions analysis_options(const Settings& s, const Point& pt, unsigned threads) {
  AnalysisOptions ao;
  ao.paper_literal_sdr = s.literal_sdr;
  if (s.interferer_base == "device")
    ao.interferer_base = InterfererBase::device_density;
  else if (s.interferer_base != "bs")
    throw UsageError("--interferer-base must be bs or device");
  ao.regularly_powered = pt.regular;
  ao.threads = threads;
  return ao;
}

SimOptions sim_options(const Settings& s, const Point& pt, unsigned threads) {
  SimOptions so;
  so.mode = s.mode == "coupled" ? CampaignMode::coupled : CampaignMode::decoupled;
  so.sampling = s.sampling == "exact" ? SamplingMode::exact : SamplingMode::approximate;
  so.geometry = s.geometry == "actual" ? CascadeGeometry::actual : CascadeGeometry::approximated;
  so.layout = s.layout == "shared" ? CellLayout::shared : CellLayout::palm;
  so.regularly_powered = pt.regular;
  so.threads = threads;
  return so;
}

std::map<std::string, double> analytic_values(const Point& pt, const std::vector<std::string>& metrics,
                                              const AnalysisOptions& ao) {
  std::set<std::string> want(metrics.begin(), metrics.end());
  const NetworkParams& p = pt.p;
  std::map<std::string, double> v;
  bool needs_cov = want.count("p_ul") || want.count("p_cov") || want.count("nu") || want.count("ee") ||
                   want.count("mean_i");
  CoverageBreakdown cov;
  if (needs_cov) {
    cov = overall_coverage(p.tau, p, ao);
  } else if (want.count("p_en")) {
    cov = ao.regularly_powered ? CoverageBreakdown{1.0} : energy_breakdown(p.tau, p, ao);
  }
  v["p_en"] = cov.p_en;
  v["p_ul"] = cov.p_ul;
  v["p_cov"] = cov.p_cov;
  if (want.count("nu")) v["nu"] = spatial_throughput(p.tau, p, cov);
  if (want.count("ehe") || want.count("ee")) {
    EfficiencyReport e = power_efficiency(p.tau, p, cov);
    v["ehe"] = e.ehe;
    v["ee"] = e.ee;
  }
  if (want.count("mean_s_ul")) v["mean_s_ul"] = mean_sul(p);
  if (want.count("mean_i")) v["mean_i"] = mean_interference(p, cov.lambda_u_prime);
  return v;
}

const MetricEstimate& sim_metric(const CampaignResult& r, const std::string& m) {
  static const std::map<std::string, MetricEstimate CampaignResult::*> fields = {
      {"p_en", &CampaignResult::p_en}, {"p_ul", &CampaignResult::p_ul},           {"p_cov", &CampaignResult::p_cov},
      {"nu", &CampaignResult::nu},     {"ehe", &CampaignResult::ehe},             {"ee", &CampaignResult::ee},
      {"mean_s_ul", &CampaignResult::mean_s_ul}, {"mean_i", &CampaignResult::mean_i}};
  return r.*(fields.at(m));
}

// Per-point outcome shared by analyze, simulate and compare.
struct Outcome {
  std::map<std::string, double> analytic;
  CampaignResult sim;
  std::string error;
};

std::vector<Outcome> run_points(const Settings& s, const std::vector<Point>& pts,
                                const std::vector<std::string>& metrics, bool analytic, bool simulate) {
  std::vector<Outcome> out(pts.size());
  unsigned inner = pts.size() > 1 ? 1 : s.threads;
  parallel_for(
      pts.size(),
      [&](std::size_t i) {
        try {
          if (analytic) out[i].analytic = analytic_values(pts[i], metrics, analysis_options(s, pts[i], inner));
          if (simulate)
            out[i].sim = run_campaign(pts[i].p, pts[i].p.tau, s.trials, sim_options(s, pts[i], inner), s.seed);
        } catch (const UsageError&) {
          throw;
        } catch (const std::exception& e) {
          out[i].error = e.what();
        }
      },
      s.threads);
  return out;
}

void check_choices(const Settings& s) {
  auto one_of = [](const std::string& v, std::initializer_list<const char*> opts, const std::string& flag) {
    for (const char* o : opts)
      if (v == o) return;
    throw UsageError(flag + ": unexpected value '" + v + "'");
  };
  one_of(s.format, {"csv", "jsonl"}, "--format");
  one_of(s.mode, {"coupled", "decoupled"}, "--mode");
  one_of(s.sampling, {"exact", "approximate"}, "--sampling");
  one_of(s.geometry, {"approximated", "actual"}, "--geometry");
  one_of(s.layout, {"palm", "shared"}, "--layout");
  one_of(s.interferer_base, {"bs", "device"}, "--interferer-base");
  if (s.trials < 1) throw UsageError("--trials must be positive");
}

// ---- subcommands ----

int emit(const Table& t, const Settings& s, std::ostream& out) {
  if (s.out.empty()) {
    write_table(t, s.format, out);
    return kExitOk;
  }
  std::ofstream f(s.out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + s.out + "'");
  write_table(t, s.format, f);
  return kExitOk;
}

int cmd_analyze(const Settings& s, std::ostream& out) {
  auto pts = build_points(s);
  auto metrics = requested_metrics(s, {"p_en", "p_ul", "p_cov", "nu"}, false);
  auto res = run_points(s, pts, metrics, true, false);
  Table t;
  t.columns = {"axis", "value", "scenario"};
  t.columns.insert(t.columns.end(), metrics.begin(), metrics.end());
  t.columns.push_back("error");
  bool failed = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<Cell> row = {pts[i].axis, pts[i].value, pts[i].scenario};
    for (const auto& m : metrics) row.push_back(res[i].error.empty() ? Cell(res[i].analytic[m]) : Cell(NAN));
    row.push_back(res[i].error);
    failed = failed || !res[i].error.empty();
    t.rows.push_back(std::move(row));
  }
  emit(t, s, out);
  return failed ? kExitNumeric : kExitOk;
}

int cmd_simulate(const Settings& s, std::ostream& out) {
  auto pts = build_points(s);
  auto metrics = requested_metrics(s, {"p_en", "p_ul", "p_cov"}, true);
  auto res = run_points(s, pts, metrics, false, true);
  bool coupled = s.mode == "coupled";
  Table t;
  t.columns = {"axis", "value", "scenario", "metric", "sim_mean", "ci95", "n_trials", "seed"};
  if (coupled) t.columns.push_back("mode");
  t.columns.push_back("error");
  bool failed = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    failed = failed || !res[i].error.empty();
    for (const auto& m : metrics) {
      std::vector<Cell> row = {pts[i].axis, pts[i].value, pts[i].scenario, m};
      if (res[i].error.empty()) {
        const MetricEstimate& e = sim_metric(res[i].sim, m);
        row.insert(row.end(), {e.mean, e.ci95_halfwidth, static_cast<long long>(e.n_trials)});
      } else {
        row.insert(row.end(), {NAN, NAN, static_cast<long long>(0)});
      }
      row.push_back(s.seed);
      if (coupled) row.push_back(std::string("coupled"));
      row.push_back(res[i].error);
      t.rows.push_back(std::move(row));
    }
  }
  emit(t, s, out);
  return failed ? kExitNumeric : kExitOk;
}

int cmd_compare(const Settings& s, std::ostream& out) {
  auto pts = build_points(s);
  auto metrics = requested_metrics(s, {"p_en", "p_ul", "p_cov"}, true);
  auto res = run_points(s, pts, metrics, true, true);
  bool coupled = s.mode == "coupled";
  Table t;
  t.columns = {"axis", "value", "scenario", "metric", "analytic", "sim_mean", "ci95", "abs_diff", "n_trials", "seed"};
  if (coupled) t.columns.push_back("mode");
  t.columns.push_back("error");
  bool failed = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    failed = failed || !res[i].error.empty();
    for (const auto& m : metrics) {
      std::vector<Cell> row = {pts[i].axis, pts[i].value, pts[i].scenario, m};
      if (res[i].error.empty()) {
        const MetricEstimate& e = sim_metric(res[i].sim, m);
        double a = res[i].analytic[m];
        row.insert(row.end(), {a, e.mean, e.ci95_halfwidth, std::fabs(a - e.mean), static_cast<long long>(e.n_trials)});
      } else {
        row.insert(row.end(), {NAN, NAN, NAN, NAN, static_cast<long long>(0)});
      }
      row.push_back(s.seed);
      if (coupled) row.push_back(std::string("coupled"));
      row.push_back(res[i].error);
      t.rows.push_back(std::move(row));
    }
  }
  emit(t, s, out);
  return failed ? kExitNumeric : kExitOk;
}

void write_report(const FigureReport& r, const std::string& format, std::ostream& os) {
  if (format == "jsonl") {
    for (const auto& pt : r.points) {
      nlohmann::ordered_json o = {{"type", "point"},
                                  {"figure", r.id},
                                  {"series", pt.series},
                                  {"quantity", pt.quantity},
                                  {r.axis, cell_json(pt.x)},
                                  {"analytic", cell_json(pt.analytic)},
                                  {"simulated", cell_json(pt.simulated)},
                                  {"ci95", cell_json(pt.ci95)},
                                  {"abs_diff", cell_json(std::fabs(pt.analytic - pt.simulated))}};
      os << o.dump() << '\n';
    }
    for (const auto& c : r.checks) {
      nlohmann::ordered_json o = {
          {"type", "check"}, {"figure", r.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
      os << o.dump() << '\n';
    }
    os << nlohmann::ordered_json{{"type", "summary"}, {"figure", r.id}, {"pass", r.pass()}}.dump() << '\n';
    return;
  }
  Table t;
  t.columns = {"figure", "series", "quantity", r.axis, "analytic", "simulated", "ci95", "abs_diff"};
  for (const auto& pt : r.points)
    t.rows.push_back({r.id, pt.series, pt.quantity, pt.x, pt.analytic, pt.simulated, pt.ci95,
                      std::fabs(pt.analytic - pt.simulated)});
  write_table(t, "csv", os);
  os << '\n';
  int failed = 0;
  for (const auto& c : r.checks) {
    failed += !c.pass;
    os << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
  }
  os << r.id << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.checks.size() - failed << " of "
     << r.checks.size() << " checks)\n";
}

int cmd_validate(const Settings& s, std::ostream& out) {
  NetworkParams base = base_params(s);
  std::vector<std::string> ids;
  if (s.figure == "all") {
    ids = figure_ids();
  } else {
    auto known = figure_ids();
    if (std::find(known.begin(), known.end(), s.figure) == known.end())
      throw UsageError("unknown figure '" + s.figure + "'");
    ids = {s.figure};
  }
  FigureOptions fo;
  fo.trials = s.trials;
  fo.seed = s.seed;
  fo.simulate = !s.no_sim;
  fo.threads = s.threads;
  std::ofstream file;
  std::ostream* os = &out;
  if (!s.out.empty()) {
    file.open(s.out, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + s.out + "'");
    os = &file;
  }
  bool ok = true;
  for (const auto& id : ids) {
    FigureReport r = run_figure(id, base, fo);
    write_report(r, s.format, *os);
    ok = ok && r.pass();
  }
  return ok ? kExitOk : kExitValidation;
}

void add_common(CLI::App* sub, Settings& s) {
  sub->add_option("--config", s.config, "Parameter file (key = value)");
  sub->add_option("--out", s.out, "Write output to this path");
  sub->add_option("--format", s.format, "csv or jsonl");
  sub->add_option("--threads", s.threads, "Worker threads, 0 for all cores");
}

void add_sweep(CLI::App* sub, Settings& s) {
  sub->add_option("--sweep", s.sweep, "axis=start:stop:step over a parameter");
  sub->add_option("--scenario", s.scenarios, "Comma-separated scenarios: baseline, no-irs, regular, key=value");
  sub->add_option("--metrics", s.metrics, "Comma-separated metrics: p_en,p_ul,p_cov,nu,ehe,ee,mean_s_ul,mean_i");
}

void add_analysis(CLI::App* sub, Settings& s) {
  sub->add_flag("--literal-sdr", s.literal_sdr, "Route P{S_dr > C} through the S_id transform");
  sub->add_option("--interferer-base", s.interferer_base, "Density thinned into interferers: bs or device");
}

void add_sim(CLI::App* sub, Settings& s) {
  sub->add_option("--trials", s.trials, "Monte Carlo trials per point");
  sub->add_option("--seed", s.seed, "Master seed");
  sub->add_option("--mode", s.mode, "coupled or decoupled");
  sub->add_option("--sampling", s.sampling, "exact or approximate channel sampling");
  sub->add_option("--geometry", s.geometry, "approximated or actual IRS-BS distances");
  sub->add_option("--layout", s.layout, "palm or shared interfering cells");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"IRS-assisted RF-powered IoT network analysis and simulation"};
  app.require_subcommand(1);
  Settings s;
  auto* analyze = app.add_subcommand("analyze", "Analytic metrics over a sweep");
  add_common(analyze, s);
  add_sweep(analyze, s);
  add_analysis(analyze, s);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates over a sweep");
  add_common(simulate, s);
  add_sweep(simulate, s);
  add_sim(simulate, s);
  auto* compare = app.add_subcommand("compare", "Analytic and simulated metrics side by side");
  add_common(compare, s);
  add_sweep(compare, s);
  add_analysis(compare, s);
  add_sim(compare, s);
  auto* validate_cmd = app.add_subcommand("validate", "Check a figure preset against its claims");
  add_common(validate_cmd, s);
  validate_cmd->add_option("figure", s.figure, "fig2 ... fig10, or all")->required();
  validate_cmd->add_option("--trials", s.trials, "Monte Carlo trials per point");
  validate_cmd->add_option("--seed", s.seed, "Master seed");
  validate_cmd->add_flag("--no-sim", s.no_sim, "Skip the simulated points");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  try {
    check_choices(s);
    if (analyze->parsed()) return cmd_analyze(s, out);
    if (simulate->parsed()) return cmd_simulate(s, out);
    if (compare->parsed()) return cmd_compare(s, out);
    return cmd_validate(s, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace irswpcn
