#include "irswpcn/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace irswpcn {

namespace {

struct Field {
  const char* name;
  std::function<double&(NetworkParams&)> real;  // null for integer fields
  std::function<int&(NetworkParams&)> integer;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"lambda_b", [](NetworkParams& p) -> double& { return p.lambda_b; }, nullptr},
      {"lambda_i", [](NetworkParams& p) -> double& { return p.lambda_i; }, nullptr},
      {"lambda_u", [](NetworkParams& p) -> double& { return p.lambda_u; }, nullptr},
      {"h_b", [](NetworkParams& p) -> double& { return p.h_b; }, nullptr},
      {"h_i", [](NetworkParams& p) -> double& { return p.h_i; }, nullptr},
      {"alpha", [](NetworkParams& p) -> double& { return p.alpha; }, nullptr},
      {"p_t", [](NetworkParams& p) -> double& { return p.p_t; }, nullptr},
      {"n_elems", nullptr, [](NetworkParams& p) -> int& { return p.n_elems; }},
      {"f_c", [](NetworkParams& p) -> double& { return p.f_c; }, nullptr},
      {"noise", [](NetworkParams& p) -> double& { return p.noise; }, nullptr},
      {"d_local", [](NetworkParams& p) -> double& { return p.d_local; }, nullptr},
      {"rho", [](NetworkParams& p) -> double& { return p.rho; }, nullptr},
      {"eta", [](NetworkParams& p) -> double& { return p.eta; }, nullptr},
      {"eps", [](NetworkParams& p) -> double& { return p.eps; }, nullptr},
      {"slot", [](NetworkParams& p) -> double& { return p.slot; }, nullptr},
      {"tau", [](NetworkParams& p) -> double& { return p.tau; }, nullptr},
      {"gamma_th", [](NetworkParams& p) -> double& { return p.gamma_th; }, nullptr},
      {"p_cb", [](NetworkParams& p) -> double& { return p.p_cb; }, nullptr},
      {"p_cu", [](NetworkParams& p) -> double& { return p.p_cu; }, nullptr},
      {"eta_b", [](NetworkParams& p) -> double& { return p.eta_b; }, nullptr},
      {"eta_u", [](NetworkParams& p) -> double& { return p.eta_u; }, nullptr},
      {"zeta_en", [](NetworkParams& p) -> double& { return p.zeta_en; }, nullptr},
      {"zeta_ul", [](NetworkParams& p) -> double& { return p.zeta_ul; }, nullptr},
      {"k_tilde", nullptr, [](NetworkParams& p) -> int& { return p.k_tilde; }},
  };
  return table;
}

const Field* find_field(const std::string& name) {
  for (const auto& f : fields())
    if (name == f.name) return &f;
  return nullptr;
}

const std::set<std::string> kDbmFields = {"p_t", "noise", "rho", "p_cb", "p_cu"};
const std::set<std::string> kDbFields = {"gamma_th", "eta", "eta_b", "eta_u"};

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError("invalid number for " + key + ": '" + text + "'");
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string format_exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// Resolves a possibly suffixed key to its base field and converted value.
std::pair<std::string, double> resolve(const std::string& key, const std::string& value) {
  double v = parse_number(key, value);
  if (ends_with(key, "_dbm")) {
    std::string base = key.substr(0, key.size() - 4);
    if (kDbmFields.count(base)) return {base, dbm_to_watt(v)};
  } else if (ends_with(key, "_db")) {
    std::string base = key.substr(0, key.size() - 3);
    if (kDbFields.count(base)) return {base, db_to_linear(v)};
  }
  return {key, v};
}

}  // namespace

double dbm_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double beta(const NetworkParams& p) {
  double r = 4.0 * M_PI * p.f_c / kSpeedOfLight;
  return 1.0 / (r * r);
}

void validate(const NetworkParams& p) {
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
  };
  auto unit = [](const char* key, double v) {
    if (!(v > 0.0 && v <= 1.0)) throw ConfigError(std::string(key) + " must lie in (0, 1]");
  };
  if (!(p.alpha > 2.0)) throw ConfigError("alpha must exceed 2");
  positive("lambda_b", p.lambda_b);
  positive("lambda_i", p.lambda_i);
  positive("lambda_u", p.lambda_u);
  positive("h_b", p.h_b);
  positive("h_i", p.h_i);
  positive("p_t", p.p_t);
  positive("f_c", p.f_c);
  positive("noise", p.noise);
  positive("d_local", p.d_local);
  positive("rho", p.rho);
  positive("slot", p.slot);
  positive("gamma_th", p.gamma_th);
  positive("p_cb", p.p_cb);
  positive("p_cu", p.p_cu);
  positive("zeta_en", p.zeta_en);
  positive("zeta_ul", p.zeta_ul);
  if (p.n_elems < 0) throw ConfigError("n_elems must be nonnegative");
  if (p.k_tilde < 1) throw ConfigError("k_tilde must be at least 1");
  if (!(p.tau > 0.0 && p.tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
  unit("eps", p.eps);
  unit("eta", p.eta);
  unit("eta_b", p.eta_b);
  unit("eta_u", p.eta_u);
}

void set_field(NetworkParams& p, const std::string& key, const std::string& value) {
  if (key == "zeta") {
    double v = parse_number(key, value);
    p.zeta_en = v;
    p.zeta_ul = v;
    return;
  }
  auto [base, v] = resolve(key, value);
  const Field* f = find_field(base);
  if (!f) throw ConfigError("unknown key: " + key);
  if (f->real) {
    f->real(p) = v;
  } else {
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw ConfigError(key + " must be an integer");
    f->integer(p) = static_cast<int>(v);
  }
}

double get_field(const NetworkParams& p, const std::string& key) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown key: " + key);
  auto& q = const_cast<NetworkParams&>(p);
  return f->real ? f->real(q) : static_cast<double>(f->integer(q));
}

std::vector<std::string> field_names() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.name);
  return out;
}

bool is_field(const std::string& key) {
  if (key == "zeta" || find_field(key)) return true;
  if (ends_with(key, "_dbm")) return kDbmFields.count(key.substr(0, key.size() - 4)) > 0;
  if (ends_with(key, "_db")) return kDbFields.count(key.substr(0, key.size() - 3)) > 0;
  return false;
}

NetworkParams load(const std::string& text) {
  NetworkParams p;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  bool lambda_u_given = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (!is_field(key)) throw ConfigError("unknown key: " + key);
    std::string base = resolve(key, value).first;
    if (!seen.insert(base).second) throw ConfigError("duplicate key: " + key);
    if (base == "lambda_u") lambda_u_given = true;
    set_field(p, key, value);
  }
  if (!lambda_u_given) p.lambda_u = p.lambda_b;
  validate(p);
  return p;
}

NetworkParams load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load(ss.str());
}

NetworkParams load_from_environment() {
  const char* path = std::getenv("IRSWPCN_CONFIG");
  if (path && *path) return load_file(path);
  return load("");
}

std::string render(const NetworkParams& p) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.name;
    out += " = ";
    out += format_exact(get_field(p, f.name));
    out += '\n';
  }
  return out;
}

}  // namespace irswpcn
