#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace irswpcn {

// Raised for malformed documents, unknown keys and invariant violations.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// All values in linear SI units (W, m, s, Hz).
struct NetworkParams {
  double lambda_b = 1e-3;
  double lambda_i = 1e-2;
  double lambda_u = 1e-3;
  double h_b = 10.0;
  double h_i = 1.0;
  double alpha = 4.0;
  double p_t = 39.810717055349734;  // 46 dBm
  int n_elems = 1000;
  double f_c = 2e9;
  double noise = 1.9952623149688828e-18;  // -147 dBm
  double d_local = 25.0;
  double rho = 1.4125375446227554e-11;  // -78.5 dBm
  double eta = 0.5;
  double eps = 0.8;
  double slot = 0.01;
  double tau = 0.5;
  double gamma_th = 1.0;
  double p_cb = 2.5;
  double p_cu = 0.02;
  double eta_b = 0.2;
  double eta_u = 0.2;
  double zeta_en = 0.5;
  double zeta_ul = 1.0;
  int k_tilde = 80;
};

constexpr double kSpeedOfLight = 3.0e8;

double dbm_to_watt(double dbm);
double db_to_linear(double db);

// Reference gain at unit distance, (4 pi f_c / c)^-2.
double beta(const NetworkParams& p);

// Throws ConfigError naming the first offending key.
void validate(const NetworkParams& p);

// Flat "key = value" document; '#' starts a comment. Missing keys take the
// defaults above, except lambda_u which follows lambda_b when absent.
NetworkParams load(const std::string& text);
NetworkParams load_file(const std::string& path);

// Reads IRSWPCN_CONFIG if set, defaults otherwise.
NetworkParams load_from_environment();

// Canonical document accepted by load(); round-trips exactly.
std::string render(const NetworkParams& p);

// Sets one field from a textual value. Accepts the plain field names and
// the _dbm/_db variants. Throws ConfigError on unknown key or bad number.
void set_field(NetworkParams& p, const std::string& key, const std::string& value);
double get_field(const NetworkParams& p, const std::string& key);

std::vector<std::string> field_names();
bool is_field(const std::string& key);

}  // namespace irswpcn
