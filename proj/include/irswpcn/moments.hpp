#pragma once

#include <stdexcept>
#include <string>

#include "irswpcn/config.hpp"
#include "irswpcn/geometry.hpp"

namespace irswpcn {

enum class Stage { charging, uplink };

struct SignalMoments {
  double m1 = 0.0;
  double m2 = 0.0;
  Stage which_stage = Stage::charging;
};

struct GammaFit {
  double k = 0.0;
  double theta = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

// The fitted signal is effectively deterministic; use the large-shape path.
class DegenerateMoments : public std::runtime_error {
 public:
  explicit DegenerateMoments(const std::string& what) : std::runtime_error(what) {}
};

// Composite-channel power moments without the transmit power factor.
struct CompositeMoments {
  double a1_2 = 0.0;  // E|a1|^2, direct plus beamformed
  double a1_4 = 0.0;
  double a2_2 = 0.0;  // E|a2|^2, scattered field
  double a2_4 = 0.0;
};

double e_s1(double d0, const NetworkParams& p);
double e_s2(double d0, const NetworkParams& p);
double e_s3(double d0, const NetworkParams& p);

// Relative power gain of the scattered paths around a node whose nearest
// IRS sits at d0 (d0 = 0 gives the unconditioned field).
double upsilon(double d0, const NetworkParams& p);

// Direct gain over horizontal distance x0 between a UE and a BS.
double direct_gain(double x0, const NetworkParams& p);

// Fractional power-controlled UE transmit power.
double ul_tx_power(double x0, const NetworkParams& p);

CompositeMoments composite_moments(const CondGeometry& cond, const NetworkParams& p);
SignalMoments sdr_moments(const CondGeometry& cond, const NetworkParams& p);
SignalMoments sul_moments(const CondGeometry& cond, const NetworkParams& p);

GammaFit gamma_fit(const SignalMoments& m);

// Shape of the fit as a function of d0 alone (it does not depend on x0).
double shape_at(double d0, const NetworkParams& p);

double mean_sid(double x0, const NetworkParams& p);
double mean_interference(const NetworkParams& p, double lambda_u_prime);
double mean_sul(const NetworkParams& p);

}  // namespace irswpcn
