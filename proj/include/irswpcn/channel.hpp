#pragma once

#include <cmath>
#include <complex>

#include "irswpcn/geometry.hpp"

namespace irswpcn {

enum class LinkKind { bs_ue, bs_irs, irs_ue, ue_irs, irs_bs };

struct LinkGain {
  double value = 0.0;
  LinkKind kind = LinkKind::bs_ue;
};

// Mean statistics of the beamformed sum of N double-Rayleigh amplitudes.
struct CascadeStats {
  double mean_amp = 0.0;
  double var_amp = 0.0;
  double mean_power = 0.0;
};

enum class SamplingMode { exact, approximate };

// beta * (horizontal^2 + (h1 - h2)^2)^(-alpha/2)
LinkGain avg_gain(double beta, double alpha, double horizontal, double h1, double h2,
                  LinkKind kind = LinkKind::bs_ue);

// Same with the squared 3-D distance already formed.
inline double gain_from_d2(double beta, double alpha, double d2) {
  return alpha == 4.0 ? beta / (d2 * d2) : beta * std::pow(d2, -alpha / 2.0);
}

double gsc(double n_elems);

CascadeStats beamformed_cascade_stats(LinkGain g_i, LinkGain g_r, int n_elems);

double sample_exponential(Rng& rng);
double sample_normal(Rng& rng);
// CN(0, var)
std::complex<double> sample_cscg(double var, Rng& rng);
// Rayleigh amplitude with E{|h|^2} = mean_power.
double sample_rayleigh_amp(double mean_power, Rng& rng);

// Approximate mode draws the normal approximation truncated at zero.
double sample_beamformed_amp(double g_i, double g_r, int n_elems, SamplingMode mode, Rng& rng);

// Approximate mode draws one CN(0, N g_i g_r); exact mode sums N products
// with independent uniform phases.
std::complex<double> sample_scattered(double g_i, double g_r, int n_elems, SamplingMode mode, Rng& rng);

}  // namespace irswpcn
