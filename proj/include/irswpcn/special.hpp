#pragma once

#include <complex>
#include <vector>

namespace irswpcn {

// Gauss 2F1(a, b; c; z) restricted to a = 1, c = 1 + b, 0 < b < 1, z <= 0.
// Other parameters raise std::domain_error.
double hyp2f1(double a, double b, double c, double z);

// Non-normalized incomplete beta B_v(p0 + j, q) for j = 0..count-1, where
// v = w / (1 + w). Passing w rather than v keeps 1 - v exact for large w.
std::vector<double> incomplete_beta_ladder(double p0, double q, double w, int count);

// The shot-noise kernel shared by the charging and interference fields:
//   Ucore(c, T0) = 1/2 * integral_{T0}^inf u / (1 + u) dt,  u = c t^(-a)
// with a = alpha / 2 > 1.
double ucore(double c, double t0, double a);
std::complex<double> ucore(std::complex<double> c, double t0, double a);

// Scaled Taylor coefficients e_n = c^n d^n/dc^n Ucore / n!, n = 0..nmax.
// They stay bounded for any c, which keeps high-order series finite.
void ucore_scaled(double c, double t0, double a, int nmax, std::vector<double>& out);

}  // namespace irswpcn
