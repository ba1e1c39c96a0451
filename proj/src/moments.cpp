#include "irswpcn/moments.hpp"

#include <cmath>

#include "irswpcn/channel.hpp"
#include "irswpcn/quadrature.hpp"

namespace irswpcn {

namespace {

constexpr double kQ = 1.0 - M_PI * M_PI / 16.0;

// E over d0 ~ nearest IRS truncated to [0, D] and x0 ~ nearest BS, by
// tensor Gauss-Legendre in CDF coordinates.
template <class F>
double geometry_average(const NetworkParams& p, F&& fn, int nd = 48, int nx = 64) {
  const GaussRule& rd = gauss_legendre(nd);
  const GaussRule& rx = gauss_legendre(nx);
  double fd = nearest_cdf(p.lambda_i, p.d_local);
  double total = 0.0;
  for (int i = 0; i < nd; ++i) {
    double u = 0.5 * (rd.x[i] + 1.0) * fd;
    double d0 = std::sqrt(-std::log1p(-u) / (M_PI * p.lambda_i));
    double inner = 0.0;
    for (int j = 0; j < nx; ++j) {
      double v = 0.5 * (rx.x[j] + 1.0);
      double x0 = std::sqrt(-std::log1p(-v) / (M_PI * p.lambda_b));
      inner += 0.5 * rx.w[j] * fn(CondGeometry{d0, x0});
    }
    total += 0.5 * rd.w[i] * inner;
  }
  return total;
}

}  // namespace

double e_s1(double d0, const NetworkParams& p) {
  double a = p.alpha;
  double hi2 = p.h_i * p.h_i;
  return 2.0 * M_PI * p.lambda_i * beta(p) / (a - 2.0) *
         (std::pow(d0 * d0 + hi2, 1.0 - a / 2.0) - std::pow(p.d_local * p.d_local + hi2, 1.0 - a / 2.0));
}

double e_s2(double d0, const NetworkParams& p) {
  double a = p.alpha, b = beta(p);
  double hi2 = p.h_i * p.h_i;
  return M_PI * p.lambda_i * b * b / (a - 1.0) *
         (std::pow(d0 * d0 + hi2, 1.0 - a) - std::pow(p.d_local * p.d_local + hi2, 1.0 - a));
}

double e_s3(double d0, const NetworkParams& p) {
  double s1 = e_s1(d0, p);
  return s1 * s1 + e_s2(d0, p);
}

double upsilon(double d0, const NetworkParams& p) { return 1.0 + p.n_elems * e_s1(d0, p); }

double direct_gain(double x0, const NetworkParams& p) {
  return gain_from_d2(beta(p), p.alpha, x0 * x0 + p.h_b * p.h_b);
}

double ul_tx_power(double x0, const NetworkParams& p) {
  return p.rho * std::pow(x0 * x0 + p.h_b * p.h_b, p.eps * p.alpha / 2.0);
}

CompositeMoments composite_moments(const CondGeometry& cond, const NetworkParams& p) {
  double n = p.n_elems;
  double gd = direct_gain(cond.x0, p);
  double gr = gain_from_d2(beta(p), p.alpha, cond.d0 * cond.d0 + p.h_i * p.h_i);
  double g = gsc(n);
  double sg = std::sqrt(gr);
  CompositeMoments c;
  c.a1_2 = gd * (1.0 + g * gr + n * M_PI / 4.0 * std::sqrt(M_PI * gr));
  double n2 = n * n, n3 = n2 * n, n4 = n3 * n;
  double pi = M_PI;
  c.a1_4 = gd * gd *
           (2.0 + 0.75 * std::pow(pi, 1.5) * n * sg + 6.0 * g * gr +
            2.0 * std::sqrt(pi) * (pi * pi * pi * n3 / 64.0 + 3.0 * pi * n2 * kQ / 4.0) * gr * sg +
            (pi * pi * pi * pi * n4 / 256.0 + 3.0 * pi * pi * n3 * kQ / 8.0 + 3.0 * n2 * kQ * kQ) * gr * gr);
  c.a2_2 = n * gd * e_s1(cond.d0, p);
  c.a2_4 = 2.0 * n2 * gd * gd * e_s3(cond.d0, p);
  return c;
}

namespace {
SignalMoments assemble(const CompositeMoments& c, double power, Stage stage) {
  SignalMoments m;
  m.m1 = power * (c.a1_2 + c.a2_2);
  m.m2 = power * power * (c.a1_4 + c.a2_4 + 4.0 * c.a1_2 * c.a2_2);
  m.which_stage = stage;
  return m;
}
}  // namespace

SignalMoments sdr_moments(const CondGeometry& cond, const NetworkParams& p) {
  return assemble(composite_moments(cond, p), p.p_t, Stage::charging);
}

SignalMoments sul_moments(const CondGeometry& cond, const NetworkParams& p) {
  return assemble(composite_moments(cond, p), ul_tx_power(cond.x0, p), Stage::uplink);
}

GammaFit gamma_fit(const SignalMoments& m) {
  double var = m.m2 - m.m1 * m.m1;
  if (!(m.m1 > 0.0) || !(var > 1e-13 * m.m1 * m.m1))
    throw DegenerateMoments("second moment does not exceed the squared mean");
  GammaFit g;
  g.mean = m.m1;
  g.variance = var;
  g.k = m.m1 * m.m1 / var;
  g.theta = var / m.m1;
  return g;
}

double shape_at(double d0, const NetworkParams& p) {
  return gamma_fit(sdr_moments(CondGeometry{d0, 0.0}, p)).k;
}

double mean_sid(double x0, const NetworkParams& p) {
  double a = p.alpha;
  return 2.0 * M_PI * p.lambda_b * beta(p) * upsilon(0.0, p) * p.p_t /
         ((a - 2.0) * std::pow(x0 * x0 + p.h_b * p.h_b, a / 2.0 - 1.0));
}

double mean_interference(const NetworkParams& p, double lambda_u_prime) {
  if (lambda_u_prime <= 0.0) return 0.0;
  double a = p.alpha / 2.0;
  double h2 = p.h_b * p.h_b;
  // inner y-integral done in closed form; D integrated against its Rayleigh law
  auto f = [&](double z) {
    double d2 = z / (M_PI * p.lambda_u);
    double t0 = d2 + h2;
    return std::exp(-z) * std::pow(t0, p.eps * a) * std::pow(t0, 1.0 - a) / (2.0 * (a - 1.0));
  };
  double ei = integrate_to_infinity(f, 0.0, 0.0, 1e-10).value;
  return upsilon(0.0, p) * 2.0 * M_PI * lambda_u_prime * p.rho * beta(p) * ei;
}

double mean_sul(const NetworkParams& p) {
  return geometry_average(p, [&](const CondGeometry& c) { return sul_moments(c, p).m1; });
}

}  // namespace irswpcn
