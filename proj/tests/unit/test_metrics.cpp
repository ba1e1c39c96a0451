#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "../oracles.hpp"
#include "irswpcn/metrics.hpp"
#include "irswpcn/moments.hpp"

using namespace irswpcn;

namespace {

NetworkParams with_elems(int n) {
  NetworkParams p;
  p.n_elems = n;
  return p;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("charging threshold") {
    NetworkParams p;
    CHECK(c_threshold(0.5, 0.0, p) == doctest::Approx(4.477e-8).epsilon(1e-3));
    double expect = 0.75 * p.rho * std::pow(30.0 * 30.0 + 100.0, 1.6) / (0.25 * p.eta);
    CHECK(c_threshold(0.25, 30.0, p) == doctest::Approx(expect).epsilon(1e-13));
  }

  TEST_CASE("non-integer shape blend") {
    CHECK(noninteger_blend(0.3, 0.9, 4.0, 0.5) == 0.3);
    CHECK(noninteger_blend(0.3, 0.9, 2.5, 0.5) == doctest::Approx(0.3 / 3.0 + 0.9 * 2.0 / 3.0));
    CHECK(noninteger_blend(0.3, 0.9, 2.25, 1.0) == doctest::Approx(0.75 * 0.3 + 0.25 * 0.9));
    CHECK(noninteger_blend(0.3, 0.9, 2.999999, 0.5) == doctest::Approx(0.9).epsilon(1e-5));
  }

  TEST_CASE("geometry average") {
    NetworkParams p;
    auto one = average_over_geometry(p, [](const CondGeometry&) { return std::vector<double>{1.0}; });
    CHECK(one.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.converged);
    auto m = average_over_geometry(p, [](const CondGeometry& c) {
      return std::vector<double>{c.d0 * c.d0, c.x0 * c.x0};
    });
    double z = M_PI * p.lambda_i * p.d_local * p.d_local;
    double ed2 = (1.0 - (1.0 + z) * std::exp(-z)) / (-std::expm1(-z)) / (M_PI * p.lambda_i);
    // squared distances are log-singular at the top of the CDF range
    CHECK(m.values[0] == doctest::Approx(ed2).epsilon(5e-4));
    CHECK(m.values[1] == doctest::Approx(1.0 / (M_PI * p.lambda_b)).epsilon(5e-4));
    AnalysisOptions fine;
    fine.outer_tol = 0.0;
    fine.outer_levels = 6;
    auto r = average_over_geometry(
        p, [](const CondGeometry& c) { return std::vector<double>{c.d0 * c.d0, c.x0 * c.x0}; }, fine);
    CHECK(r.values[0] == doctest::Approx(ed2).epsilon(1e-5));
    CHECK(r.values[1] == doctest::Approx(1.0 / (M_PI * p.lambda_b)).epsilon(1e-5));
  }

  TEST_CASE("energy coverage limits and monotonicity") {
    NetworkParams p;
    CondGeometry c{5.0, 30.0};
    CHECK(energy_coverage_cond(c, 0.0, p).p_en == 0.0);
    CHECK(energy_coverage_cond(c, 1.0, p).p_en == 1.0);
    double prev = 0.0;
    for (double tau = 0.05; tau < 1.0; tau += 0.1) {
      double v = energy_coverage_cond(c, tau, p).p_en;
      CHECK(v >= prev - 1e-9);
      CHECK(v <= 1.0);
      prev = v;
    }
    CHECK(energy_coverage(0.0, p) == 0.0);
    CHECK(energy_coverage(1.0, p) == 1.0);
    double a = energy_coverage(0.2, p), b = energy_coverage(0.5, p), d = energy_coverage(0.8, p);
    CHECK(a < b);
    CHECK(b < d);
  }

  TEST_CASE("conditional energy coverage against element-wise draws") {
    NetworkParams p;
    CondGeometry c{5.0, 30.0};
    const double tau = 0.5, thr = c_threshold(tau, c.x0, p);
    oracle::CompositeChannel ch{beta(p), p.alpha, p.lambda_i, p.d_local, p.h_i, p.n_elems};
    oracle::Sampler s(77);
    double gd = direct_gain(c.x0, p);
    const int reps = 20000;
    const double rmax = 600.0;
    int hit = 0;
    for (int t = 0; t < reps; ++t) {
      double e = p.p_t * ch.power(gd, c.d0, s);
      long n = s.poisson(p.lambda_b * M_PI * (rmax * rmax - c.x0 * c.x0));
      for (long j = 0; j < n; ++j) {
        double r2 = c.x0 * c.x0 + (rmax * rmax - c.x0 * c.x0) * s.uniform();
        e += p.p_t * upsilon(c.d0, p) * beta(p) * std::pow(r2 + p.h_b * p.h_b, -2.0) * s.exponential();
      }
      hit += e >= thr;
    }
    CHECK(energy_coverage_cond(c, tau, p).p_en == doctest::Approx(double(hit) / reps).epsilon(0.05));
  }

  TEST_CASE("noise-limited uplink reduces to the gamma tail") {
    NetworkParams p;
    CondGeometry c{5.0, 30.0};
    GammaFit f = gamma_fit(sul_moments(c, p));
    REQUIRE(f.k > 1.0);
    REQUIRE(f.k < p.k_tilde);
    double x = p.gamma_th * p.noise / f.theta;
    double fl = std::floor(f.k), w = f.k - fl;
    double expect = (1.0 - w) * boost::math::gamma_q(fl, x) + w * boost::math::gamma_q(fl + 1.0, x);
    CHECK(ul_coverage_cond(c, p, 0.0) == doctest::Approx(expect).epsilon(1e-8));
    CHECK(ul_coverage_cond(c, p, 1e-3) < ul_coverage_cond(c, p, 0.0));
  }

  TEST_CASE("regularly powered devices") {
    NetworkParams p;
    AnalysisOptions o;
    o.regularly_powered = true;
    CoverageBreakdown r = overall_coverage(0.5, p, o);
    CHECK(r.p_en == 1.0);
    CHECK(r.p_cov == r.p_ul);
    CHECK(r.lambda_u_prime == p.lambda_b);
    CHECK(r.p_ul == doctest::Approx(ul_coverage(p, p.lambda_b)).epsilon(1e-12));
    CHECK(interferer_density(0.5, p) == 0.5 * p.lambda_b);
    AnalysisOptions dev;
    dev.interferer_base = InterfererBase::device_density;
    NetworkParams q = p;
    q.lambda_u = 2e-3;
    CHECK(interferer_density(0.5, q, dev) == 1e-3);
  }

  TEST_CASE("spatial throughput vanishes at the slot edges") {
    NetworkParams p;
    CHECK(spatial_throughput(0.0, p) == 0.0);
    CHECK(spatial_throughput(1.0, p) == 0.0);
    CoverageBreakdown cov;
    cov.p_cov = 0.5;
    cov.lambda_u_prime = 1e-3;
    CHECK(spatial_throughput(0.25, p, cov) == doctest::Approx(0.75 * 1e-3 * std::log(2.0) * 0.5));
  }

  TEST_CASE("power efficiency") {
    NetworkParams p;
    boost::math::quadrature::exp_sinh<double> es;
    double p0 = es.integrate([&](double z) {
      return std::exp(-z) * p.rho * std::pow(z / (M_PI * p.lambda_b) + p.h_b * p.h_b, p.eps * p.alpha / 2.0);
    });
    CHECK(mean_ue_power(p) == doctest::Approx(p0).epsilon(1e-8));

    CoverageBreakdown cov;
    cov.p_cov = 0.4;
    EfficiencyReport r = power_efficiency(0.5, p, cov);
    CHECK(p.p_cb + p.p_t / p.eta_b == doctest::Approx(201.55).epsilon(1e-4));
    CHECK(r.ehe == doctest::Approx(r.mean_eh * p.lambda_u / (0.5 * p.slot * p.lambda_b * 201.5536)).epsilon(1e-4));
    CHECK(r.ee == doctest::Approx(0.4 / (p.p_cu + p0 / p.eta_u)).epsilon(1e-8));

    NetworkParams q = p;
    q.eta = 0.25;
    CHECK(mean_harvested_energy(0.5, p) == doctest::Approx(2.0 * mean_harvested_energy(0.5, q)).epsilon(1e-12));
    CHECK(mean_harvested_energy(0.6, p) == doctest::Approx(1.2 * mean_harvested_energy(0.5, p)).epsilon(1e-12));
    CHECK(mean_harvested_energy(0.5, with_elems(4000)) > mean_harvested_energy(0.5, with_elems(1000)));
  }

  TEST_CASE("energy efficiency falls with stronger path-loss inversion") {
    NetworkParams a, b;
    a.eps = 0.6;
    b.eps = 1.0;
    CHECK(power_efficiency(0.5, a).ee > power_efficiency(0.5, b).ee);
  }

  TEST_CASE("surface gain on energy coverage") {
    double bare = energy_coverage(0.5, with_elems(0));
    double big = energy_coverage(0.5, with_elems(4000));
    CHECK(big - bare > 0.25);
    CHECK((big - bare) / bare > 0.3);
    CHECK(energy_coverage(0.5, with_elems(1000)) > bare);
  }
}
