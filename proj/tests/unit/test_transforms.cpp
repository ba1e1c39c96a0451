#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "../oracles.hpp"
#include "irswpcn/moments.hpp"
#include "irswpcn/special.hpp"
#include "irswpcn/transforms.hpp"

using namespace irswpcn;

namespace {

// Transform of Gamma(m, 1): (1 + s)^-m.
LaplaceFn gamma_transform(double m) {
  LaplaceFn lf;
  lf.exponent = [m](std::complex<double> s) { return -m * std::log(1.0 + s); };
  lf.taylor = [m](double s, int nmax, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(nmax + 1), 0.0);
    out[0] = -m * std::log1p(s);
    for (int j = 1; j <= nmax; ++j) out[j] = m * std::pow(-s / (1.0 + s), j) / j;
  };
  lf.descriptor = "gamma";
  return lf;
}

double u_oracle(double x, double x0, const NetworkParams& p) {
  double t0 = x0 * x0 + p.h_b * p.h_b, c = x * beta(p);
  boost::math::quadrature::exp_sinh<double> es;
  return 0.5 * es.integrate([&](double s) {
    double u = c * std::pow(t0 + s, -p.alpha / 2.0);
    return u / (1.0 + u);
  });
}

}  // namespace

TEST_SUITE("transforms") {
  TEST_CASE("shot-noise field function") {
    NetworkParams p;
    CHECK(u_fn(0.0, 20.0, p) == 0.0);
    CHECK(u_fn(1e-12, 20.0, p) < 1e-12);
    double prev = 0.0;
    for (double x = 1e-6; x <= 1e6; x *= 10.0) {
      double got = u_fn(x, 20.0, p), expect = u_oracle(x, 20.0, p);
      CAPTURE(x);
      CHECK(std::fabs(got - expect) / expect < 1e-6);
      CHECK(got >= prev);
      prev = got;
      CHECK(std::abs(u_fn(std::complex<double>(x, 0.0), 20.0, p) - got) <= 1e-9 * got);
    }
    NetworkParams q;
    q.alpha = 3.0;
    for (double x : {1e-3, 1.0, 1e3, 1e6}) CHECK(u_fn(x, 20.0, q) == doctest::Approx(u_oracle(x, 20.0, q)).epsilon(1e-6));
    auto sc = u_fn_scaled(1e5, 20.0, p, 4);
    CHECK(sc[0] == doctest::Approx(u_fn(1e5, 20.0, p)).epsilon(1e-10));
  }

  TEST_CASE("known inverse pairs") {
    CdfResult e = invert_cdf(gamma_transform(1.0), 1.0);
    CHECK(std::fabs(e.probability - (1.0 - std::exp(-1.0))) < 1e-6);
    CHECK(e.converged);
    CdfResult g = invert_cdf(gamma_transform(3.0), 2.0);
    CHECK(std::fabs(g.probability - 0.323324) < 1e-6);
    for (double x : {0.1, 0.5, 1.0, 3.0, 7.0, 15.0}) {
      double expect = boost::math::gamma_p(3.0, x);
      CHECK(std::fabs(invert_cdf(gamma_transform(3.0), x).probability - expect) < 1e-6);
    }
    double prev = 0.0;
    for (double x = 0.05; x < 20.0; x *= 1.3) {
      double f = invert_cdf(gamma_transform(2.5), x).probability;
      CHECK(f >= prev - 1e-9);
      prev = f;
    }
    CHECK_THROWS_AS(invert_cdf(gamma_transform(1.0), 0.0), std::domain_error);
  }

  TEST_CASE("Erlang survival identity") {
    CHECK(survival_series(laplace_exponential(1.0), 3).value == doctest::Approx(0.919699).epsilon(1e-6));
    for (int k = 1; k <= 20; ++k)
      for (double a : {0.05, 0.7, 1.0, 3.3, 9.0, 25.0}) {
        double expect = boost::math::gamma_q(double(k), a);
        double got = survival_series(laplace_exponential(a), k).value;
        CAPTURE(k);
        CAPTURE(a);
        CHECK(std::fabs(got - expect) <= 1e-9 * expect);
      }
    LaplaceFn g = gamma_transform(2.0);
    CHECK(survival_series(g, 1).value == doctest::Approx(g.eval(1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(survival_series(g, 81), std::domain_error);
    CHECK_THROWS_AS(survival_series(g, 0), std::domain_error);
    CHECK_NOTHROW(survival_series(g, 81, 100));
  }

  TEST_CASE("derivatives from the scaled coefficients") {
    LaplaceFn g = gamma_transform(3.0);
    for (int n = 0; n <= 12; ++n) {
      double s = 0.7;
      double expect = (n % 2 ? -1.0 : 1.0) * std::tgamma(n + 3.0) / 2.0 * std::pow(1.0 + s, -3.0 - n);
      CHECK(g.deriv(s, n) == doctest::Approx(expect).epsilon(1e-11));
    }
  }

  TEST_CASE("affine composition") {
    LaplaceFn base = laplace_exponential(1.0);
    LaplaceFn a = affine(base, 2.0, 0.5, 1.0, "shifted");
    std::complex<double> s(0.3, 1.1);
    CHECK(std::abs(a.eval(s) - std::exp(-2.5 * s)) < 1e-14);
    std::vector<double> t;
    a.taylor(1.0, 3, t);
    CHECK(t[0] == doctest::Approx(-2.5));
    CHECK(t[1] == doctest::Approx(-2.5));
    CHECK(t[2] == 0.0);
    LaplaceFn m = affine(gamma_transform(2.0), 3.0, 0.0, -1.0, "inverse");
    CHECK(m.eval(0.5) == doctest::Approx(std::pow(2.5, 2.0)).epsilon(1e-13));
  }

  TEST_CASE("inter-cell charging transform") {
    NetworkParams p;
    CondGeometry c{5.0, 20.0};
    LaplaceFn l = laplace_sid(c, p);
    CHECK(l.eval(0.0) == 1.0);
    double prev = 1.0;
    for (double s = 1e3; s < 1e12; s *= 3.0) {
      double v = l.eval(s);
      CHECK(v < prev);
      CHECK(l.deriv(s, 1) < 0.0);
      prev = v;
    }
    // slope near the origin is the mean of the field
    double s0 = 1e-7 / mean_sid(c.x0, p);
    CHECK(-l.deriv(s0, 1) == doctest::Approx(mean_sid(c.x0, p) * upsilon(c.d0, p) / upsilon(0.0, p)).epsilon(1e-4));

    // empirical Laplace transform of the shot noise beyond x0
    double sv = 1.0 / mean_sid(c.x0, p);
    oracle::Sampler smp(31);
    const double rmax = 600.0;
    const int reps = 100000;
    double acc = 0.0;
    for (int t = 0; t < reps; ++t) {
      double sid = 0.0;
      long n = smp.poisson(p.lambda_b * M_PI * (rmax * rmax - c.x0 * c.x0));
      for (long j = 0; j < n; ++j) {
        double r2 = c.x0 * c.x0 + (rmax * rmax - c.x0 * c.x0) * smp.uniform();
        sid += p.p_t * upsilon(c.d0, p) * beta(p) * std::pow(r2 + p.h_b * p.h_b, -2.0) * smp.exponential();
      }
      acc += std::exp(-sv * sid);
    }
    CHECK(acc / reps == doctest::Approx(l.eval(sv)).epsilon(0.02));
  }

  TEST_CASE("interference kernel") {
    NetworkParams p;
    InterferenceKernel k(p);
    CHECK(k.value(0.0) == 0.0);
    boost::math::quadrature::exp_sinh<double> es;
    const double a = p.alpha / 2.0, h2 = p.h_b * p.h_b;
    for (double x : {1e2, 1e6, 1e9, 1e12}) {
      double expect = es.integrate([&](double d) {
        double t0 = d * d + h2, w = nearest_pdf(p.lambda_u, d);
        if (w == 0.0) return 0.0;
        return nearest_pdf(p.lambda_u, d) * ucore(x * beta(p) * std::pow(t0, p.eps * a), t0, a);
      });
      CAPTURE(x);
      CHECK(k.value(x) == doctest::Approx(expect).epsilon(1e-6));
      CHECK(std::abs(k.value(std::complex<double>(x, 0.0)) - k.value(x)) <= 1e-9 * k.value(x));
      std::vector<double> sc;
      k.scaled(x, 2, sc);
      CHECK(sc[0] == doctest::Approx(k.value(x)).epsilon(1e-10));
      double h = 1e-4 * x;
      double d1 = (k.value(x + h) - k.value(x - h)) / (2.0 * h);
      CHECK(sc[1] == doctest::Approx(x * d1).epsilon(1e-6));
    }
    CHECK(u_i_fn(1e6, p) == doctest::Approx(k.value(1e6)).epsilon(1e-14));
    LaplaceFn li = laplace_interference(p, 1e-3);
    CHECK(li.eval(0.0) == 1.0);
    CHECK(li.eval(1e15) < 1.0);
  }
}
