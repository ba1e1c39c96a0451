#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <cmath>
#include <complex>

#include "irswpcn/parallel.hpp"
#include "irswpcn/quadrature.hpp"
#include "irswpcn/special.hpp"

using namespace irswpcn;

namespace {

// 2F1(1, b; 1 + b; z) = b * int_0^1 t^(b-1) / (1 - z t) dt, with u = t^b
double hyp_oracle(double b, double z) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double u) { return 1.0 / (1.0 - z * std::pow(u, 1.0 / b)); }, 0.0, 1.0);
}

// 1/2 int_{t0}^inf f(c t^-a) dt by exp-sinh on the shifted half line
double tail_oracle(double t0, const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> es;
  return 0.5 * es.integrate([&](double s) { return f(t0 + s); });
}

}  // namespace

TEST_SUITE("special") {
  TEST_CASE("hyp2f1 arctan identity") {
    CHECK(hyp2f1(1.0, 0.5, 1.5, 0.0) == 1.0);
    CHECK(hyp2f1(1.0, 0.5, 1.5, -1.0) == doctest::Approx(M_PI / 4.0).epsilon(1e-12));
    CHECK(hyp2f1(1.0, 0.5, 1.5, -100.0) == doctest::Approx(0.147113).epsilon(1e-6));
    for (double t : {1e-6, 1e-3, 0.1, 0.5, 0.99, 1.0, 1.5, 2.0, 3.0, 10.0, 100.0, 1e3, 1e4}) {
      double expect = std::atan(std::sqrt(t)) / std::sqrt(t);
      CAPTURE(t);
      CHECK(std::fabs(hyp2f1(1.0, 0.5, 1.5, -t) - expect) / expect < 1e-10);
    }
  }

  TEST_CASE("hyp2f1 other exponents against quadrature") {
    for (double b : {0.2, 2.0 / 3.0, 0.8}) {
      for (double z : {-0.1, -0.5, -0.75, -1.9, -2.1, -10.0, -1e3, -1e6}) {
        CAPTURE(b);
        CAPTURE(z);
        CHECK(hyp2f1(1.0, b, 1.0 + b, z) == doctest::Approx(hyp_oracle(b, z)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("hyp2f1 rejects unsupported parameters") {
    CHECK_THROWS_AS(hyp2f1(2.0, 0.5, 1.5, -1.0), std::domain_error);
    CHECK_THROWS_AS(hyp2f1(1.0, 0.5, 2.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(hyp2f1(1.0, 0.5, 1.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(hyp2f1(1.0, 1.5, 2.5, -1.0), std::domain_error);
  }

  TEST_CASE("incomplete beta ladder") {
    for (double w : {1e-3, 0.3, 1.0, 5.0, 1e4}) {
      double v = w / (1.0 + w);
      auto lad = incomplete_beta_ladder(0.5, 1.5, w, 12);
      REQUIRE(lad.size() == 12);
      for (int j = 0; j < 12; ++j) {
        CAPTURE(w);
        CAPTURE(j);
        CHECK(lad[j] == doctest::Approx(boost::math::beta(0.5 + j, 1.5, v)).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("ucore against its defining integral") {
    for (double a : {1.5, 2.0, 3.0}) {
      for (double c : {1e-6, 1e-2, 1.0, 1e2, 1e4, 1e8}) {
        for (double t0 : {1.0, 100.0, 500.0}) {
          double expect = tail_oracle(t0, [&](double t) {
            double u = c * std::pow(t, -a);
            return u / (1.0 + u);
          });
          CAPTURE(a);
          CAPTURE(c);
          CAPTURE(t0);
          CHECK(ucore(c, t0, a) == doctest::Approx(expect).epsilon(1e-9));
        }
      }
    }
  }

  TEST_CASE("complex ucore against its defining integral") {
    const double a = 2.0, t0 = 500.0;
    for (double re : {1e-2, 10.0, 300.0, 5e3, 1e6})
      for (double im : {-4e3, -10.0, 0.5, 800.0, 2e5}) {
        std::complex<double> c(re, im);
        auto f = [&](double t, bool imag) {
          std::complex<double> u = c * std::pow(t, -a);
          std::complex<double> v = u / (1.0 + u);
          return imag ? v.imag() : v.real();
        };
        double er = tail_oracle(t0, [&](double t) { return f(t, false); });
        double ei = tail_oracle(t0, [&](double t) { return f(t, true); });
        std::complex<double> got = ucore(c, t0, a);
        CAPTURE(c);
        CHECK(std::abs(got - std::complex<double>(er, ei)) <= 1e-9 * std::abs(std::complex<double>(er, ei)) + 1e-14);
      }
  }

  TEST_CASE("scaled ucore derivatives") {
    // c^n/n! d^n/dc^n of u/(1+u) is (-1)^(n+1) u^n/(1+u)^(n+1)
    const double t0 = 500.0;
    for (double a : {1.5, 2.0}) {
      for (double c : {1e-3, 1.0, 5e2, 1e5, 1e9}) {
        std::vector<double> out;
        ucore_scaled(c, t0, a, 60, out);
        REQUIRE(out.size() == 61);
        CHECK(out[0] == doctest::Approx(ucore(c, t0, a)).epsilon(1e-12));
        for (int n : {1, 2, 3, 7, 20, 60}) {
          double expect = tail_oracle(t0, [&](double t) {
            double u = c * std::pow(t, -a);
            return ((n % 2) ? 1.0 : -1.0) * std::exp(n * std::log(u / (1.0 + u)) - std::log1p(u));
          });
          CAPTURE(a);
          CAPTURE(c);
          CAPTURE(n);
          CHECK(out[n] == doctest::Approx(expect).epsilon(1e-8).scale(1e-300));
        }
      }
    }
  }
}

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre rules are exact for polynomials") {
    for (int n : {1, 2, 5, 8, 16, 64}) {
      const GaussRule& r = gauss_legendre(n);
      double sw = 0.0;
      for (double w : r.w) sw += w;
      CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
      int deg = 2 * n - 1;
      double got = gl_integrate([&](double x) { return std::pow(x, deg - 1) * (deg - 1 + 1.0); }, 0.0, 1.0, n);
      CHECK(got == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(&gauss_legendre(16) == &gauss_legendre(16));
  }

  TEST_CASE("adaptive integration") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI).value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9, 1e-9).value ==
          doctest::Approx(2.0).epsilon(1e-8));
    CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0).value ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_to_infinity([](double x) { return 1.0 / (x * x); }, 1.0).value ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12, 1e-12, 50), NumericError);
  }
}

TEST_SUITE("parallel") {
  TEST_CASE("per-index results do not depend on the worker count") {
    std::vector<double> a(1000), b(1000);
    parallel_for(a.size(), [&](std::size_t i) { a[i] = std::sin(double(i)); }, 1);
    parallel_for(b.size(), [&](std::size_t i) { b[i] = std::sin(double(i)); }, 4);
    CHECK(a == b);
  }

  TEST_CASE("exceptions propagate") {
    CHECK_THROWS_AS(parallel_for(
                        100,
                        [](std::size_t i) {
                          if (i == 37) throw std::runtime_error("boom");
                        },
                        3),
                    std::runtime_error);
  }
}
