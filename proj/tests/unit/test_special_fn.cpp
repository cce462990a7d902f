#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "sphu/errors.hpp"
#include "sphu/special_fn.hpp"

using namespace sphu;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

using Big = boost::multiprecision::cpp_bin_float_50;

// C_l^lambda(t) from its explicit finite sum, independent of the recurrence.
// The sum alternates and cancels heavily, hence the 50-digit arithmetic.
double explicit_gegenbauer(int l, double lam, double t) {
  Big sum = 0;
  for (int k = 0; 2 * k <= l; ++k) {
    const Big term = boost::multiprecision::tgamma(Big(l - k) + lam) /
                     (boost::multiprecision::tgamma(Big(lam)) * boost::multiprecision::tgamma(Big(k + 1)) *
                      boost::multiprecision::tgamma(Big(l - 2 * k + 1)));
    const Big power = boost::multiprecision::pow(Big(2) * Big(t), l - 2 * k);
    sum += ((k % 2) ? -term : term) * power;
  }
  return static_cast<double>(sum);
}

double exact_binomial(int top, int k) {
  long double b = 1.0L;
  for (int i = 1; i <= k; ++i) {
    b = b * (top - k + i) / i;
  }
  return static_cast<double>(b);
}

}  // namespace

TEST_CASE("order validation") {
  CHECK(GegenbauerOrder::for_sphere(2).value() == 0.5);
  CHECK(GegenbauerOrder::for_sphere(5).value() == 2.0);
  CHECK(GegenbauerOrder(1.5).sphere_dimension() == 4.0);
  CHECK_THROWS_AS(GegenbauerOrder(0.25), DomainError);
  CHECK_THROWS_AS(GegenbauerOrder(0.0), DomainError);
  CHECK_THROWS_AS(GegenbauerOrder(std::nan("")), DomainError);
  CHECK_THROWS_AS(GegenbauerOrder::for_sphere(1), ValidationError);
}

TEST_CASE("log_gamma") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rel(log_gamma(5.0), std::log(24.0)) < 1e-14);
  CHECK(rel(log_gamma(0.5), std::log(std::sqrt(pi))) < 1e-14);
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-2.5), DomainError);

  for (double x = 0.5; x < 1e6; x *= 1.37) {
    const double ref = std::lgamma(x);
    if (std::fabs(ref) > 1e-3) {
      CHECK(rel(log_gamma(x), ref) < 1e-13);
    }
  }
}

TEST_CASE("log_gen_binomial examples") {
  CHECK(std::fabs(log_gen_binomial(3, GegenbauerOrder(0.5), -1)) < 1e-15);
  CHECK(rel(log_gen_binomial(4, GegenbauerOrder(1.0), -1), std::log(5.0)) < 1e-14);
  CHECK(rel(log_gen_binomial(2, GegenbauerOrder(1.5), 0), std::log(10.0)) < 1e-14);
  CHECK(log_gen_binomial(0, GegenbauerOrder(2.0), 0) == 0.0);
}

TEST_CASE("log_gen_binomial matches integer binomials") {
  for (int twice_lambda = 1; twice_lambda <= 6; ++twice_lambda) {
    const GegenbauerOrder lam(twice_lambda / 2.0);
    for (int shift : {-1, 0}) {
      for (int l = 0; l <= 60; ++l) {
        const double expected = exact_binomial(l + twice_lambda + shift, l);
        CHECK(rel(std::exp(log_gen_binomial(l, lam, shift)), expected) < 1e-12);
      }
    }
  }
}

TEST_CASE("gegenbauer examples") {
  CHECK(gegenbauer(0, GegenbauerOrder(1.0), 0.3) == 1.0);
  CHECK(gegenbauer(1, GegenbauerOrder(2.0), 0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(gegenbauer(2, GegenbauerOrder(1.0), 0.5)) < 1e-15);
  CHECK_THROWS_AS(gegenbauer(3, GegenbauerOrder(1.0), 1.5), DomainError);
  CHECK_THROWS_AS(gegenbauer(3, GegenbauerOrder(1.0), -1.0001), DomainError);
}

TEST_CASE("recurrence agrees with the explicit sum") {
  for (double lam : {0.5, 1.0, 1.5, 2.0, 3.5}) {
    for (double t : {-0.95, -0.4, 0.0, 0.3, 0.77, 1.0}) {
      for (int l = 0; l <= 30; ++l) {
        const double got = gegenbauer(l, GegenbauerOrder(lam), t);
        const double want = explicit_gegenbauer(l, lam, t);
        // Scale by C_l(1), the largest value on [-1, 1], so zeros of C_l do not
        // inflate the relative error.
        const double size = std::exp(log_gen_binomial(l, GegenbauerOrder(lam), -1));
        CHECK(std::fabs(got - want) <= 1e-13 * size);
      }
    }
  }
}

TEST_CASE("generating function") {
  const double r = 0.3;
  for (double lam : {0.5, 1.0, 1.5, 2.0}) {
    for (double t : {-0.9, 0.0, 0.7}) {
      std::vector<double> c(61);
      gegenbauer_sequence(GegenbauerOrder(lam), t, c);
      double sum = 0.0;
      for (int l = 60; l >= 0; --l) {
        sum = sum * r + c[l];
      }
      CHECK(rel(sum, std::pow(1.0 - 2.0 * t * r + r * r, -lam)) < 1e-10);
    }
  }
}

TEST_CASE("sequence matches single evaluation") {
  std::vector<double> c(40);
  gegenbauer_sequence(GegenbauerOrder(1.5), 0.42, c);
  for (int l = 0; l < 40; ++l) {
    CHECK(c[l] == gegenbauer(l, GegenbauerOrder(1.5), 0.42));
  }
}

TEST_CASE("parity") {
  for (double lam : {0.5, 1.0, 2.5}) {
    for (int i = 0; i <= 100; ++i) {
      const double t = -1.0 + 2.0 * i / 100.0;
      for (int l = 0; l <= 50; ++l) {
        const double a = gegenbauer(l, GegenbauerOrder(lam), t);
        const double b = gegenbauer(l, GegenbauerOrder(lam), -t);
        const double expected = (l % 2) ? -a : a;
        if (expected == 0.0) {
          CHECK(b == 0.0);
        } else {
          CHECK(std::signbit(b) == std::signbit(expected));
          CHECK(rel(b, expected) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("theta derivative") {
  CHECK(gegenbauer_theta_derivative(1, GegenbauerOrder(0.5), pi / 2) ==
        doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(gegenbauer_theta_derivative(7, GegenbauerOrder(1.5), 0.0) == 0.0);
  CHECK(gegenbauer_theta_derivative(0, GegenbauerOrder(1.0), 0.4) == 0.0);

  const double h = 1e-6;
  for (double lam : {0.5, 1.0, 2.0}) {
    for (int l = 1; l <= 10; ++l) {
      for (double theta : {0.1, pi / 4, 1.3, 2.0, 3.0}) {
        const double fd = (gegenbauer(l, GegenbauerOrder(lam), std::cos(theta + h)) -
                           gegenbauer(l, GegenbauerOrder(lam), std::cos(theta - h))) /
                          (2 * h);
        CHECK(std::fabs(gegenbauer_theta_derivative(l, GegenbauerOrder(lam), theta) - fd) < 1e-6);
      }
    }
  }
}

TEST_CASE("norm examples") {
  CHECK(rel(gegenbauer_norm(0, GegenbauerOrder(0.5)), 2.0) < 1e-14);
  CHECK(rel(gegenbauer_norm(1, GegenbauerOrder(0.5)), 2.0 / 3.0) < 1e-14);
  CHECK(rel(gegenbauer_norm(0, GegenbauerOrder(1.0)), pi / 2) < 1e-14);
  CHECK(rel(std::exp(log_gegenbauer_norm(9, GegenbauerOrder(1.5))), gegenbauer_norm(9, GegenbauerOrder(1.5))) <
        1e-13);
}

TEST_CASE("weighted orthogonality") {
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double lam : {0.5, 1.0, 1.5}) {
    const GegenbauerOrder order(lam);
    for (int j = 0; j <= 20; j += 1) {
      for (int k = j; k <= 20; k += 3) {
        auto f = [&](double t) {
          return gegenbauer(j, order, t) * gegenbauer(k, order, t) * std::pow(1.0 - t * t, lam - 0.5);
        };
        const double v = integrator.integrate(f, -1.0, 1.0);
        if (j == k) {
          CHECK(rel(v, gegenbauer_norm(k, order)) < 1e-9);
        } else {
          CHECK(std::fabs(v) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("sphere measure") {
  CHECK(rel(sphere_measure(2), 4 * pi) < 1e-14);
  CHECK(rel(sphere_measure(3), 2 * pi * pi) < 1e-14);
  CHECK(rel(sphere_measure(4), 8 * pi * pi / 3) < 1e-14);
}
