#include "sphu/special_fn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "sphu/errors.hpp"

namespace sphu {

GegenbauerOrder::GegenbauerOrder(double lambda) : lambda_(lambda) {
  if (!std::isfinite(lambda) || lambda < 0.5) {
    throw DomainError("Gegenbauer order must be >= 1/2 (sphere dimension n >= 2), got " +
                      std::to_string(lambda));
  }
}

GegenbauerOrder GegenbauerOrder::for_sphere(int n) {
  if (n < 2) {
    throw ValidationError("sphere dimension n must be >= 2, got " + std::to_string(n));
  }
  return GegenbauerOrder(0.5 * (n - 1));
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma requires a positive finite argument");
  }
  return boost::math::lgamma(x);
}

double log_gen_binomial(double l, GegenbauerOrder lambda, int shift) {
  if (shift != -1 && shift != 0) {
    throw DomainError("log_gen_binomial: shift must be -1 or 0");
  }
  if (!(l >= 0.0)) {
    throw DomainError("log_gen_binomial: l must be nonnegative");
  }
  // binom(l + delta, l) = Gamma(l + 1 + delta) / (Gamma(l + 1) Gamma(delta + 1))
  const double delta = 2.0 * lambda.value() + shift;
  if (delta == 0.0 || l == 0.0) {
    return 0.0;
  }
  // tgamma_delta_ratio avoids the cancellation of two large lgamma values.
  return -std::log(boost::math::tgamma_delta_ratio(l + 1.0, delta)) -
         boost::math::lgamma(delta + 1.0);
}

namespace {

void check_argument(double t) {
  if (!(std::fabs(t) <= 1.0)) {
    throw DomainError("Gegenbauer argument must satisfy |t| <= 1");
  }
}

}  // namespace

double gegenbauer(int l, GegenbauerOrder lambda, double t) {
  check_argument(t);
  if (l < 0) {
    throw DomainError("Gegenbauer degree must be nonnegative");
  }
  const double lam = lambda.value();
  double prev = 1.0;
  if (l == 0) {
    return prev;
  }
  double curr = 2.0 * lam * t;
  for (int k = 2; k <= l; ++k) {
    const double next = (2.0 * t * (k + lam - 1.0) * curr - (k + 2.0 * lam - 2.0) * prev) / k;
    prev = curr;
    curr = next;
  }
  return curr;
}

void gegenbauer_sequence(GegenbauerOrder lambda, double t, std::span<double> out) {
  check_argument(t);
  if (out.empty()) {
    return;
  }
  const double lam = lambda.value();
  out[0] = 1.0;
  if (out.size() > 1) {
    out[1] = 2.0 * lam * t;
  }
  for (std::size_t k = 2; k < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    out[k] = (2.0 * t * (kk + lam - 1.0) * out[k - 1] - (kk + 2.0 * lam - 2.0) * out[k - 2]) / kk;
  }
}

double gegenbauer_theta_derivative(int l, GegenbauerOrder lambda, double theta) {
  if (l < 0) {
    throw DomainError("Gegenbauer degree must be nonnegative");
  }
  if (l == 0) {
    return 0.0;
  }
  // dC_l^lambda/dt = 2 lambda C_{l-1}^{lambda+1}(t)
  const double lam = lambda.value();
  return -std::sin(theta) * 2.0 * lam *
         gegenbauer(l - 1, GegenbauerOrder(lam + 1.0), std::cos(theta));
}

double log_gegenbauer_norm(int l, GegenbauerOrder lambda) {
  if (l < 0) {
    throw DomainError("Gegenbauer degree must be nonnegative");
  }
  const double lam = lambda.value();
  return std::log(std::numbers::pi) + (1.0 - 2.0 * lam) * std::numbers::ln2 +
         boost::math::lgamma(l + 2.0 * lam) - boost::math::lgamma(l + 1.0) -
         std::log(l + lam) - 2.0 * boost::math::lgamma(lam);
}

double gegenbauer_norm(int l, GegenbauerOrder lambda) {
  return std::exp(log_gegenbauer_norm(l, lambda));
}

double sphere_measure(int n) {
  const double lam = GegenbauerOrder::for_sphere(n).value();
  return 2.0 * std::pow(std::numbers::pi, lam + 1.0) / std::tgamma(lam + 1.0);
}

}  // namespace sphu
