#pragma once

#include <compare>
#include <cstdint>
#include <span>

namespace sphu {

/// Order lambda = (n - 1) / 2 of the Gegenbauer polynomials attached to the
/// sphere S^n. Only n >= 2 (lambda >= 1/2) is supported.
class GegenbauerOrder {
 public:
  explicit GegenbauerOrder(double lambda);

  static GegenbauerOrder for_sphere(int n);

  double value() const noexcept { return lambda_; }
  /// n = 2 lambda + 1; the uncertainty product is bounded below by n / 2.
  double sphere_dimension() const noexcept { return 2.0 * lambda_ + 1.0; }

  auto operator<=>(const GegenbauerOrder&) const = default;

 private:
  double lambda_;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln of the generalized binomial binom(l + 2 lambda + shift, l) with
/// shift in {-1, 0}. Accepts real l >= 0 so series summands can be evaluated
/// between integers.
double log_gen_binomial(double l, GegenbauerOrder lambda, int shift);

/// C_l^lambda(t) by the three-term recurrence, |t| <= 1.
double gegenbauer(int l, GegenbauerOrder lambda, double t);

/// Fills out[l] = C_l^lambda(t) for l = 0 .. out.size() - 1.
void gegenbauer_sequence(GegenbauerOrder lambda, double t, std::span<double> out);

/// d/d theta of C_l^lambda(cos theta); zero for l = 0.
double gegenbauer_theta_derivative(int l, GegenbauerOrder lambda, double theta);

/// Squared norm h_l of C_l^lambda under the weight (1 - t^2)^(lambda - 1/2).
double gegenbauer_norm(int l, GegenbauerOrder lambda);
double log_gegenbauer_norm(int l, GegenbauerOrder lambda);

/// Surface measure of S^n, 2 pi^(lambda + 1) / Gamma(lambda + 1).
double sphere_measure(int n);

}  // namespace sphu
