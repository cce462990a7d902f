#pragma once

#include <span>
#include <string>
#include <vector>

namespace sphu {

/// Real polynomial in the degree variable l, stored with ascending
/// coefficients a_0 .. a_nu. The leading coefficient is always positive.
class Polynomial {
 public:
  explicit Polynomial(std::vector<double> ascending);

  double operator()(double x) const noexcept;
  /// q(x + 1) - q(x), evaluated from pre-expanded coefficients so that the
  /// difference carries no cancellation.
  double forward_difference(double x) const noexcept;

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double leading() const noexcept { return coeffs_.back(); }
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  std::string to_string() const;

  bool operator==(const Polynomial&) const = default;

 private:
  std::vector<double> coeffs_;
  std::vector<double> difference_;
};

/// Checks the conditions placed on the exponent polynomial of a wavelet
/// family: degree >= 1, q(l) > 0 and q(l + 1) > q(l) for every integer
/// l >= 1. Throws ValidationError naming the violated condition.
void validate_exponent_polynomial(const Polynomial& q);

}  // namespace sphu
