#include "sphu/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphu/errors.hpp"
#include "sphu/format.hpp"

namespace sphu {

namespace {

// Largest integer l for which the monotonicity of q is verified term by term.
constexpr double kMaxCheckedDegreeIndex = 1.0e6;

double horner(const std::vector<double>& c, double x) noexcept {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

// Coefficients of q(x + 1) - q(x): d_j = sum_{i > j} a_i binom(i, j).
std::vector<double> difference_coefficients(const std::vector<double>& a) {
  const std::size_t n = a.size();
  if (n <= 1) {
    return {0.0};
  }
  std::vector<double> d(n - 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double binom = 1.0;  // binom(i, j) for j = 0
    for (std::size_t j = 0; j < i; ++j) {
      d[j] += a[i] * binom;
      binom = binom * static_cast<double>(i - j) / static_cast<double>(j + 1);
    }
  }
  return d;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      throw ValidationError("polynomial coefficients must be finite");
    }
  }
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) {
    coeffs_.pop_back();
  }
  if (coeffs_.empty()) {
    throw ValidationError("polynomial needs at least one coefficient");
  }
  if (!(coeffs_.back() > 0.0)) {
    throw ValidationError("polynomial leading coefficient must be positive, got " +
                          format_shortest(coeffs_.back()));
  }
  difference_ = difference_coefficients(coeffs_);
}

double Polynomial::operator()(double x) const noexcept { return horner(coeffs_, x); }

double Polynomial::forward_difference(double x) const noexcept { return horner(difference_, x); }

std::string Polynomial::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i > 0) {
      out += ",";
    }
    out += format_shortest(coeffs_[i]);
  }
  return out + "]";
}

void validate_exponent_polynomial(const Polynomial& q) {
  if (q.degree() < 1) {
    throw ValidationError("exponent polynomial q must have degree >= 1");
  }
  if (!(q(1.0) > 0.0)) {
    throw ValidationError("exponent polynomial q must be positive for l >= 1 (q(1) = " +
                          format_shortest(q(1.0)) + ")");
  }
  // The difference polynomial has positive leading coefficient nu * a_nu, so
  // beyond its Cauchy root bound it is positive; below it, check integers.
  const auto c = q.coefficients();
  std::vector<double> d(c.begin(), c.end());
  d = difference_coefficients(d);
  double bound = 1.0;
  for (std::size_t j = 0; j + 1 < d.size(); ++j) {
    bound = std::max(bound, 1.0 + std::fabs(d[j]) / d.back());
  }
  if (bound > kMaxCheckedDegreeIndex) {
    throw ValidationError("cannot certify that q is increasing: root bound " +
                          format_shortest(bound) + " exceeds the checked range");
  }
  const auto last = static_cast<long>(std::floor(bound));
  for (long l = 1; l <= last; ++l) {
    if (!(q.forward_difference(static_cast<double>(l)) > 0.0)) {
      throw ValidationError("exponent polynomial q must be strictly increasing for l >= 1 "
                            "(fails between l = " + std::to_string(l) + " and " +
                            std::to_string(l + 1) + ")");
    }
  }
}

}  // namespace sphu
