#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sphu/special_fn.hpp"
#include "sphu/wavelet_families.hpp"

namespace sphu {

/// Finitely supported Gegenbauer expansion f = sum_l coeffs[l] C_l^lambda.
///
/// Coefficients are stored divided by exp(log_scale). Every quantity the
/// library derives from a ZonalFunction is a ratio of quadratic forms in the
/// coefficients, so the scale never enters a result; it exists so that
/// families whose raw coefficients underflow a double stay representable.
class ZonalFunction {
 public:
  ZonalFunction(GegenbauerOrder lambda, std::vector<double> coeffs, double tail_bound = 0.0,
                double log_scale = 0.0);

  GegenbauerOrder lambda() const noexcept { return lambda_; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  std::int64_t truncation_index() const noexcept {
    return static_cast<std::int64_t>(coeffs_.size()) - 1;
  }
  double tail_bound() const noexcept { return tail_bound_; }
  double log_scale() const noexcept { return log_scale_; }

 private:
  GegenbauerOrder lambda_;
  std::vector<double> coeffs_;
  double tail_bound_;
  double log_scale_;
};

struct VarianceReport {
  double var_s = 0.0;
  double var_m = 0.0;
  double u = 0.0;
  std::int64_t trunc_index = 0;
  double tail_bound = 0.0;
  double rho = std::numeric_limits<double>::quiet_NaN();
  std::string family_id;
  double n = 0.0;  // sphere dimension
  /// True when the series tail past a fixed index was summed by
  /// Euler-Maclaurin instead of term by term.
  bool asymptotic_tail = false;
};

/// The four series behind the variances, all on a common scale:
///   mass   = sum lambda/(l+lambda) binom(l+2lambda-1, l) f_l^2
///   axial  = sum binom(l+2lambda, l) 2 lambda^2 f_l f_{l+1} / ((l+lambda)(l+lambda+1))
///   spread = mass - axial, summed as a series of its own
///   energy = sum_{l>=1} l lambda (l+2lambda)/(l+lambda) binom(l+2lambda-1, l) f_l^2
struct SeriesSums {
  double mass = 0.0;
  double axial = 0.0;
  double spread = 0.0;
  double energy = 0.0;
};

struct EngineOptions {
  double truncation_tol = 1e-14;
  std::int64_t max_terms = 10'000'000;
  /// Past this many terms the tail is summed asymptotically (families only).
  std::int64_t direct_limit = std::int64_t{1} << 20;
  bool asymptotic_tail = true;
  double lower_bound_slack = 1e-9;
};

ZonalFunction truncate(const Family& family, double rho, double tol = 1e-14,
                       std::int64_t max_terms = 10'000'000);
/// Finite input: trailing zeros dropped, tail bound 0.
ZonalFunction truncate(GegenbauerOrder lambda, std::vector<double> coeffs);

SeriesSums series_sums(const ZonalFunction& f);

double var_space(const SeriesSums& sums);
double var_space(const ZonalFunction& f);
double var_momentum(const SeriesSums& sums);
double var_momentum(const ZonalFunction& f);

VarianceReport uncertainty(const ZonalFunction& f, double lower_bound_slack = 1e-9);

/// var_S, var_M and U of a family at one scale, summing the series straight
/// from the coefficient formula.
VarianceReport evaluate(const Family& family, double rho, const EngineOptions& options = {});

}  // namespace sphu
