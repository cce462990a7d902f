#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sphu/polynomial.hpp"
#include "sphu/variance_engine.hpp"
#include "sphu/wavelet_families.hpp"

namespace sphu {

/// Least-squares line through (ln x, ln y).
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

ExponentFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

/// sum_{l >= k} l^d exp(-rho l^nu).
double power_sum(double d, double nu, double rho, std::int64_t k = 0);

/// sum_{l >= 1} l^p Q(l)^d exp(-rho q(l)). A constant Q gives the plain
/// power-times-exponential sum.
double poly_sum(double p, const Polynomial& Q, double d, const Polynomial& q, double rho);

/// Gamma((p + r d + 1)/nu) / nu * (rho a_nu)^(-(p + r d + 1)/nu): the
/// small-rho leading term of poly_sum for Q of degree r with unit leading
/// coefficient and q of degree nu with leading coefficient a_nu.
double leading_term(double p, int r, double d, int nu, double rho, double a_nu);

/// Descending grid of `count` log-spaced points from `hi` down to `lo`.
std::vector<double> log_grid(double hi, double lo, int count);
/// 13 points from 1e-2 down to 1e-6.
std::vector<double> default_rho_grid();
/// Grid on which the lemma checks run for exponent degree nu:
/// 10^(-3 nu) down to 10^(-3 nu - 3).
std::vector<double> lemma_rho_grid(int nu, int count = 10);

enum class LemmaKind { PowerSum, PolynomialExponent, PolynomialProduct };

/// Accepts "power-sum", "polynomial-exponent", "polynomial-product" and the
/// numeric aliases "3.1", "3.2", "3.3".
LemmaKind parse_lemma_kind(const std::string& id);
std::string lemma_name(LemmaKind kind);

struct LemmaParams {
  LemmaKind kind = LemmaKind::PowerSum;
  double d = 1.0;
  double p = 0.0;
  /// PowerSum only: exponent nu of l^nu (real) and start index k.
  double nu = 1.0;
  std::int64_t k = 0;
  /// PolynomialExponent and PolynomialProduct.
  std::optional<Polynomial> q;
  /// PolynomialProduct only.
  std::optional<Polynomial> Q;
};

struct LemmaRow {
  double rho;
  double sum;
  double leading;
  double rel_error;
};

struct LemmaReport {
  LemmaKind kind;
  std::vector<LemmaRow> rows;
  ExponentFit fit;
  double expected_slope;
  double slope_tol;  // relative
  bool slope_ok;
  /// Decay of the relative error of the leading term; unresolved when too
  /// few points sit above the rounding floor.
  std::optional<ExponentFit> correction;
  double correction_min_slope;
  bool correction_ok;
  bool passed() const { return slope_ok && correction_ok; }
};

/// Sums on the grid, fits the exponent and checks it against the leading
/// term. Throws InconclusiveFitError when r^2 < 0.999.
LemmaReport lemma_check(const LemmaParams& params, std::span<const double> rho_grid,
                        double slope_tol = 0.01);

struct PointError {
  std::string kind;
  std::string message;
};

struct SweepResult {
  std::vector<double> rho_grid;
  std::vector<std::optional<VarianceReport>> reports;
  std::vector<std::optional<PointError>> errors;
  std::string family_id;
  bool partial() const;
};

/// One report per grid point. Points are claimed by `threads` workers
/// (0 = hardware concurrency) but results are stored by grid index, so the
/// output does not depend on scheduling.
SweepResult sweep(const Family& family, std::span<const double> rho_grid,
                  const EngineOptions& options = {}, unsigned threads = 0);

enum class RateVerdict { Bounded, Pass, Fail, Inconclusive };
std::string to_string(RateVerdict v);

struct RateCheck {
  RateVerdict verdict = RateVerdict::Inconclusive;
  std::optional<ExponentFit> fit;
  double bound_slope = 0.0;  // -a / (2 nu)
  double slope_tol = 0.05;
  double variation = 0.0;  // of U over the small-rho half of the grid
  double variation_tol = 0.05;
  std::string diagnostics;
};

/// Total variation sum |y_{i+1} - y_i| relative to the last value.
double relative_variation(std::span<const double> ys);
/// relative_variation over the trailing half of ys.
double tail_variation(std::span<const double> ys);

/// One-sided check of U(rho) against rho^(-a/(2 nu)).
RateCheck rate_check(const SweepResult& result, const Family& family, double slope_tol = 0.05,
                     double variation_tol = 0.05);

}  // namespace sphu
