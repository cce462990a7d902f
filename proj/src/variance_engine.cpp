#include "sphu/variance_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphu/compensated_sum.hpp"
#include "sphu/errors.hpp"
#include "sphu/format.hpp"
#include "sphu/gauss_legendre.hpp"

namespace sphu {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kCenterOfMassFloor = 1e-300;
constexpr double kClampWindow = 1e-12;

// First degree handed to the Euler-Maclaurin tail.
constexpr double kTailStart = 1024.0;
// Relative change between panel doublings at which the tail integral stops.
constexpr double kTailQuadratureTol = 1e-13;
constexpr int kMaxTailPanels = 1 << 16;

enum : std::size_t { kMass, kAxial, kSpreadDiff, kSpreadDiag, kEnergy, kNumSeries };
using Terms = std::array<double, kNumSeries>;

// Summands of the five series at degree x, scaled by exp(-log_ref).
//
// The space variance needs mass - axial, which is tiny next to either sum
// when f is well localized. It is rewritten by summation by parts as
//   sum_l v_l (f_l - f_{l+1})^2 + sum_l d_l f_l^2
// with v_l = binom(l+2lambda, l) lambda^2 / ((l+lambda)(l+lambda+1)) and
// d_l = binom(l+2lambda-1, l) lambda (lambda-1) / ((l+lambda)((l+lambda)^2-1))
// (d_0 = 1 / (lambda+1)); neither part cancels catastrophically.
Terms summands(double x, double lam, double log_binom, double log_ref, LogCoefficient cur,
               LogCoefficient next, double log_ratio) {
  Terms t{};
  const double xl = x + lam;
  const double half_axial = lam * (x + 2.0 * lam) / (2.0 * xl * (xl + 1.0));
  if (cur.sign != 0) {
    const double p = std::exp(log_binom + 2.0 * cur.log_abs - log_ref);
    t[kMass] = p * lam / xl;
    t[kEnergy] = p * x * lam * (x + 2.0 * lam) / xl;
    t[kSpreadDiag] = (x == 0.0) ? p / (lam + 1.0) : p * lam / xl * (lam - 1.0) / (xl * xl - 1.0);
    if (next.sign != 0) {
      const bool same = cur.sign == next.sign;
      const double ratio = std::exp(log_ratio);
      t[kAxial] = 2.0 * p * half_axial * (same ? ratio : -ratio);
      const double gap = same ? -std::expm1(log_ratio) : 1.0 + ratio;
      t[kSpreadDiff] = p * gap * gap * half_axial;
    } else {
      t[kSpreadDiff] = p * half_axial;
    }
  } else if (next.sign != 0) {
    t[kSpreadDiff] = std::exp(log_binom + 2.0 * next.log_abs - log_ref) * half_axial;
  }
  return t;
}

struct Accumulator {
  std::array<CompensatedSum, kNumSeries> sums;

  void add(const Terms& t) {
    for (std::size_t k = 0; k < kNumSeries; ++k) {
      sums[k] += t[k];
    }
  }

  Terms totals() const {
    Terms out{};
    for (std::size_t k = 0; k < kNumSeries; ++k) {
      out[k] = sums[k].value();
    }
    return out;
  }
};

SeriesSums to_series(const Terms& t) {
  return SeriesSums{t[kMass], t[kAxial], t[kSpreadDiff] + t[kSpreadDiag], t[kEnergy]};
}

// ln binom(l + 2 lambda - 1, l) for l = 0, 1, ... by the product recurrence.
class LogBinomialRecurrence {
 public:
  explicit LogBinomialRecurrence(double lambda) : delta_(2.0 * lambda - 1.0) {}

  double value() const noexcept { return sum_.value(); }

  void advance_to(double l) {
    if (delta_ != 0.0) {
      sum_ += std::log1p(delta_ / l);
    }
  }

 private:
  double delta_;
  CompensatedSum sum_;
};

LogCoefficient log_of(double v) {
  if (v == 0.0) {
    return {kNegInf, 0};
  }
  return {std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
}

double log_weight(double l, double lam, const LogCoefficient& c) {
  if (l == 0.0 || c.sign == 0) {
    return kNegInf;
  }
  return (2.0 * lam + 1.0) * std::log(l) + 2.0 * c.log_abs;
}

// Running record of the truncation rule: stop at the first L past the
// maximizer of w(l) = l^(2 lambda + 1) f(l)^2 with w(L) / sum w < tol.
class TruncationRule {
 public:
  explicit TruncationRule(double tol) : log_tol_(std::log(tol)) {}

  // Returns true once degree l satisfies the rule.
  bool observe(std::int64_t l, double logw) {
    if (logw > log_max_) {
      scaled_sum_ = (log_max_ == kNegInf ? 0.0 : scaled_sum_ * std::exp(log_max_ - logw)) + 1.0;
      log_max_ = logw;
      argmax_ = l;
    } else if (logw != kNegInf) {
      scaled_sum_ += std::exp(logw - log_max_);
    }
    const double prev = last_logw_;
    last_logw_ = logw;
    if (log_max_ == kNegInf || l <= argmax_) {
      return false;
    }
    log_ratio_ = logw - log_max_ - std::log(scaled_sum_);
    if (log_ratio_ < log_tol_) {
      // Geometric estimate of the weighted mass beyond L.
      const double r = (prev == kNegInf || logw == kNegInf) ? 0.0 : std::exp(logw - prev);
      tail_ = (r < 1.0) ? std::exp(log_ratio_) * r / (1.0 - r) : std::exp(log_ratio_);
      return true;
    }
    return false;
  }

  double ratio() const { return std::exp(log_ratio_); }
  double tail() const { return tail_; }

 private:
  double log_tol_;
  double log_max_ = kNegInf;
  double scaled_sum_ = 0.0;
  double last_logw_ = kNegInf;
  double log_ratio_ = 0.0;
  double tail_ = 0.0;
  std::int64_t argmax_ = -1;
};

struct FamilyScan {
  std::vector<LogCoefficient> samples;  // degrees 0 .. L + 1
  std::vector<double> log_binom;        // degrees 0 .. L
  std::int64_t last = 0;                // L
  double tail = 0.0;
  double log_ref = kNegInf;
};

FamilyScan scan_family(const ExponentialFamily& fam, double s, double tol, std::int64_t max_terms) {
  FamilyScan scan;
  TruncationRule rule(tol);
  LogBinomialRecurrence binom(fam.lambda);
  for (std::int64_t l = 0;; ++l) {
    const double x = static_cast<double>(l);
    if (l > 0) {
      binom.advance_to(x);
    }
    const auto c = log_coefficient(fam, s, x);
    scan.samples.push_back(c);
    scan.log_binom.push_back(binom.value());
    if (c.sign != 0) {
      scan.log_ref = std::max(scan.log_ref, binom.value() + 2.0 * c.log_abs);
    }
    if (rule.observe(l, log_weight(x, fam.lambda, c))) {
      scan.last = l;
      scan.tail = rule.tail();
      break;
    }
    if (l >= max_terms) {
      throw TruncationError("truncation did not converge within " + std::to_string(max_terms) +
                                " terms (tail ratio " + format_shortest(rule.ratio()) + ")",
                            rule.ratio());
    }
  }
  scan.samples.push_back(log_coefficient(fam, s, static_cast<double>(scan.last + 1)));
  return scan;
}

double checked_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("rho must be a positive finite number");
  }
  return rho;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) {
    throw ValidationError("truncation tolerance must lie in (0, 1)");
  }
}

VarianceReport make_report(const SeriesSums& sums, double lam, double slack) {
  VarianceReport r;
  r.var_s = var_space(sums);
  r.var_m = var_momentum(sums);
  r.u = std::sqrt(r.var_s * r.var_m);
  r.n = 2.0 * lam + 1.0;
  if (r.u < r.n / 2.0 - slack) {
    throw BoundViolationError("uncertainty product " + format_shortest(r.u) +
                              " is below the lower bound n/2 = " + format_shortest(r.n / 2.0));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Asymptotic tail: sum_{l >= L0} g(l) = int_{L0}^inf g + g(L0)/2 - g'(L0)/12
// + g'''(L0)/720 + ..., valid once g varies slowly on the unit scale.

struct Extent {
  double log_peak = kNegInf;
  double log_ref = kNegInf;
  double truncation = 0.0;  // first probe past the peak below tol
  double end = 0.0;         // first probe past the peak where g is negligible
};

Extent probe_extent(const ExponentialFamily& fam, double s, double tol) {
  Extent e;
  const GegenbauerOrder order(fam.lambda);
  double peak_at = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double x = std::ldexp(1.0, k / 2) * ((k % 2) ? std::numbers::sqrt2 : 1.0);
    const auto c = log_coefficient(fam, s, x);
    const double logw = log_weight(x, fam.lambda, c);
    if (logw > e.log_peak) {
      e.log_peak = logw;
      peak_at = x;
    }
    if (c.sign != 0) {
      e.log_ref = std::max(e.log_ref, log_gen_binomial(x, order, -1) + 2.0 * c.log_abs);
    }
    if (x > peak_at && e.truncation == 0.0 && logw < e.log_peak + std::log(tol)) {
      e.truncation = x;
    }
    if (x > peak_at && logw < e.log_peak - 110.0) {
      e.end = x;
      break;
    }
  }
  if (e.end == 0.0) {
    throw TruncationError("coefficients do not decay within the probed range", 1.0);
  }
  return e;
}

struct TailSum {
  Terms sum{};
  double rel_error = 0.0;
};

TailSum euler_maclaurin_tail(const ExponentialFamily& fam, double s, double log_ref, double x_end) {
  const GegenbauerOrder order(fam.lambda);
  const double lam = fam.lambda;
  auto g = [&](double x) {
    const auto cur = log_coefficient(fam, s, x);
    const auto next = log_coefficient(fam, s, x + 1.0);
    const double lr = (cur.sign != 0 && next.sign != 0) ? log_coefficient_ratio(fam, s, x) : 0.0;
    return summands(x, lam, log_gen_binomial(x, order, -1), log_ref, cur, next, lr);
  };

  const auto& rule = panel_rule();
  const double a = std::log(kTailStart);
  const double b = std::log(x_end);
  auto integrate = [&](int panels) {
    Accumulator acc;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double left = a + h * p;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = left + 0.5 * h * (1.0 + rule.nodes[i]);
        const double x = std::exp(u);
        Terms t = g(x);
        const double w = 0.5 * h * rule.weights[i] * x;
        for (auto& v : t) {
          v *= w;
        }
        acc.add(t);
      }
    }
    return acc.totals();
  };

  int panels = std::max(16, static_cast<int>(std::ceil((b - a) / 0.25)));
  Terms prev = integrate(panels);
  Terms curr{};
  double change = 0.0;
  for (;;) {
    panels *= 2;
    curr = integrate(panels);
    change = 0.0;
    const double spread_scale = std::fabs(curr[kSpreadDiff]) + std::fabs(curr[kSpreadDiag]);
    for (std::size_t k = 0; k < kNumSeries; ++k) {
      const bool spread = (k == kSpreadDiff || k == kSpreadDiag);
      const double scale = spread ? spread_scale : std::fabs(curr[k]);
      if (scale > 0.0) {
        change = std::max(change, std::fabs(curr[k] - prev[k]) / scale);
      }
    }
    if (change < kTailQuadratureTol) {
      break;
    }
    if (panels >= kMaxTailPanels) {
      throw ConvergenceError("tail integral did not converge (relative change " +
                             format_shortest(change) + ")");
    }
    prev = curr;
  }

  const double x0 = kTailStart;
  const Terms gm2 = g(x0 - 2.0);
  const Terms gm1 = g(x0 - 1.0);
  const Terms g0 = g(x0);
  const Terms gp1 = g(x0 + 1.0);
  const Terms gp2 = g(x0 + 2.0);
  TailSum out;
  double correction = 0.0;
  for (std::size_t k = 0; k < kNumSeries; ++k) {
    const double d1 = (gm2[k] - 8.0 * gm1[k] + 8.0 * gp1[k] - gp2[k]) / 12.0;
    const double d3 = (-gm2[k] + 2.0 * gm1[k] - 2.0 * gp1[k] + gp2[k]) / 2.0;
    out.sum[k] = curr[k] + 0.5 * g0[k] - d1 / 12.0 + d3 / 720.0;
    correction = std::max(correction, std::fabs(d3 / 720.0));
  }
  out.rel_error = change + correction / std::max(std::fabs(out.sum[kMass]), 1e-300);
  return out;
}

VarianceReport evaluate_asymptotic(const ExponentialFamily& fam, double s, const Extent& extent,
                                   double slack) {
  const double lam = fam.lambda;
  // The expansion needs the summand to be smooth on the unit scale at L0.
  if (std::fabs(2.0 * log_coefficient_ratio(fam, s, kTailStart)) > 0.1) {
    throw TruncationError("series too long for direct summation and too steep at the tail "
                          "start for an asymptotic tail",
                          1.0);
  }
  const double log_ref = extent.log_ref;
  Accumulator acc;
  LogBinomialRecurrence binom(lam);
  const auto last = static_cast<std::int64_t>(kTailStart) - 1;
  LogCoefficient cur = log_coefficient(fam, s, 0.0);
  for (std::int64_t l = 0; l <= last; ++l) {
    const double x = static_cast<double>(l);
    if (l > 0) {
      binom.advance_to(x);
    }
    const auto next = log_coefficient(fam, s, x + 1.0);
    const double lr = (cur.sign != 0 && next.sign != 0) ? log_coefficient_ratio(fam, s, x) : 0.0;
    acc.add(summands(x, lam, binom.value(), log_ref, cur, next, lr));
    cur = next;
  }
  const auto tail = euler_maclaurin_tail(fam, s, log_ref, extent.end);
  acc.add(tail.sum);

  auto report = make_report(to_series(acc.totals()), lam, slack);
  report.trunc_index = static_cast<std::int64_t>(extent.end);
  report.tail_bound = tail.rel_error;
  report.asymptotic_tail = true;
  return report;
}

}  // namespace

ZonalFunction::ZonalFunction(GegenbauerOrder lambda, std::vector<double> coeffs, double tail_bound,
                             double log_scale)
    : lambda_(lambda), coeffs_(std::move(coeffs)), tail_bound_(tail_bound), log_scale_(log_scale) {
  if (coeffs_.empty()) {
    throw ValidationError("zonal function needs at least one coefficient");
  }
  bool any_nonzero = false;
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      throw ValidationError("zonal function coefficients must be finite");
    }
    any_nonzero = any_nonzero || c != 0.0;
  }
  if (!any_nonzero) {
    throw ValidationError("zonal function coefficients are all zero");
  }
}

ZonalFunction truncate(const Family& family, double rho, double tol, std::int64_t max_terms) {
  checked_rho(rho);
  check_tolerance(tol);
  const auto fam = exponential_view(family);
  const double s = std::pow(rho, fam.a);
  auto scan = scan_family(fam, s, tol, max_terms);
  double log_scale = kNegInf;
  for (std::int64_t l = 0; l <= scan.last; ++l) {
    if (scan.samples[l].sign != 0) {
      log_scale = std::max(log_scale, scan.samples[l].log_abs);
    }
  }
  std::vector<double> coeffs(static_cast<std::size_t>(scan.last + 1), 0.0);
  for (std::int64_t l = 0; l <= scan.last; ++l) {
    const auto& c = scan.samples[l];
    if (c.sign != 0) {
      coeffs[l] = c.sign * std::exp(c.log_abs - log_scale);
    }
  }
  return ZonalFunction(family_order(family), std::move(coeffs), scan.tail, log_scale);
}

ZonalFunction truncate(GegenbauerOrder lambda, std::vector<double> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0.0) {
    coeffs.pop_back();
  }
  return ZonalFunction(lambda, std::move(coeffs), 0.0, 0.0);
}

SeriesSums series_sums(const ZonalFunction& f) {
  const double lam = f.lambda().value();
  const auto c = f.coefficients();
  const std::size_t size = c.size();
  std::vector<double> log_binom(size);
  LogBinomialRecurrence binom(lam);
  double log_ref = kNegInf;
  for (std::size_t l = 0; l < size; ++l) {
    if (l > 0) {
      binom.advance_to(static_cast<double>(l));
    }
    log_binom[l] = binom.value();
    if (c[l] != 0.0) {
      log_ref = std::max(log_ref, log_binom[l] + 2.0 * std::log(std::fabs(c[l])));
    }
  }
  Accumulator acc;
  for (std::size_t l = 0; l < size; ++l) {
    const auto cur = log_of(c[l]);
    const auto next = (l + 1 < size) ? log_of(c[l + 1]) : LogCoefficient{kNegInf, 0};
    const double lr = (cur.sign != 0 && next.sign != 0) ? next.log_abs - cur.log_abs : 0.0;
    acc.add(summands(static_cast<double>(l), lam, log_binom[l], log_ref, cur, next, lr));
  }
  return to_series(acc.totals());
}

double var_space(const SeriesSums& sums) {
  if (!(std::fabs(sums.axial) >= kCenterOfMassFloor)) {
    throw CenterOfMassError(
        "space variance undefined: the axial moment of |f|^2 vanishes (center of mass at origin)");
  }
  // (mass/axial)^2 - 1 = (mass - axial)(mass + axial) / axial^2
  double v = (sums.spread / sums.axial) * ((sums.mass + sums.axial) / sums.axial);
  if (!std::isfinite(v)) {
    throw NumericalError("space variance exceeds the double range (axial moment " +
                         format_shortest(sums.axial / sums.mass) + " of the mass)");
  }
  if (v < 0.0) {
    if (v < -kClampWindow) {
      throw ConsistencyError("space variance evaluated to " + format_shortest(v));
    }
    v = 0.0;
  }
  return v;
}

double var_space(const ZonalFunction& f) { return var_space(series_sums(f)); }

double var_momentum(const SeriesSums& sums) { return sums.energy / sums.mass; }

double var_momentum(const ZonalFunction& f) { return var_momentum(series_sums(f)); }

VarianceReport uncertainty(const ZonalFunction& f, double lower_bound_slack) {
  auto report = make_report(series_sums(f), f.lambda().value(), lower_bound_slack);
  report.trunc_index = f.truncation_index();
  report.tail_bound = f.tail_bound();
  return report;
}

VarianceReport evaluate(const Family& family, double rho, const EngineOptions& options) {
  checked_rho(rho);
  check_tolerance(options.truncation_tol);
  const auto fam = exponential_view(family);
  const double s = std::pow(rho, fam.a);

  VarianceReport report;
  bool done = false;
  if (options.asymptotic_tail) {
    const auto extent = probe_extent(fam, s, options.truncation_tol);
    if (extent.truncation > static_cast<double>(options.direct_limit)) {
      report = evaluate_asymptotic(fam, s, extent, options.lower_bound_slack);
      done = true;
    }
  }
  if (!done) {
    const auto scan = scan_family(fam, s, options.truncation_tol, options.max_terms);
    Accumulator acc;
    for (std::int64_t l = 0; l <= scan.last; ++l) {
      const auto& cur = scan.samples[l];
      const auto& next = scan.samples[l + 1];
      const double x = static_cast<double>(l);
      const double lr =
          (cur.sign != 0 && next.sign != 0) ? log_coefficient_ratio(fam, s, x) : 0.0;
      acc.add(summands(x, fam.lambda, scan.log_binom[l], scan.log_ref, cur, next, lr));
    }
    report = make_report(to_series(acc.totals()), fam.lambda, options.lower_bound_slack);
    report.trunc_index = scan.last;
    report.tail_bound = scan.tail;
  }
  report.rho = rho;
  report.family_id = family_id(family);
  return report;
}

}  // namespace sphu
