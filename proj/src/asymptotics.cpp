#include "sphu/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "sphu/compensated_sum.hpp"
#include "sphu/errors.hpp"
#include "sphu/format.hpp"
#include "sphu/special_fn.hpp"

namespace sphu {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSeriesTol = 1e-16;
constexpr std::int64_t kSeriesCap = 100'000'000;
constexpr double kMinRSquared = 0.999;
// Relative errors below this are rounding noise, not a correction term.
constexpr double kCorrectionFloor = 1e-10;
constexpr double kCorrectionSlack = 0.1;

// Sums exp(log_term(l)) for l = start, start + 1, ... until the terms are
// past their peak and below kSeriesTol of the partial sum. The running sum
// is kept in units of exp(scale) so that it cannot overflow.
template <class LogTerm>
double log_series(LogTerm log_term, std::int64_t start) {
  CompensatedSum sum;
  double scale = kNegInf;
  double peak = kNegInf;
  std::int64_t peak_at = start;
  for (std::int64_t l = start;; ++l) {
    const double lt = log_term(l);
    if (lt > peak) {
      peak = lt;
      peak_at = l;
    }
    if (lt != kNegInf) {
      if (scale == kNegInf) {
        scale = lt;
      } else if (lt - scale > 300.0) {
        sum = CompensatedSum(sum.value() * std::exp(scale - lt));
        scale = lt;
      }
      sum += std::exp(lt - scale);
    }
    if (l > peak_at && lt != kNegInf && std::exp(lt - scale) < kSeriesTol * sum.value()) {
      break;
    }
    if (l - start >= kSeriesCap) {
      throw TruncationError("series did not converge within " + std::to_string(kSeriesCap) + " terms",
                            std::exp(lt - scale) / sum.value());
    }
  }
  return std::exp(scale) * sum.value();
}

void require_positive_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("rho must be a positive finite number");
  }
}

double leading_general(double exponent_numerator, double nu, double rho, double a_nu) {
  const double e = exponent_numerator / nu;
  return std::exp(log_gamma(e) - std::log(nu) - e * std::log(rho * a_nu));
}

}  // namespace

ExponentFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DomainError("fit_loglog: xs and ys differ in length");
  }
  if (xs.size() < 3) {
    throw DomainError("fit_loglog: at least 3 points are required");
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> lx(xs.size());
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw DomainError("fit_loglog: all values must be positive");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) {
    throw DomainError("fit_loglog: xs must not all be equal");
  }
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
  }
  fit.r_squared = (syy == 0.0) ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
  fit.n_points = static_cast<int>(xs.size());
  return fit;
}

double power_sum(double d, double nu, double rho, std::int64_t k) {
  if (!(d >= 0.0) || !(nu > 0.0) || !std::isfinite(d) || !std::isfinite(nu)) {
    throw DomainError("power_sum needs d >= 0 and nu > 0");
  }
  require_positive_rho(rho);
  if (k < 0) {
    throw DomainError("power_sum start index must be nonnegative");
  }
  return log_series(
      [&](std::int64_t l) {
        if (l == 0) {
          return d == 0.0 ? 0.0 : kNegInf;
        }
        const double x = static_cast<double>(l);
        return d * std::log(x) - rho * std::pow(x, nu);
      },
      k);
}

double poly_sum(double p, const Polynomial& Q, double d, const Polynomial& q, double rho) {
  if (!(p >= 0.0) || !(d >= 0.0)) {
    throw DomainError("poly_sum needs p >= 0 and d >= 0");
  }
  require_positive_rho(rho);
  validate_exponent_polynomial(q);
  return log_series(
      [&](std::int64_t l) {
        const double x = static_cast<double>(l);
        const double Qx = Q(x);
        if (!(Qx > 0.0)) {
          throw DomainError("poly_sum: Q(" + std::to_string(l) + ") = " + format_shortest(Qx) +
                            " is not positive");
        }
        return p * std::log(x) + d * std::log(Qx) - rho * q(x);
      },
      1);
}

double leading_term(double p, int r, double d, int nu, double rho, double a_nu) {
  if (!(p >= 0.0) || r < 0 || !(d >= 0.0) || nu < 1 || !(a_nu > 0.0)) {
    throw DomainError("leading_term needs p >= 0, r >= 0, d >= 0, nu >= 1 and a_nu > 0");
  }
  require_positive_rho(rho);
  return leading_general(p + r * d + 1.0, nu, rho, a_nu);
}

std::vector<double> log_grid(double hi, double lo, int count) {
  if (!(hi > lo) || !(lo > 0.0) || count < 2) {
    throw ValidationError("rho grid needs hi > lo > 0 and at least 2 points");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double a = std::log10(hi);
  const double b = std::log10(lo);
  for (int i = 0; i < count; ++i) {
    grid[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  }
  grid.front() = hi;
  grid.back() = lo;
  return grid;
}

std::vector<double> default_rho_grid() { return log_grid(1e-2, 1e-6, 13); }

std::vector<double> lemma_rho_grid(int nu, int count) {
  if (nu < 1) {
    throw DomainError("lemma grid needs nu >= 1");
  }
  return log_grid(std::pow(10.0, -3.0 * nu), std::pow(10.0, -3.0 * nu - 3.0), count);
}

LemmaKind parse_lemma_kind(const std::string& id) {
  if (id == "power-sum" || id == "3.1") {
    return LemmaKind::PowerSum;
  }
  if (id == "polynomial-exponent" || id == "3.2") {
    return LemmaKind::PolynomialExponent;
  }
  if (id == "polynomial-product" || id == "3.3") {
    return LemmaKind::PolynomialProduct;
  }
  throw ValidationError("unknown lemma id '" + id +
                        "' (expected power-sum, polynomial-exponent or polynomial-product)");
}

std::string lemma_name(LemmaKind kind) {
  switch (kind) {
    case LemmaKind::PowerSum:
      return "power-sum";
    case LemmaKind::PolynomialExponent:
      return "polynomial-exponent";
    case LemmaKind::PolynomialProduct:
      return "polynomial-product";
  }
  return "unknown";
}

LemmaReport lemma_check(const LemmaParams& params, std::span<const double> rho_grid,
                        double slope_tol) {
  if (rho_grid.size() < 6) {
    throw ValidationError("lemma check needs at least 6 grid points");
  }
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0.0 && rho_grid[i] <= 0.1)) {
      throw ValidationError("lemma grid points must lie in (0, 0.1]");
    }
    if (i > 0 && !(rho_grid[i] < rho_grid[i - 1])) {
      throw ValidationError("lemma grid must be strictly decreasing");
    }
  }
  if (rho_grid.front() / rho_grid.back() < 999.999) {
    throw ValidationError("lemma grid must span at least 3 decades");
  }
  if (!(slope_tol > 0.0)) {
    throw ValidationError("slope tolerance must be positive");
  }

  double nu = 0.0;
  double numerator = 0.0;  // p + r d + 1
  double a_nu = 1.0;
  double prefactor = 1.0;
  std::function<double(double)> sum;
  const Polynomial identity({0.0, 1.0});
  switch (params.kind) {
    case LemmaKind::PowerSum:
      nu = params.nu;
      numerator = params.d + 1.0;
      sum = [&](double rho) { return power_sum(params.d, params.nu, rho, params.k); };
      break;
    case LemmaKind::PolynomialExponent:
      if (!params.q) {
        throw ValidationError("polynomial-exponent check needs q");
      }
      nu = params.q->degree();
      a_nu = params.q->leading();
      numerator = params.d + 1.0;
      sum = [&](double rho) { return poly_sum(0.0, identity, params.d, *params.q, rho); };
      break;
    case LemmaKind::PolynomialProduct:
      if (!params.q || !params.Q) {
        throw ValidationError("polynomial-product check needs q and Q");
      }
      nu = params.q->degree();
      a_nu = params.q->leading();
      numerator = params.p + params.Q->degree() * params.d + 1.0;
      prefactor = std::pow(params.Q->leading(), params.d);
      sum = [&](double rho) { return poly_sum(params.p, *params.Q, params.d, *params.q, rho); };
      break;
  }
  if (!(nu > 0.0)) {
    throw DomainError("exponent degree nu must be positive");
  }

  LemmaReport report;
  report.kind = params.kind;
  report.expected_slope = -numerator / nu;
  report.slope_tol = slope_tol;
  std::vector<double> sums;
  for (double rho : rho_grid) {
    const double s = sum(rho);
    const double lead = prefactor * leading_general(numerator, nu, rho, a_nu);
    report.rows.push_back({rho, s, lead, std::fabs(s - lead) / lead});
    sums.push_back(s);
  }
  report.fit = fit_loglog(rho_grid, sums);
  if (report.fit.r_squared < kMinRSquared) {
    throw InconclusiveFitError("log-log fit of the " + lemma_name(params.kind) + " sums has r^2 = " +
                               format_shortest(report.fit.r_squared) + " < 0.999");
  }
  report.slope_ok = std::fabs(report.fit.slope - report.expected_slope) <=
                    slope_tol * std::fabs(report.expected_slope);

  // The correction to the leading term is O(rho^(-(numerator - 1)/nu)), so
  // the relative error must fall at least like rho^(1/nu).
  report.correction_min_slope = 1.0 / nu - kCorrectionSlack;
  std::vector<double> xs;
  std::vector<double> errs;
  for (const auto& row : report.rows) {
    if (row.rel_error > kCorrectionFloor) {
      xs.push_back(row.rho);
      errs.push_back(row.rel_error);
    }
  }
  if (xs.size() >= 3) {
    report.correction = fit_loglog(xs, errs);
    report.correction_ok = report.correction->slope >= report.correction_min_slope;
  } else {
    report.correction_ok = true;
  }
  return report;
}

bool SweepResult::partial() const {
  return std::any_of(errors.begin(), errors.end(), [](const auto& e) { return e.has_value(); });
}

SweepResult sweep(const Family& family, std::span<const double> rho_grid,
                  const EngineOptions& options, unsigned threads) {
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0.0) || !std::isfinite(rho_grid[i])) {
      throw ValidationError("rho grid points must be positive and finite");
    }
    if (i > 0 && !(rho_grid[i] < rho_grid[i - 1])) {
      throw ValidationError("rho grid must be strictly decreasing");
    }
  }
  SweepResult result;
  result.rho_grid.assign(rho_grid.begin(), rho_grid.end());
  result.reports.resize(rho_grid.size());
  result.errors.resize(rho_grid.size());
  result.family_id = family_id(family);

  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, rho_grid.size())));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rho_grid.size(); i = next++) {
      try {
        result.reports[i] = evaluate(family, rho_grid[i], options);
      } catch (const Error& e) {
        result.errors[i] = PointError{error_kind(e), e.what()};
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(work);
    }
  }
  return result;
}

std::string to_string(RateVerdict v) {
  switch (v) {
    case RateVerdict::Bounded:
      return "bounded";
    case RateVerdict::Pass:
      return "pass";
    case RateVerdict::Fail:
      return "fail";
    case RateVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

double relative_variation(std::span<const double> ys) {
  if (ys.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    total += std::fabs(ys[i] - ys[i - 1]);
  }
  return total / std::fabs(ys.back());
}

double tail_variation(std::span<const double> ys) {
  return relative_variation(ys.subspan(ys.size() / 2));
}

RateCheck rate_check(const SweepResult& result, const Family& family, double slope_tol,
                     double variation_tol) {
  RateCheck check;
  check.slope_tol = slope_tol;
  check.variation_tol = variation_tol;
  check.bound_slope = -family_scale_exponent(family) / (2.0 * family_degree(family));
  if (result.partial()) {
    check.diagnostics = "sweep has failed points";
    return check;
  }
  const auto& grid = result.rho_grid;
  if (grid.size() < 6 || grid.front() / grid.back() < 999.999) {
    check.diagnostics = "grid needs at least 6 points spanning 3 decades";
    return check;
  }
  std::vector<double> us;
  for (const auto& r : result.reports) {
    us.push_back(r->u);
  }
  check.variation = tail_variation(us);
  check.fit = fit_loglog(grid, us);
  if (check.variation < variation_tol) {
    check.verdict = RateVerdict::Bounded;
    return check;
  }
  if (check.fit->r_squared < kMinRSquared) {
    check.verdict = RateVerdict::Inconclusive;
    check.diagnostics = "U neither bounded (variation " + format_shortest(check.variation) +
                        ") nor a power law (r^2 " + format_shortest(check.fit->r_squared) + ")";
    return check;
  }
  check.verdict =
      check.fit->slope >= check.bound_slope - slope_tol ? RateVerdict::Pass : RateVerdict::Fail;
  return check;
}

}  // namespace sphu
