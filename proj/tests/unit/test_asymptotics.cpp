#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sphu/asymptotics.hpp"
#include "sphu/errors.hpp"

using namespace sphu;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

SweepResult synthetic(const std::vector<double>& grid, const std::vector<double>& us) {
  SweepResult r;
  r.rho_grid = grid;
  for (double u : us) {
    VarianceReport v;
    v.u = u;
    r.reports.emplace_back(v);
    r.errors.emplace_back();
  }
  return r;
}

}  // namespace

TEST_CASE("fit_loglog fixtures") {
  const std::vector<double> xs = {0.1, 0.2, 0.5, 1.0, 3.0, 10.0};
  std::vector<double> sq, pw, noisy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sq.push_back(xs[i] * xs[i]);
    pw.push_back(5.0 * std::pow(xs[i], -1.5));
    noisy.push_back(xs[i] * xs[i] * (1.0 + 0.001 * ((i % 2) ? -1.0 : 1.0)));
  }
  auto f = fit_loglog(xs, sq);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f.n_points == 6);
  f = fit_loglog(xs, pw);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-13));
  f = fit_loglog(xs, noisy);
  CHECK(std::fabs(f.slope - 2.0) < 0.01);
  CHECK(f.r_squared >= 0.999);

  CHECK_THROWS_AS(fit_loglog(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DomainError);
  CHECK_THROWS_AS(fit_loglog(std::vector<double>{1, 2, 3}, std::vector<double>{1, 0, 2}), DomainError);
  CHECK_THROWS_AS(fit_loglog(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), DomainError);
}

TEST_CASE("power_sum closed form") {
  for (double rho : {0.01, 0.1, 1.0}) {
    const double x = std::exp(-rho);
    CHECK(rel(power_sum(1.0, 1.0, rho), x / ((1.0 - x) * (1.0 - x))) < 1e-12);
  }
  // 1/(4 sinh^2(rho/2)) = 1/rho^2 - 1/12 + rho^2/240 - ...
  CHECK(rel(power_sum(1.0, 1.0, 0.01), 1e4 - 1.0 / 12.0 + 1e-4 / 240.0) < 1e-12);
  // sum_{l >= k} x^l
  CHECK(rel(power_sum(0.0, 1.0, 0.2, 3), std::exp(-0.6) / (1.0 - std::exp(-0.2))) < 1e-13);
}

TEST_CASE("power_sum brute force") {
  double direct = 0.0;
  for (int l = 49; l >= 0; --l) {
    direct += double(l) * l * std::exp(-double(l) * l);
  }
  CHECK(rel(power_sum(2.0, 2.0, 1.0), direct) < 1e-14);

  for (double d : {0.5, 1.0, 2.0, 5.0}) {
    for (double nu : {1.0, 1.5, 2.0}) {
      const double rho = 0.05;
      long double s = 0.0L;
      for (int l = 20000; l >= 1; --l) {
        s += std::pow(static_cast<long double>(l), d) * std::exp(-rho * std::pow(static_cast<long double>(l), nu));
      }
      CHECK(rel(power_sum(d, nu, rho, 1), static_cast<double>(s)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(power_sum(-1.0, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(power_sum(1.0, 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(power_sum(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("power_sum approaches its leading term") {
  double previous = INFINITY;
  for (double rho : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double e = rel(power_sum(1.0, 1.0, rho), std::pow(rho, -2.0));
    CHECK(e < previous);
    previous = e;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("leading_term examples") {
  const double rho = 0.003;
  CHECK(rel(leading_term(0, 1, 1, 1, rho, 1), std::pow(rho, -2.0)) < 1e-13);
  CHECK(rel(leading_term(0, 1, 0, 1, rho, 1), 1.0 / rho) < 1e-13);
  CHECK(rel(leading_term(2, 2, 1, 2, rho, 1), std::tgamma(2.5) / 2.0 * std::pow(rho, -2.5)) < 1e-13);
  CHECK(rel(leading_term(0, 1, 1, 1, rho, 4.0), std::pow(4.0 * rho, -2.0)) < 1e-13);
}

TEST_CASE("poly_sum") {
  const Polynomial one({1.0});
  const Polynomial id({0.0, 1.0});
  for (double rho : {0.3, 0.01}) {
    CHECK(rel(poly_sum(0.0, one, 1.0, id, rho), power_sum(0.0, 1.0, rho, 1)) < 1e-13);
  }

  long double s = 0.0L;
  for (int l = 400; l >= 1; --l) {
    s += static_cast<long double>(l) * (l + 1) * std::exp(-0.5L * l);
  }
  CHECK(rel(poly_sum(1.0, Polynomial({1.0, 1.0}), 1.0, id, 0.5), static_cast<double>(s)) < 1e-14);

  // numerator shape of a smoothing kernel on S^2: Q = l(l+1), q = l(l+1)
  const Polynomial ll({0.0, 1.0, 1.0});
  s = 0.0L;
  for (int l = 300; l >= 1; --l) {
    s += std::pow(static_cast<long double>(l) * (l + 1), 1.5L) * std::exp(-0.02L * l * (l + 1));
  }
  CHECK(rel(poly_sum(0.0, ll, 1.5, ll, 0.02), static_cast<double>(s)) < 1e-13);

  CHECK_THROWS_AS(poly_sum(0.0, Polynomial({-5.0, 1.0}), 1.0, id, 0.1), DomainError);
}

TEST_CASE("grids") {
  const auto g = default_rho_grid();
  CHECK(g.size() == 13u);
  CHECK(rel(g.front(), 1e-2) < 1e-15);
  CHECK(rel(g.back(), 1e-6) < 1e-15);
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(g[i] < g[i - 1]);
  }
  const auto l1 = lemma_rho_grid(1);
  CHECK(rel(l1.front(), 1e-3) < 1e-15);
  CHECK(rel(l1.back(), 1e-6) < 1e-15);
  CHECK(rel(lemma_rho_grid(2).front(), 1e-6) < 1e-15);
  CHECK_THROWS_AS(log_grid(1e-3, 1e-2, 5), ValidationError);
}

TEST_CASE("lemma aliases") {
  CHECK(parse_lemma_kind("3.1") == LemmaKind::PowerSum);
  CHECK(parse_lemma_kind("3.2") == LemmaKind::PolynomialExponent);
  CHECK(parse_lemma_kind("3.3") == LemmaKind::PolynomialProduct);
  CHECK(parse_lemma_kind("power-sum") == LemmaKind::PowerSum);
  CHECK(parse_lemma_kind("polynomial-product") == LemmaKind::PolynomialProduct);
  CHECK(lemma_name(LemmaKind::PolynomialExponent) == "polynomial-exponent");
  CHECK_THROWS_AS(parse_lemma_kind("3.4"), ValidationError);
}

TEST_CASE("lemma checks: examples") {
  LemmaParams a;
  a.kind = LemmaKind::PowerSum;
  a.d = 1.0;
  a.nu = 1.0;
  auto r = lemma_check(a, lemma_rho_grid(1));
  CHECK(r.passed());
  CHECK(std::fabs(r.fit.slope + 2.0) < 0.02);
  CHECK(r.fit.r_squared >= 0.999);

  LemmaParams b;
  b.kind = LemmaKind::PolynomialExponent;
  b.d = 2.0;
  b.q = Polynomial({2.0, 3.0, 1.0});
  r = lemma_check(b, lemma_rho_grid(2), 0.01);
  CHECK(r.passed());
  CHECK(r.expected_slope == -1.5);
  CHECK(std::fabs(r.fit.slope + 1.5) < 0.015);

  LemmaParams c;
  c.kind = LemmaKind::PolynomialProduct;
  c.p = 1.0;
  c.d = 2.0;
  c.Q = Polynomial({5.0, 1.0});
  c.q = Polynomial({0.0, 1.0, 0.0, 1.0});
  r = lemma_check(c, lemma_rho_grid(3), 0.015);
  CHECK(r.passed());
  CHECK(r.expected_slope == doctest::Approx(-4.0 / 3.0));
  CHECK(std::fabs(r.fit.slope + 4.0 / 3.0) < 0.015 * 4.0 / 3.0);
}

TEST_CASE("lemma checks: grid validation") {
  LemmaParams a;
  CHECK_THROWS_AS(lemma_check(a, log_grid(1e-3, 1e-6, 5)), ValidationError);
  CHECK_THROWS_AS(lemma_check(a, log_grid(1.0, 1e-3, 8)), ValidationError);
  CHECK_THROWS_AS(lemma_check(a, log_grid(1e-3, 1e-5, 8)), ValidationError);
  auto g = lemma_rho_grid(1);
  std::swap(g[0], g[1]);
  CHECK_THROWS_AS(lemma_check(a, g), ValidationError);
  LemmaParams b;
  b.kind = LemmaKind::PolynomialExponent;
  CHECK_THROWS_AS(lemma_check(b, lemma_rho_grid(1)), ValidationError);
}

TEST_CASE("sweep: poisson succeeds with nearly constant U") {
  const Family fam = preset("poisson", 2, 1.0);
  const auto grid = log_grid(1e-2, 1e-5, 10);
  const auto r = sweep(fam, grid);
  CHECK_FALSE(r.partial());
  CHECK(r.family_id == family_id(fam));
  std::vector<double> us;
  for (const auto& rep : r.reports) {
    REQUIRE(rep.has_value());
    CHECK(rep->u >= 1.0 - 1e-9);
    us.push_back(rep->u);
  }
  CHECK(relative_variation(us) < 0.05);
  CHECK(rate_check(r, fam).verdict == RateVerdict::Bounded);
}

TEST_CASE("sweep: gw_wavelet is finite everywhere") {
  const auto r = sweep(preset("gw_wavelet", 2), default_rho_grid());
  for (const auto& rep : r.reports) {
    REQUIRE(rep.has_value());
    CHECK(std::isfinite(rep->u));
  }
}

TEST_CASE("sweep: per-point failures are recorded") {
  // mexican_needlet at rho = 10 overflows the space variance
  const std::vector<double> grid = {10.0, 1.0, 0.1};
  const auto r = sweep(preset("mexican_needlet", 2, 1.0), grid);
  CHECK(r.partial());
  CHECK_FALSE(r.reports[0].has_value());
  REQUIRE(r.errors[0].has_value());
  CHECK(r.errors[0]->kind == "numerical");
  CHECK(r.reports[1].has_value());
  CHECK(r.reports[2].has_value());
  CHECK_THROWS_AS(sweep(preset("poisson", 2, 1.0), std::vector<double>{0.1, 0.2}), ValidationError);
}

TEST_CASE("sweep is deterministic across thread counts") {
  const Family fam = make_family(1.0, 0.5, Polynomial({0.0, 1.0, 1.0}), 3);
  const auto grid = default_rho_grid();
  const auto one = sweep(fam, grid, {}, 1);
  for (unsigned threads : {2u, 5u, 16u}) {
    const auto many = sweep(fam, grid, {}, threads);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(one.reports[i]->var_s == many.reports[i]->var_s);
      CHECK(one.reports[i]->var_m == many.reports[i]->var_m);
      CHECK(one.reports[i]->u == many.reports[i]->u);
      CHECK(one.reports[i]->trunc_index == many.reports[i]->trunc_index);
    }
  }
}

TEST_CASE("scale exponent can be absorbed into rho") {
  const Family fam = make_family(2.0, 1.0, Polynomial({0.0, 1.0}), 2);
  const Family unit = with_unit_scale_exponent(fam);
  const auto grid = log_grid(1e-1, 1e-3, 7);
  std::vector<double> squared;
  for (double rho : grid) {
    squared.push_back(rho * rho);
  }
  const auto a = sweep(fam, grid);
  const auto b = sweep(unit, squared);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(rel(a.reports[i]->var_s, b.reports[i]->var_s) < 1e-12);
    CHECK(rel(a.reports[i]->var_m, b.reports[i]->var_m) < 1e-12);
    CHECK(rel(a.reports[i]->u, b.reports[i]->u) < 1e-12);
  }

  // chain rule: a slope in rho equals a times the slope in rho^a
  std::vector<double> va, vb;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    va.push_back(a.reports[i]->var_s);
    vb.push_back(b.reports[i]->var_s);
  }
  const double slope_rho = fit_loglog(grid, va).slope;
  const double slope_tilde = fit_loglog(squared, vb).slope;
  CHECK(rel(slope_rho / 2.0, slope_tilde) < 0.02);
}

TEST_CASE("variation metrics") {
  const std::vector<double> flat = {2.0, 2.0, 2.0, 2.0};
  CHECK(relative_variation(flat) == 0.0);
  const std::vector<double> ys = {1.0, 3.0, 2.0, 2.0};
  CHECK(relative_variation(ys) == doctest::Approx(1.5));
  CHECK(tail_variation(ys) == 0.0);
}

TEST_CASE("rate check verdicts") {
  const Family fam = make_family(1.0, 1.0, Polynomial({0.0, 1.0}), 2);
  const auto grid = default_rho_grid();
  std::vector<double> flat, slow, fast, noisy;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    flat.push_back(1.3);
    slow.push_back(std::pow(grid[i], -0.4));
    fast.push_back(std::pow(grid[i], -0.7));
    noisy.push_back(1.0 + ((i % 2) ? 5.0 : 0.0));
  }
  auto c = rate_check(synthetic(grid, flat), fam);
  CHECK(c.verdict == RateVerdict::Bounded);
  CHECK(c.bound_slope == -0.5);
  c = rate_check(synthetic(grid, slow), fam);
  CHECK(c.verdict == RateVerdict::Pass);
  CHECK(c.fit->slope == doctest::Approx(-0.4));
  c = rate_check(synthetic(grid, fast), fam);
  CHECK(c.verdict == RateVerdict::Fail);
  c = rate_check(synthetic(grid, noisy), fam);
  CHECK(c.verdict == RateVerdict::Inconclusive);
  CHECK_FALSE(c.diagnostics.empty());

  auto partial = synthetic(grid, flat);
  partial.reports[3].reset();
  partial.errors[3] = PointError{"numerical", "x"};
  CHECK(rate_check(partial, fam).verdict == RateVerdict::Inconclusive);
  const std::vector<double> short_grid = {1e-2, 1e-3, 1e-4};
  CHECK(rate_check(synthetic(short_grid, {1, 1, 1}), fam).verdict == RateVerdict::Inconclusive);
  CHECK(to_string(RateVerdict::Bounded) == "bounded");
}

TEST_CASE("bounded verdicts survive halving the smallest rho") {
  for (const Family& fam : {preset("poisson", 2, 1.0), preset("poisson", 3, 2.0), preset("gw_kernel", 2)}) {
    auto grid = default_rho_grid();
    CHECK(rate_check(sweep(fam, grid), fam).verdict == RateVerdict::Bounded);
    grid.push_back(grid.back() / 2.0);
    CHECK(rate_check(sweep(fam, grid), fam).verdict == RateVerdict::Bounded);
  }
}
