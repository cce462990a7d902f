#include "sphu/quadrature_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphu/compensated_sum.hpp"
#include "sphu/errors.hpp"
#include "sphu/format.hpp"
#include "sphu/gauss_legendre.hpp"

namespace sphu {

namespace {

// |axial| below this fraction of the mass counts as a vanishing center of mass.
constexpr double kAxialFloor = 1e-12;

struct Values {
  double f;
  double df;  // d/d theta
};

// Sums coeffs[l] C_l^lambda(t) and its theta derivative in one pass, running
// the recurrences for orders lambda and lambda + 1 side by side.
Values synthesize_both(const ZonalFunction& f, double theta) {
  const auto c = f.coefficients();
  const double lam = f.lambda().value();
  const double t = std::cos(theta);
  const double s = std::sin(theta);
  CompensatedSum value;
  CompensatedSum deriv;
  double p_prev = 0.0;
  double p = 1.0;  // C_l^lambda
  double d_prev = 0.0;
  double d = 1.0;  // C_{l-1}^{lambda+1}
  value += c[0];
  for (std::size_t l = 1; l < c.size(); ++l) {
    const double ll = static_cast<double>(l);
    const double p_next =
        (l == 1) ? 2.0 * lam * t : (2.0 * t * (ll + lam - 1.0) * p - (ll + 2.0 * lam - 2.0) * p_prev) / ll;
    p_prev = p;
    p = p_next;
    if (l >= 2) {
      // C_{l-1}^{lambda+1} from C_{l-2}, C_{l-3} of the same order.
      const double m = ll - 1.0;
      const double mu = lam + 1.0;
      const double d_next =
          (l == 2) ? 2.0 * mu * t : (2.0 * t * (m + mu - 1.0) * d - (m + 2.0 * mu - 2.0) * d_prev) / m;
      d_prev = d;
      d = d_next;
    }
    value += c[l] * p;
    deriv += c[l] * d;
  }
  return {value.value(), -s * 2.0 * lam * deriv.value()};
}

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError("theta must lie in [0, pi]");
  }
}

double relative_change(double now, double before, double scale) {
  if (scale == 0.0) {
    return now == before ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::fabs(now - before) / scale;
}

double moments_change(const IntegralMoments& a, const IntegralMoments& b) {
  const double scale = std::fabs(a.mass);
  return std::max({relative_change(a.mass, b.mass, scale), relative_change(a.axial, b.axial, scale),
                   relative_change(a.spread, b.spread, std::fabs(a.spread)),
                   relative_change(a.energy, b.energy, std::fabs(a.energy))});
}

// Smallest level whose panels can follow oscillations up to degree 2L.
int starting_level(std::int64_t degree, int base_panels) {
  int level = 0;
  while (static_cast<double>(base_panels) * std::ldexp(1.0, level) < static_cast<double>(degree) / 4.0) {
    ++level;
  }
  return level;
}

void check_panels(int level, const OracleOptions& options, double change) {
  if (static_cast<double>(options.base_panels) * std::ldexp(1.0, level) > options.max_panels) {
    throw ConvergenceError("quadrature did not converge by " + std::to_string(options.max_panels) +
                           " panels (relative change " + format_shortest(change) + ")");
  }
}

}  // namespace

QuadratureGrid make_grid(int level, int base_panels) {
  if (level < 0 || base_panels < 1) {
    throw ValidationError("quadrature grid needs level >= 0 and at least one base panel");
  }
  const auto& rule = panel_rule();
  QuadratureGrid grid;
  grid.level = level;
  grid.base_panels = base_panels;
  const std::int64_t panels = static_cast<std::int64_t>(base_panels) << level;
  const double h = std::numbers::pi / static_cast<double>(panels);
  grid.nodes.reserve(static_cast<std::size_t>(panels) * rule.nodes.size());
  grid.weights.reserve(grid.nodes.capacity());
  for (std::int64_t p = 0; p < panels; ++p) {
    const double left = h * static_cast<double>(p);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      grid.nodes.push_back(left + 0.5 * h * (1.0 + rule.nodes[i]));
      grid.weights.push_back(0.5 * h * rule.weights[i]);
    }
  }
  return grid;
}

double synthesize(const ZonalFunction& f, double theta) {
  check_theta(theta);
  return synthesize_both(f, theta).f;
}

double synthesize_derivative(const ZonalFunction& f, double theta) {
  check_theta(theta);
  return synthesize_both(f, theta).df;
}

double extract_coefficient(std::span<const double> values, int l, GegenbauerOrder lambda,
                           const QuadratureGrid& grid) {
  if (values.size() != grid.nodes.size()) {
    throw ValidationError("extract_coefficient: one value per grid node is required");
  }
  if (l < 0) {
    throw DomainError("Gegenbauer degree must be nonnegative");
  }
  const double lam = lambda.value();
  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double theta = grid.nodes[i];
    sum += grid.weights[i] * values[i] * gegenbauer(l, lambda, std::cos(theta)) *
           std::pow(std::sin(theta), 2.0 * lam);
  }
  return sum.value() / gegenbauer_norm(l, lambda);
}

std::vector<double> extract_coefficients(const std::function<double(double)>& f, int max_degree,
                                         GegenbauerOrder lambda, const OracleOptions& options) {
  if (max_degree < 0) {
    throw DomainError("max_degree must be nonnegative");
  }
  const double lam = lambda.value();
  auto on_grid = [&](const QuadratureGrid& grid) {
    std::vector<CompensatedSum> sums(static_cast<std::size_t>(max_degree) + 1);
    std::vector<double> c(sums.size());
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
      const double theta = grid.nodes[i];
      gegenbauer_sequence(lambda, std::cos(theta), c);
      const double w = grid.weights[i] * f(theta) * std::pow(std::sin(theta), 2.0 * lam);
      for (std::size_t l = 0; l < c.size(); ++l) {
        sums[l] += w * c[l];
      }
    }
    std::vector<double> out(sums.size());
    for (std::size_t l = 0; l < out.size(); ++l) {
      out[l] = sums[l].value() / gegenbauer_norm(static_cast<int>(l), lambda);
    }
    return out;
  };
  int level = starting_level(max_degree, options.base_panels);
  check_panels(level + 1, options, std::numeric_limits<double>::infinity());
  auto prev = on_grid(make_grid(level, options.base_panels));
  for (;;) {
    ++level;
    auto next = on_grid(make_grid(level, options.base_panels));
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t l = 0; l < next.size(); ++l) {
      scale = std::max(scale, std::fabs(next[l]));
      diff = std::max(diff, std::fabs(next[l] - prev[l]));
    }
    const double change = scale > 0.0 ? diff / scale : diff;
    if (change < options.tol) {
      return next;
    }
    check_panels(level + 1, options, change);
    prev = std::move(next);
  }
}

IntegralMoments integral_moments(const ZonalFunction& f, const QuadratureGrid& grid) {
  const double lam = f.lambda().value();
  CompensatedSum mass;
  CompensatedSum axial;
  CompensatedSum spread;
  CompensatedSum energy;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double theta = grid.nodes[i];
    const auto v = synthesize_both(f, theta);
    const double w = grid.weights[i] * std::pow(std::sin(theta), 2.0 * lam);
    const double ff = v.f * v.f * w;
    const double half = std::sin(0.5 * theta);
    mass += ff;
    axial += std::cos(theta) * ff;
    spread += 2.0 * half * half * ff;
    energy += v.df * v.df * w;
  }
  return {mass.value(), axial.value(), spread.value(), energy.value(), grid.level};
}

IntegralMoments converged_moments(const ZonalFunction& f, const OracleOptions& options) {
  int level = starting_level(f.truncation_index(), options.base_panels);
  check_panels(level + 1, options, std::numeric_limits<double>::infinity());
  auto prev = integral_moments(f, make_grid(level, options.base_panels));
  for (;;) {
    ++level;
    auto next = integral_moments(f, make_grid(level, options.base_panels));
    const double change = moments_change(next, prev);
    if (change < options.tol) {
      return next;
    }
    check_panels(level + 1, options, change);
    prev = next;
  }
}

double var_space_integral(const IntegralMoments& m) {
  if (!(std::fabs(m.axial) > kAxialFloor * std::fabs(m.mass))) {
    throw CenterOfMassError(
        "space variance undefined: the axial moment of |f|^2 vanishes (center of mass at origin)");
  }
  return m.spread * (m.mass + m.axial) / (m.axial * m.axial);
}

double var_space_integral(const ZonalFunction& f, const QuadratureGrid& grid) {
  return var_space_integral(integral_moments(f, grid));
}

double var_space_integral(const ZonalFunction& f, const OracleOptions& options) {
  return var_space_integral(converged_moments(f, options));
}

double var_momentum_integral(const IntegralMoments& m) { return m.energy / m.mass; }

double var_momentum_integral(const ZonalFunction& f, const QuadratureGrid& grid) {
  return var_momentum_integral(integral_moments(f, grid));
}

double var_momentum_integral(const ZonalFunction& f, const OracleOptions& options) {
  return var_momentum_integral(converged_moments(f, options));
}

}  // namespace sphu
