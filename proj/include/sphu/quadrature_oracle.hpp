#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sphu/special_fn.hpp"
#include "sphu/variance_engine.hpp"

namespace sphu {

/// Composite 20-point Gauss-Legendre rule on [0, pi] with
/// base_panels * 2^level equal panels. Weights are the plain rule weights;
/// the sin^(2 lambda) factor is applied by each integral.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  int level = 0;
  int base_panels = 0;
};

struct OracleOptions {
  double tol = 1e-12;  // relative change between levels
  int base_panels = 8;
  int max_panels = 1 << 16;
};

QuadratureGrid make_grid(int level, int base_panels = 8);

/// f(cos theta) = sum_l coeffs[l] C_l^lambda(cos theta).
double synthesize(const ZonalFunction& f, double theta);
/// d/d theta of f(cos theta).
double synthesize_derivative(const ZonalFunction& f, double theta);

/// (1/h_l) int_0^pi f(cos theta) C_l(cos theta) sin^(2 lambda) theta d theta,
/// with values[i] = f at grid.nodes[i].
double extract_coefficient(std::span<const double> values, int l, GegenbauerOrder lambda,
                           const QuadratureGrid& grid);

/// Coefficients 0..max_degree of an arbitrary zonal function, refining the
/// grid until every coefficient changes by less than tol relative to the
/// largest one.
std::vector<double> extract_coefficients(const std::function<double(double)>& f, int max_degree,
                                         GegenbauerOrder lambda, const OracleOptions& options = {});

/// The integrals behind the variances, over theta in [0, pi] with weight
/// sin^(2 lambda) theta:
///   mass   = int f^2
///   axial  = int cos(theta) f^2
///   spread = int (1 - cos theta) f^2
///   energy = int (df/dtheta)^2
struct IntegralMoments {
  double mass = 0.0;
  double axial = 0.0;
  double spread = 0.0;
  double energy = 0.0;
  int level = 0;
};

IntegralMoments integral_moments(const ZonalFunction& f, const QuadratureGrid& grid);
/// Level doubling until each moment changes by less than options.tol.
IntegralMoments converged_moments(const ZonalFunction& f, const OracleOptions& options = {});

double var_space_integral(const IntegralMoments& m);
double var_space_integral(const ZonalFunction& f, const QuadratureGrid& grid);
double var_space_integral(const ZonalFunction& f, const OracleOptions& options = {});
double var_momentum_integral(const IntegralMoments& m);
double var_momentum_integral(const ZonalFunction& f, const QuadratureGrid& grid);
double var_momentum_integral(const ZonalFunction& f, const OracleOptions& options = {});

}  // namespace sphu
