#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sphu/polynomial.hpp"
#include "sphu/special_fn.hpp"

namespace sphu {

/// Zonal wavelet family with Gegenbauer coefficients
///   amplitude * [rho^a q(l)]^c * exp(-rho^a q(l)) * (l + lambda) / lambda.
struct FamilySpec {
  double a;
  double c;
  Polynomial q;
  GegenbauerOrder lambda;
  double amplitude = 1.0;
  std::string id;
};

/// The c = 0 member of the same shape (a smoothing kernel rather than a
/// wavelet): amplitude * exp(-rho^a q(l)) * (l + lambda) / lambda.
struct KernelSpec {
  double a;
  Polynomial q;
  GegenbauerOrder lambda;
  double amplitude = 1.0;
  std::string id;
};

using Family = std::variant<FamilySpec, KernelSpec>;

FamilySpec make_family(double a, double c, Polynomial q, int n, double amplitude = 1.0);
KernelSpec make_kernel(double a, Polynomial q, int n, double amplitude = 1.0);

double coefficient(const Family& family, double rho, std::int64_t l);

const std::string& family_id(const Family& family);
GegenbauerOrder family_order(const Family& family);
double family_scale_exponent(const Family& family);  // a
int family_degree(const Family& family);             // nu = deg q

/// Same family with a = 1, so that evaluating it at rho^a reproduces the
/// original at rho.
Family with_unit_scale_exponent(const Family& family);

/// Named families. `param` is m for poisson and k for mexican_needlet.
Family preset(std::string_view name, int n, std::optional<double> param = std::nullopt);

struct PresetInfo {
  std::string name;
  std::string parameter;  // empty when the preset takes none
  std::string mapping;
};

std::vector<PresetInfo> list_presets();

/// Flattened view used by the numerical kernels; c = 0 for kernels.
struct ExponentialFamily {
  double a;
  double c;
  const Polynomial* q;
  double lambda;
  double log_amplitude;
};

ExponentialFamily exponential_view(const Family& family);

/// ln|f(x)| and sign of the coefficient at (possibly non-integer) x, with
/// s = rho^a already applied. sign == 0 marks an exact zero.
struct LogCoefficient {
  double log_abs;
  int sign;
};

LogCoefficient log_coefficient(const ExponentialFamily& family, double s, double x);

/// ln|f(x + 1) / f(x)| evaluated from the family formula without
/// subtracting two large logarithms.
double log_coefficient_ratio(const ExponentialFamily& family, double s, double x);

}  // namespace sphu
