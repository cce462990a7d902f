#include "sphu/wavelet_families.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sphu/errors.hpp"
#include "sphu/format.hpp"

namespace sphu {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be a positive finite number, got " +
                          format_shortest(value));
  }
}

std::string custom_id(double a, double c, const Polynomial& q, int n) {
  return "family(a=" + format_shortest(a) + ",c=" + format_shortest(c) + ",q=" + q.to_string() +
         ",n=" + std::to_string(n) + ")";
}

bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace

FamilySpec make_family(double a, double c, Polynomial q, int n, double amplitude) {
  require_positive(a, "a");
  require_positive(c, "c");
  require_positive(amplitude, "amplitude");
  auto lambda = GegenbauerOrder::for_sphere(n);
  validate_exponent_polynomial(q);
  auto id = custom_id(a, c, q, n);
  return FamilySpec{a, c, std::move(q), lambda, amplitude, std::move(id)};
}

KernelSpec make_kernel(double a, Polynomial q, int n, double amplitude) {
  require_positive(a, "a");
  require_positive(amplitude, "amplitude");
  auto lambda = GegenbauerOrder::for_sphere(n);
  validate_exponent_polynomial(q);
  auto id = "kernel(a=" + format_shortest(a) + ",q=" + q.to_string() + ",n=" + std::to_string(n) + ")";
  return KernelSpec{a, std::move(q), lambda, amplitude, std::move(id)};
}

ExponentialFamily exponential_view(const Family& family) {
  return std::visit(
      [](const auto& f) -> ExponentialFamily {
        using T = std::decay_t<decltype(f)>;
        double c = 0.0;
        if constexpr (std::is_same_v<T, FamilySpec>) {
          c = f.c;
        }
        return ExponentialFamily{f.a, c, &f.q, f.lambda.value(), std::log(f.amplitude)};
      },
      family);
}

LogCoefficient log_coefficient(const ExponentialFamily& fam, double s, double x) {
  const double qx = (*fam.q)(x);
  double log_abs = fam.log_amplitude - s * qx + std::log((x + fam.lambda) / fam.lambda);
  int sign = 1;
  if (fam.c != 0.0) {
    if (qx == 0.0) {
      return {-std::numeric_limits<double>::infinity(), 0};
    }
    if (qx < 0.0) {
      if (!is_integer(fam.c)) {
        throw DomainError("coefficient: q(" + format_shortest(x) +
                          ") < 0 cannot be raised to the non-integer power c");
      }
      if (std::fmod(fam.c, 2.0) != 0.0) {
        sign = -1;
      }
    }
    log_abs += fam.c * std::log(s * std::fabs(qx));
  }
  if (log_abs == -std::numeric_limits<double>::infinity()) {
    sign = 0;
  }
  return {log_abs, sign};
}

double log_coefficient_ratio(const ExponentialFamily& fam, double s, double x) {
  const double qx = (*fam.q)(x);
  const double dq = fam.q->forward_difference(x);
  double r = -s * dq + std::log1p(1.0 / (x + fam.lambda));
  if (fam.c != 0.0) {
    const double rel = dq / qx;
    if (qx > 0.0 && rel > -1.0) {
      r += fam.c * std::log1p(rel);
    } else {
      r += fam.c * (std::log(std::fabs(qx + dq)) - std::log(std::fabs(qx)));
    }
  }
  return r;
}

double coefficient(const Family& family, double rho, std::int64_t l) {
  require_positive(rho, "rho");
  if (l < 0) {
    throw DomainError("coefficient: degree l must be nonnegative");
  }
  const auto fam = exponential_view(family);
  const double s = std::pow(rho, fam.a);
  const auto lc = log_coefficient(fam, s, static_cast<double>(l));
  if (lc.sign == 0) {
    return 0.0;
  }
  return lc.sign * std::exp(lc.log_abs);
}

const std::string& family_id(const Family& family) {
  return std::visit([](const auto& f) -> const std::string& { return f.id; }, family);
}

GegenbauerOrder family_order(const Family& family) {
  return std::visit([](const auto& f) { return f.lambda; }, family);
}

double family_scale_exponent(const Family& family) {
  return std::visit([](const auto& f) { return f.a; }, family);
}

int family_degree(const Family& family) {
  return std::visit([](const auto& f) { return f.q.degree(); }, family);
}

Family with_unit_scale_exponent(const Family& family) {
  return std::visit(
      [](auto f) -> Family {
        f.a = 1.0;
        f.id += "[a->1]";
        return f;
      },
      family);
}

Family preset(std::string_view name, int n, std::optional<double> param) {
  const auto lambda = GegenbauerOrder::for_sphere(n);
  const double lam = lambda.value();
  auto require_param = [&](const char* what) {
    if (!param) {
      throw ValidationError("preset " + std::string(name) + " requires parameter " + what);
    }
    require_positive(*param, what);
    return *param;
  };
  auto forbid_param = [&] {
    if (param) {
      throw ValidationError("preset " + std::string(name) + " takes no parameter");
    }
  };
  auto require_s2 = [&] {
    if (n != 2) {
      throw ValidationError("preset " + std::string(name) + " is defined on S^2 only (n = 2)");
    }
  };
  const std::string suffix = ",n=" + std::to_string(n) + ")";

  if (name == "poisson" || name == "abel_poisson") {
    double m = 0.5;
    if (name == "poisson") {
      m = require_param("m");
    } else {
      forbid_param();
    }
    auto spec = make_family(1.0, m, Polynomial({0.0, 1.0}), n, 1.0 / sphere_measure(n));
    spec.id = std::string(name) + "(m=" + format_shortest(m) + suffix;
    return spec;
  }
  if (name == "gw_kernel") {
    forbid_param();
    require_s2();
    auto spec = make_kernel(1.0, Polynomial({0.0, 1.0, 1.0}), n, 1.0 / (4.0 * std::numbers::pi));
    spec.id = "gw_kernel(n=2)";
    return spec;
  }
  if (name == "gw_wavelet") {
    forbid_param();
    require_s2();
    // (1/4pi) sqrt(2 rho l(l+1)) = (sqrt 2 / 4pi) [rho q(l)]^(1/2)
    auto spec = make_family(1.0, 0.5, Polynomial({0.0, 1.0, 1.0}), n,
                            std::numbers::sqrt2 / (4.0 * std::numbers::pi));
    spec.id = "gw_wavelet(n=2)";
    return spec;
  }
  if (name == "mexican_needlet") {
    const double k = require_param("k");
    if (!is_integer(k)) {
      throw ValidationError("mexican_needlet order k must be a positive integer");
    }
    auto spec = make_family(2.0, k, Polynomial({0.0, 2.0 * lam, 1.0}), n, 1.0);
    spec.id = "mexican_needlet(k=" + format_shortest(k) + suffix;
    return spec;
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

std::vector<PresetInfo> list_presets() {
  return {
      {"poisson", "m", "a=1, c=m, q(l)=l, amplitude=1/|S^n|"},
      {"abel_poisson", "", "alias of poisson with m=1/2"},
      {"gw_kernel", "", "kernel: a=1, q(l)=l(l+1), amplitude=1/(4 pi), n=2 only"},
      {"gw_wavelet", "", "a=1, c=1/2, q(l)=l(l+1), amplitude=sqrt(2)/(4 pi), n=2 only"},
      {"mexican_needlet", "k", "a=2, c=k, q(l)=l(l+2 lambda), amplitude=1 (convention)"},
  };
}

}  // namespace sphu
