#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sphu/asymptotics.hpp"
#include "sphu/errors.hpp"
#include "sphu/quadrature_oracle.hpp"
#include "sphu/special_fn.hpp"
#include "sphu/variance_engine.hpp"
#include "sphu/wavelet_families.hpp"

namespace py = pybind11;
using namespace sphu;

namespace {

// Family is a variant whose alternatives have no default constructor, which
// the stock variant caster requires; Python sees this opaque wrapper instead.
struct FamilyHandle {
  Family family;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variances and uncertainty products of zonal spherical wavelets";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) {
        std::rethrow_exception(p);
      }
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    }
  });

  py::class_<GegenbauerOrder>(m, "GegenbauerOrder")
      .def(py::init<double>(), py::arg("lam"))
      .def_static("for_sphere", &GegenbauerOrder::for_sphere, py::arg("n"))
      .def_property_readonly("value", &GegenbauerOrder::value)
      .def_property_readonly("sphere_dimension", &GegenbauerOrder::sphere_dimension)
      .def("__repr__",
           [](const GegenbauerOrder& o) { return "GegenbauerOrder(" + std::to_string(o.value()) + ")"; });

  m.def("log_gamma", &log_gamma, py::arg("x"));
  m.def("log_gen_binomial", &log_gen_binomial, py::arg("l"), py::arg("lam"), py::arg("shift"));
  m.def("gegenbauer", &gegenbauer, py::arg("l"), py::arg("lam"), py::arg("t"));
  m.def("gegenbauer_theta_derivative", &gegenbauer_theta_derivative, py::arg("l"), py::arg("lam"),
        py::arg("theta"));
  m.def("gegenbauer_norm", &gegenbauer_norm, py::arg("l"), py::arg("lam"));
  m.def("sphere_measure", &sphere_measure, py::arg("n"));

  py::class_<Polynomial>(m, "Polynomial")
      .def(py::init<std::vector<double>>(), py::arg("ascending"))
      .def("__call__", &Polynomial::operator(), py::arg("x"))
      .def_property_readonly("degree", &Polynomial::degree)
      .def_property_readonly("leading", &Polynomial::leading)
      .def_property_readonly("coefficients",
                             [](const Polynomial& p) {
                               auto c = p.coefficients();
                               return std::vector<double>(c.begin(), c.end());
                             })
      .def("__repr__", [](const Polynomial& p) { return "Polynomial(" + p.to_string() + ")"; });

  py::class_<FamilyHandle>(m, "Family")
      .def_property_readonly("id", [](const FamilyHandle& h) { return family_id(h.family); })
      .def_property_readonly("lam", [](const FamilyHandle& h) { return family_order(h.family).value(); })
      .def_property_readonly("a", [](const FamilyHandle& h) { return family_scale_exponent(h.family); })
      .def_property_readonly("degree", [](const FamilyHandle& h) { return family_degree(h.family); })
      .def_property_readonly("is_kernel",
                             [](const FamilyHandle& h) { return std::holds_alternative<KernelSpec>(h.family); })
      .def("with_unit_scale_exponent",
           [](const FamilyHandle& h) { return FamilyHandle{with_unit_scale_exponent(h.family)}; })
      .def("__repr__", [](const FamilyHandle& h) { return family_id(h.family); });

  m.def(
      "make_family",
      [](double a, double c, const Polynomial& q, int n, double amplitude) {
        return FamilyHandle{make_family(a, c, q, n, amplitude)};
      },
      py::arg("a"), py::arg("c"), py::arg("q"), py::arg("n"), py::arg("amplitude") = 1.0);
  m.def(
      "make_kernel",
      [](double a, const Polynomial& q, int n, double amplitude) {
        return FamilyHandle{make_kernel(a, q, n, amplitude)};
      },
      py::arg("a"), py::arg("q"), py::arg("n"), py::arg("amplitude") = 1.0);
  m.def(
      "preset",
      [](const std::string& name, int n, std::optional<double> param) {
        return FamilyHandle{preset(name, n, param)};
      },
      py::arg("name"), py::arg("n"), py::arg("param") = py::none());
  m.def(
      "coefficient",
      [](const FamilyHandle& h, double rho, std::int64_t l) { return coefficient(h.family, rho, l); },
      py::arg("family"), py::arg("rho"), py::arg("l"));

  py::class_<ZonalFunction>(m, "ZonalFunction")
      .def(py::init<GegenbauerOrder, std::vector<double>, double, double>(), py::arg("lam"),
           py::arg("coeffs"), py::arg("tail_bound") = 0.0, py::arg("log_scale") = 0.0)
      .def_property_readonly("lam", &ZonalFunction::lambda)
      .def_property_readonly("coefficients",
                             [](const ZonalFunction& f) {
                               auto c = f.coefficients();
                               return std::vector<double>(c.begin(), c.end());
                             })
      .def_property_readonly("truncation_index", &ZonalFunction::truncation_index)
      .def_property_readonly("tail_bound", &ZonalFunction::tail_bound);

  py::class_<VarianceReport>(m, "VarianceReport")
      .def_readonly("var_s", &VarianceReport::var_s)
      .def_readonly("var_m", &VarianceReport::var_m)
      .def_readonly("u", &VarianceReport::u)
      .def_readonly("trunc_index", &VarianceReport::trunc_index)
      .def_readonly("tail_bound", &VarianceReport::tail_bound)
      .def_readonly("rho", &VarianceReport::rho)
      .def_readonly("family_id", &VarianceReport::family_id)
      .def_readonly("n", &VarianceReport::n)
      .def_readonly("asymptotic_tail", &VarianceReport::asymptotic_tail);

  py::class_<EngineOptions>(m, "EngineOptions")
      .def(py::init<>())
      .def_readwrite("truncation_tol", &EngineOptions::truncation_tol)
      .def_readwrite("max_terms", &EngineOptions::max_terms)
      .def_readwrite("direct_limit", &EngineOptions::direct_limit)
      .def_readwrite("asymptotic_tail", &EngineOptions::asymptotic_tail)
      .def_readwrite("lower_bound_slack", &EngineOptions::lower_bound_slack);

  m.def(
      "truncate",
      [](const FamilyHandle& h, double rho, double tol, std::int64_t max_terms) {
        return truncate(h.family, rho, tol, max_terms);
      },
      py::arg("family"), py::arg("rho"), py::arg("tol") = 1e-14, py::arg("max_terms") = 10'000'000);
  m.def("zonal", py::overload_cast<GegenbauerOrder, std::vector<double>>(&truncate), py::arg("lam"),
        py::arg("coeffs"));
  m.def("var_space", py::overload_cast<const ZonalFunction&>(&var_space), py::arg("f"));
  m.def("var_momentum", py::overload_cast<const ZonalFunction&>(&var_momentum), py::arg("f"));
  m.def("uncertainty", &uncertainty, py::arg("f"), py::arg("lower_bound_slack") = 1e-9);
  m.def(
      "evaluate",
      [](const FamilyHandle& h, double rho, const EngineOptions& o) { return evaluate(h.family, rho, o); },
      py::arg("family"), py::arg("rho"),
      py::arg("options") = EngineOptions{}, py::call_guard<py::gil_scoped_release>());

  m.def("synthesize", &synthesize, py::arg("f"), py::arg("theta"));
  m.def("var_space_integral",
        [](const ZonalFunction& f) { return var_space_integral(f, OracleOptions{}); }, py::arg("f"));
  m.def("var_momentum_integral",
        [](const ZonalFunction& f) { return var_momentum_integral(f, OracleOptions{}); }, py::arg("f"));

  py::class_<ExponentFit>(m, "ExponentFit")
      .def_readonly("slope", &ExponentFit::slope)
      .def_readonly("intercept", &ExponentFit::intercept)
      .def_readonly("r_squared", &ExponentFit::r_squared)
      .def_readonly("n_points", &ExponentFit::n_points);

  m.def("fit_loglog",
        [](const std::vector<double>& xs, const std::vector<double>& ys) { return fit_loglog(xs, ys); },
        py::arg("xs"), py::arg("ys"));
  m.def("power_sum", &power_sum, py::arg("d"), py::arg("nu"), py::arg("rho"), py::arg("k") = 0);
  m.def("poly_sum", &poly_sum, py::arg("p"), py::arg("Q"), py::arg("d"), py::arg("q"), py::arg("rho"));
  m.def("leading_term", &leading_term, py::arg("p"), py::arg("r"), py::arg("d"), py::arg("nu"),
        py::arg("rho"), py::arg("a_nu"));
  m.def("log_grid", &log_grid, py::arg("hi"), py::arg("lo"), py::arg("count"));
  m.def("default_rho_grid", &default_rho_grid);

  m.def(
      "sweep",
      [](const FamilyHandle& h, const std::vector<double>& grid, unsigned threads) {
        const auto r = sweep(h.family, grid, EngineOptions{}, threads);
        py::list out;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          if (r.reports[i]) {
            out.append(py::cast(*r.reports[i]));
          } else {
            out.append(py::none());
          }
        }
        return out;
      },
      py::arg("family"), py::arg("rho_grid"), py::arg("threads") = 0);
  m.def(
      "rate_verdict",
      [](const FamilyHandle& h, const std::vector<double>& grid) {
        const auto r = sweep(h.family, grid);
        return to_string(rate_check(r, h.family).verdict);
      },
      py::arg("family"), py::arg("rho_grid"));
}
