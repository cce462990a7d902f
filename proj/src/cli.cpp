#include "sphu/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "sphu/errors.hpp"
#include "sphu/format.hpp"
#include "sphu/quadrature_oracle.hpp"

namespace sphu::cli {

namespace {

using json = nlohmann::json;

constexpr const char* kVersion = "0.1.0";

const std::set<std::string>& allowed_keys(Command c) {
  static const std::set<std::string> common = {"command", "output", "format"};
  static const std::map<Command, std::set<std::string>> table = {
      {Command::Uncertainty,
       {"preset", "m", "k", "family", "n", "rho", "truncation_tol", "lower_bound_slack"}},
      {Command::Sweep,
       {"preset", "m", "k", "family", "n", "rho_grid", "truncation_tol", "lower_bound_slack",
        "slope_tol", "variation_tol", "threads"}},
      {Command::OracleCheck,
       {"preset", "m", "k", "family", "n", "rho", "rho_grid", "truncation_tol", "oracle_tol"}},
      {Command::Lemma, {"id", "d", "nu", "p", "q", "Q", "start", "rho_grid", "slope_tol"}},
      {Command::Presets, {}},
  };
  static const auto merged = [] {
    std::map<Command, std::set<std::string>> m;
    for (const auto& [cmd, keys] : table) {
      auto all = keys;
      all.insert(common.begin(), common.end());
      m[cmd] = std::move(all);
    }
    return m;
  }();
  return merged.at(c);
}

double get_number(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) {
    throw ValidationError("field '" + key + "' must be a number");
  }
  return v.get<double>();
}

double get_positive(const json& j, const std::string& key) {
  const double v = get_number(j, key);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError("field '" + key + "' must be positive, got " + format_shortest(v));
  }
  return v;
}

std::int64_t get_integer(const json& j, const std::string& key) {
  const double v = get_number(j, key);
  if (std::floor(v) != v || std::fabs(v) > 9e15) {
    throw ValidationError("field '" + key + "' must be an integer");
  }
  return static_cast<std::int64_t>(v);
}

std::string get_string(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_string()) {
    throw ValidationError("field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.empty()) {
    throw ValidationError("field '" + key + "' must be a non-empty array of numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw ValidationError("field '" + key + "' must contain only numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

Polynomial get_polynomial(const json& j, const std::string& key) {
  try {
    return Polynomial(get_numbers(j, key));
  } catch (const ValidationError& e) {
    throw ValidationError("field '" + key + "': " + e.what());
  }
}

int get_dimension(const json& j, const std::string& key) {
  const auto n = get_integer(j, key);
  if (n < 2 || n > 1000) {
    throw ValidationError("field '" + key + "' (sphere dimension) must be an integer in [2, 1000]");
  }
  return static_cast<int>(n);
}

Family family_from_object(const json& obj, std::optional<int> top_n, int& n_out) {
  if (!obj.is_object()) {
    throw ValidationError("field 'family' must be an object {a, c, q, n, amplitude}");
  }
  for (const auto& [key, _] : obj.items()) {
    if (key != "a" && key != "c" && key != "q" && key != "n" && key != "amplitude") {
      throw ValidationError("unknown field 'family." + key + "'");
    }
  }
  for (const char* key : {"a", "c", "q"}) {
    if (!obj.contains(key)) {
      throw ValidationError("field 'family." + std::string(key) + "' is required");
    }
  }
  int n = top_n.value_or(2);
  if (obj.contains("n")) {
    n = get_dimension(obj, "n");
    if (top_n && *top_n != n) {
      throw ValidationError("field 'n' conflicts with 'family.n'");
    }
  }
  n_out = n;
  const double amplitude = obj.contains("amplitude") ? get_number(obj, "amplitude") : 1.0;
  auto q = get_polynomial(obj, "q");
  try {
    return make_family(get_number(obj, "a"), get_number(obj, "c"), std::move(q), n, amplitude);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field 'family': ") + e.what());
  }
}

Family family_from_config(const json& j, int& n_out) {
  const bool has_preset = j.contains("preset");
  const bool has_family = j.contains("family");
  if (has_preset == has_family) {
    throw ValidationError("exactly one of 'preset' or 'family' is required");
  }
  std::optional<int> top_n;
  if (j.contains("n")) {
    top_n = get_dimension(j, "n");
  }
  if (has_family) {
    if (j.contains("m") || j.contains("k")) {
      throw ValidationError("fields 'm' and 'k' apply to presets only");
    }
    return family_from_object(j.at("family"), top_n, n_out);
  }
  if (j.contains("m") && j.contains("k")) {
    throw ValidationError("give at most one of 'm' and 'k'");
  }
  std::optional<double> param;
  if (j.contains("m")) {
    param = get_number(j, "m");
  } else if (j.contains("k")) {
    param = get_number(j, "k");
  }
  const std::string name = get_string(j, "preset");
  const bool wants_m = name == "poisson";
  const bool wants_k = name == "mexican_needlet";
  if ((j.contains("m") && !wants_m) || (j.contains("k") && !wants_k)) {
    throw ValidationError("preset '" + name + "' does not take field '" +
                          std::string(j.contains("m") ? "m" : "k") + "'");
  }
  n_out = top_n.value_or(2);
  return preset(name, n_out, param);
}

std::vector<double> get_grid(const json& j, const std::string& key, bool decreasing) {
  auto grid = get_numbers(j, key);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw ValidationError("field '" + key + "' must contain positive finite values");
    }
    if (decreasing && i > 0 && !(grid[i] < grid[i - 1])) {
      throw ValidationError("field '" + key + "' must be strictly decreasing");
    }
  }
  return grid;
}

LemmaParams lemma_from_config(const json& j) {
  if (!j.contains("id")) {
    throw ValidationError("field 'id' is required for the lemma command");
  }
  LemmaParams p;
  p.kind = parse_lemma_kind(get_string(j, "id"));
  auto forbid = [&](const char* key) {
    if (j.contains(key)) {
      throw ValidationError("field '" + std::string(key) + "' does not apply to lemma '" +
                            lemma_name(p.kind) + "'");
    }
  };
  auto require = [&](const char* key) {
    if (!j.contains(key)) {
      throw ValidationError("field '" + std::string(key) + "' is required for lemma '" +
                            lemma_name(p.kind) + "'");
    }
  };
  if (j.contains("d")) {
    p.d = get_positive(j, "d");
  }
  switch (p.kind) {
    case LemmaKind::PowerSum:
      forbid("q");
      forbid("Q");
      forbid("p");
      if (j.contains("nu")) {
        p.nu = get_positive(j, "nu");
      }
      if (j.contains("start")) {
        p.k = get_integer(j, "start");
        if (p.k < 0) {
          throw ValidationError("field 'start' must be nonnegative");
        }
      }
      break;
    case LemmaKind::PolynomialExponent:
      forbid("nu");
      forbid("start");
      forbid("Q");
      forbid("p");
      require("q");
      p.q = get_polynomial(j, "q");
      break;
    case LemmaKind::PolynomialProduct:
      forbid("nu");
      forbid("start");
      require("q");
      require("Q");
      p.q = get_polynomial(j, "q");
      p.Q = get_polynomial(j, "Q");
      if (j.contains("p")) {
        p.p = get_number(j, "p");
        if (!(p.p >= 0.0)) {
          throw ValidationError("field 'p' must be nonnegative");
        }
      }
      break;
  }
  if (p.q) {
    try {
      validate_exponent_polynomial(*p.q);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("field 'q': ") + e.what());
    }
  }
  return p;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') {
      out += '"';
    }
    out += ch;
  }
  return out + "\"";
}

std::string timestamp() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json metadata(const RunConfig& c) {
  return {{"tool", "sphu"}, {"version", kVersion}, {"command", command_name(c.command)},
          {"timestamp", timestamp()}};
}

json fit_json(const ExponentFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
          {"n_points", f.n_points}};
}

json report_json(const VarianceReport& r, double slack) {
  return {{"family_id", r.family_id},
          {"n", r.n},
          {"rho", r.rho},
          {"var_s", r.var_s},
          {"var_m", r.var_m},
          {"u", r.u},
          {"trunc_index", r.trunc_index},
          {"tail_bound", r.tail_bound},
          {"asymptotic_tail", r.asymptotic_tail},
          {"lower_bound", r.n / 2.0},
          {"lower_bound_slack", slack}};
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.output == "-") {
    out << content;
  } else {
    write_file_atomic(c.output, content);
  }
}

int run_uncertainty(const RunConfig& c, std::ostream& out) {
  const auto r = evaluate(*c.family, *c.rho, c.engine);
  std::string content;
  if (c.format == Format::Json) {
    auto j = report_json(r, c.engine.lower_bound_slack);
    j["metadata"] = metadata(c);
    content = j.dump(2) + "\n";
  } else {
    content = "rho,var_s,var_m,u,trunc_index,tail_bound\n" + format_17g(r.rho) + "," +
              format_17g(r.var_s) + "," + format_17g(r.var_m) + "," + format_17g(r.u) + "," +
              std::to_string(r.trunc_index) + "," + format_17g(r.tail_bound) + "\n";
  }
  emit(c, content, out);
  return 0;
}

int run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto grid = c.rho_grid.value_or(default_rho_grid());
  const auto result = sweep(*c.family, grid, c.engine, c.threads);
  const auto check = rate_check(result, *c.family, c.slope_tol, c.variation_tol);
  const double n = family_order(*c.family).sphere_dimension();

  json errors = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (result.errors[i]) {
      errors.push_back(
          {{"rho", grid[i]}, {"kind", result.errors[i]->kind}, {"message", result.errors[i]->message}});
    }
  }
  json summary = {{"family_id", result.family_id},
                  {"n", n},
                  {"points", grid.size()},
                  {"failed_points", errors.size()},
                  {"errors", errors},
                  {"verdict", to_string(check.verdict)},
                  {"bound_slope", check.bound_slope},
                  {"slope_tol", check.slope_tol},
                  {"variation", check.variation},
                  {"variation_tol", check.variation_tol},
                  {"lower_bound", n / 2.0},
                  {"lower_bound_slack", c.engine.lower_bound_slack},
                  {"fit", check.fit ? fit_json(*check.fit) : json(nullptr)},
                  {"diagnostics", check.diagnostics}};

  std::ostringstream csv;
  csv << "rho,var_s,var_m,u,trunc_index,tail_bound\n";
  json rows = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& r = result.reports[i];
    if (r) {
      csv << format_17g(grid[i]) << ',' << format_17g(r->var_s) << ',' << format_17g(r->var_m) << ','
          << format_17g(r->u) << ',' << r->trunc_index << ',' << format_17g(r->tail_bound) << '\n';
      rows.push_back(report_json(*r, c.engine.lower_bound_slack));
    } else {
      csv << format_17g(grid[i]) << ",nan,nan,nan,,nan\n";
      rows.push_back({{"rho", grid[i]}, {"error", result.errors[i]->message}});
    }
  }

  if (c.format == Format::Json) {
    json j = {{"rows", rows}, {"summary", summary}, {"metadata", metadata(c)}};
    emit(c, j.dump(2) + "\n", out);
  } else {
    summary["metadata"] = metadata(c);
    emit(c, csv.str(), out);
    if (c.output == "-") {
      err << summary.dump(2) << "\n";
    } else {
      write_file_atomic(c.output + ".summary.json", summary.dump(2) + "\n");
    }
  }
  const bool failed = result.partial() || check.verdict == RateVerdict::Fail ||
                      check.verdict == RateVerdict::Inconclusive;
  return failed ? 2 : 0;
}

int run_lemma(const RunConfig& c, std::ostream& out) {
  const auto& p = *c.lemma;
  std::vector<double> grid;
  if (c.rho_grid) {
    grid = *c.rho_grid;
  } else {
    grid = lemma_rho_grid(p.kind == LemmaKind::PowerSum ? 1 : p.q->degree());
  }
  const auto r = lemma_check(p, grid, c.slope_tol);
  const double nu = p.kind == LemmaKind::PowerSum ? p.nu : p.q->degree();
  const std::string q = p.q ? p.q->to_string() : "";
  const std::string Q = p.Q ? p.Q->to_string() : "";
  const double corr = r.correction ? r.correction->slope : std::nan("");

  std::string content;
  if (c.format == Format::Json) {
    json rows = json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"rho", row.rho}, {"sum", row.sum}, {"leading", row.leading},
                      {"rel_error", row.rel_error}});
    }
    json j = {{"lemma", lemma_name(p.kind)},
              {"d", p.d},
              {"nu", nu},
              {"p", p.p},
              {"q", q},
              {"Q", Q},
              {"fit", fit_json(r.fit)},
              {"expected_slope", r.expected_slope},
              {"slope_tol", r.slope_tol},
              {"slope_ok", r.slope_ok},
              {"correction", r.correction ? fit_json(*r.correction) : json(nullptr)},
              {"correction_min_slope", r.correction_min_slope},
              {"correction_ok", r.correction_ok},
              {"passed", r.passed()},
              {"rows", rows},
              {"metadata", metadata(c)}};
    content = j.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "lemma,d,nu,p,q,Q,slope,expected_slope,slope_tol,r_squared,n_points,"
           "correction_slope,correction_min_slope,passed\n";
    csv << lemma_name(p.kind) << ',' << format_17g(p.d) << ',' << format_17g(nu) << ','
        << format_17g(p.p) << ',' << csv_field(q) << ',' << csv_field(Q) << ','
        << format_17g(r.fit.slope) << ',' << format_17g(r.expected_slope) << ','
        << format_17g(r.slope_tol) << ',' << format_17g(r.fit.r_squared) << ',' << r.fit.n_points
        << ',' << format_17g(corr) << ',' << format_17g(r.correction_min_slope) << ','
        << (r.passed() ? "true" : "false") << '\n';
    content = csv.str();
  }
  emit(c, content, out);
  return r.passed() ? 0 : 2;
}

int run_oracle_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<double> grid;
  if (c.rho) {
    grid = {*c.rho};
  } else {
    grid = c.rho_grid.value_or(std::vector<double>{0.01, 0.1, 1.0});
  }
  bool all_ok = true;
  std::ostringstream csv;
  csv << "rho,var_s_series,var_s_integral,var_s_rel_err,var_m_series,var_m_integral,var_m_rel_err,"
         "tol,passed\n";
  json rows = json::array();
  for (double rho : grid) {
    try {
      const auto z = truncate(*c.family, rho, c.engine.truncation_tol, c.engine.max_terms);
      const auto series = uncertainty(z, c.engine.lower_bound_slack);
      const auto m = converged_moments(z);
      const double vs = var_space_integral(m);
      const double vm = var_momentum_integral(m);
      const double es = std::fabs(vs - series.var_s) / std::fabs(series.var_s);
      const double em = std::fabs(vm - series.var_m) / std::fabs(series.var_m);
      const bool ok = es <= c.oracle_tol && em <= c.oracle_tol;
      all_ok = all_ok && ok;
      csv << format_17g(rho) << ',' << format_17g(series.var_s) << ',' << format_17g(vs) << ','
          << format_17g(es) << ',' << format_17g(series.var_m) << ',' << format_17g(vm) << ','
          << format_17g(em) << ',' << format_17g(c.oracle_tol) << ',' << (ok ? "true" : "false")
          << '\n';
      rows.push_back({{"rho", rho},
                      {"var_s_series", series.var_s},
                      {"var_s_integral", vs},
                      {"var_s_rel_err", es},
                      {"var_m_series", series.var_m},
                      {"var_m_integral", vm},
                      {"var_m_rel_err", em},
                      {"tol", c.oracle_tol},
                      {"passed", ok}});
    } catch (const NumericalError& e) {
      all_ok = false;
      err << "rho=" << format_shortest(rho) << ": " << e.what() << "\n";
      csv << format_17g(rho) << ",nan,nan,nan,nan,nan,nan," << format_17g(c.oracle_tol) << ",false\n";
      rows.push_back({{"rho", rho}, {"error", e.what()}, {"tol", c.oracle_tol}, {"passed", false}});
    }
  }
  if (c.format == Format::Json) {
    json j = {{"family_id", family_id(*c.family)}, {"rows", rows}, {"metadata", metadata(c)}};
    emit(c, j.dump(2) + "\n", out);
  } else {
    emit(c, csv.str(), out);
  }
  return all_ok ? 0 : 2;
}

int run_presets(const RunConfig& c, std::ostream& out) {
  const auto presets = list_presets();
  if (c.format == Format::Json) {
    json arr = json::array();
    for (const auto& p : presets) {
      arr.push_back({{"name", p.name}, {"parameter", p.parameter}, {"mapping", p.mapping}});
    }
    emit(c, json{{"presets", arr}, {"metadata", metadata(c)}}.dump(2) + "\n", out);
    return 0;
  }
  std::string content = "name,parameter,mapping\n";
  for (const auto& p : presets) {
    content += csv_field(p.name) + "," + csv_field(p.parameter) + "," + csv_field(p.mapping) + "\n";
  }
  emit(c, content, out);
  return 0;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "lemma") return Command::Lemma;
  if (name == "uncertainty") return Command::Uncertainty;
  if (name == "sweep") return Command::Sweep;
  if (name == "oracle-check") return Command::OracleCheck;
  if (name == "presets") return Command::Presets;
  throw ValidationError("unknown command '" + name +
                        "' (expected lemma, uncertainty, sweep, oracle-check or presets)");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Lemma:
      return "lemma";
    case Command::Uncertainty:
      return "uncertainty";
    case Command::Sweep:
      return "sweep";
    case Command::OracleCheck:
      return "oracle-check";
    case Command::Presets:
      return "presets";
  }
  return "presets";
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) {
    throw ValidationError("configuration must be a JSON object");
  }
  if (!j.contains("command")) {
    throw ValidationError("field 'command' is required");
  }
  RunConfig c;
  c.command = parse_command(get_string(j, "command"));
  const auto& allowed = allowed_keys(c.command);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw ValidationError("unknown field '" + key + "' for command '" + command_name(c.command) + "'");
    }
  }

  c.format = (c.command == Command::Uncertainty) ? Format::Json : Format::Csv;
  if (j.contains("format")) {
    const auto f = get_string(j, "format");
    if (f == "csv") {
      c.format = Format::Csv;
    } else if (f == "json") {
      c.format = Format::Json;
    } else {
      throw ValidationError("field 'format' must be 'csv' or 'json'");
    }
  }
  if (j.contains("output")) {
    c.output = get_string(j, "output");
    if (c.output.empty()) {
      throw ValidationError("field 'output' must not be empty");
    }
  }
  if (j.contains("truncation_tol")) {
    c.engine.truncation_tol = get_positive(j, "truncation_tol");
    if (!(c.engine.truncation_tol < 1.0)) {
      throw ValidationError("field 'truncation_tol' must lie in (0, 1)");
    }
  }
  if (j.contains("lower_bound_slack")) {
    c.engine.lower_bound_slack = get_positive(j, "lower_bound_slack");
  }
  if (j.contains("oracle_tol")) {
    c.oracle_tol = get_positive(j, "oracle_tol");
  }
  c.slope_tol = (c.command == Command::Lemma) ? 0.01 : 0.05;
  if (j.contains("slope_tol")) {
    c.slope_tol = get_positive(j, "slope_tol");
  }
  if (j.contains("variation_tol")) {
    c.variation_tol = get_positive(j, "variation_tol");
  }
  if (j.contains("threads")) {
    const auto t = get_integer(j, "threads");
    if (t < 0 || t > 1024) {
      throw ValidationError("field 'threads' must lie in [0, 1024]");
    }
    c.threads = static_cast<unsigned>(t);
  }

  switch (c.command) {
    case Command::Uncertainty:
      if (!j.contains("rho")) {
        throw ValidationError("field 'rho' is required for the uncertainty command");
      }
      break;
    case Command::OracleCheck:
      if (j.contains("rho") && j.contains("rho_grid")) {
        throw ValidationError("give exactly one of 'rho' and 'rho_grid'");
      }
      break;
    default:
      break;
  }
  if (j.contains("rho")) {
    c.rho = get_positive(j, "rho");
  }
  if (j.contains("rho_grid")) {
    c.rho_grid = get_grid(j, "rho_grid", c.command != Command::OracleCheck);
  }

  if (c.command == Command::Uncertainty || c.command == Command::Sweep ||
      c.command == Command::OracleCheck) {
    c.family = family_from_config(j, c.n);
  }
  if (c.command == Command::Lemma) {
    c.lemma = lemma_from_config(j);
  }
  return c;
}

json parse_relaxed_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
  }
  static const std::regex bare_key(R"(([{,]\s*)([A-Za-z_][A-Za-z0-9_]*)\s*:)");
  const std::string quoted = std::regex_replace(text, bare_key, "$1\"$2\":");
  try {
    return json::parse(quoted);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot read config file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_relaxed_json(ss.str());
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw ValidationError("cannot write output file '" + path + "'");
    }
    f << content;
    f.flush();
    if (!f) {
      throw ValidationError("failed writing output file '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ValidationError("cannot move output into place at '" + path + "'");
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::Uncertainty:
      return run_uncertainty(config, out);
    case Command::Sweep:
      return run_sweep(config, out, err);
    case Command::Lemma:
      return run_lemma(config, out);
    case Command::OracleCheck:
      return run_oracle_check(config, out, err);
    case Command::Presets:
      return run_presets(config, out);
  }
  return 1;
}

int run_json(const json& config, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_config(config), out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error (" << error_kind(e) << "): " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sphu::cli
