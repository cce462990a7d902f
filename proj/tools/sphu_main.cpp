#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "sphu/cli.hpp"
#include "sphu/errors.hpp"

namespace {

using json = nlohmann::json;

// Accepts "[0,1,2]" or "0,1,2".
json number_list(const std::string& text) {
  std::string s = text;
  if (s.empty() || s.front() != '[') {
    s = "[" + s + "]";
  }
  auto j = json::parse(s, nullptr, false);
  if (j.is_discarded() || !j.is_array()) {
    throw sphu::ValidationError("expected a list of numbers, got '" + text + "'");
  }
  return j;
}

struct Flags {
  std::string config;
  std::string preset;
  std::string family;
  std::string rho_grid;
  std::string q;
  std::string Q;
  std::string id;
  std::string output;
  std::string format;
  double m = 0, k = 0, rho = 0, d = 0, nu = 0, p = 0;
  double truncation_tol = 0, oracle_tol = 0, slope_tol = 0, variation_tol = 0, slack = 0;
  long long n = 0, start = 0, threads = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variances and uncertainty products of zonal spherical wavelets"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON configuration file; flags override its fields");
  app.add_option("-o,--output", f.output, "Output path, '-' for stdout");
  app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* lemma = app.add_subcommand("lemma", "Check the leading-term asymptotics of a lattice sum");
  auto* uncertainty = app.add_subcommand("uncertainty", "Variances and U of one family at one scale");
  auto* sweep = app.add_subcommand("sweep", "Evaluate a family over a grid of scales");
  auto* oracle = app.add_subcommand("oracle-check", "Compare series variances with quadrature");
  auto* presets = app.add_subcommand("presets", "List the named families");
  (void)presets;

  for (auto* sub : {uncertainty, sweep, oracle}) {
    sub->add_option("--preset", f.preset, "Preset family name");
    sub->add_option("--m", f.m, "Poisson order m");
    sub->add_option("--k", f.k, "Mexican needlet order k");
    sub->add_option("--family", f.family, "Custom family as JSON {a,c,q,n,amplitude}");
    sub->add_option("--n", f.n, "Sphere dimension n >= 2");
    sub->add_option("--truncation-tol", f.truncation_tol, "Series truncation tolerance");
  }
  for (auto* sub : {uncertainty, oracle}) {
    sub->add_option("--rho", f.rho, "Scale rho > 0");
  }
  for (auto* sub : {sweep, oracle, lemma}) {
    sub->add_option("--rho-grid", f.rho_grid, "Comma-separated scales, descending");
  }
  for (auto* sub : {uncertainty, sweep}) {
    sub->add_option("--lower-bound-slack", f.slack, "Slack on the bound U >= n/2");
  }
  for (auto* sub : {sweep, lemma}) {
    sub->add_option("--slope-tol", f.slope_tol, "Slope tolerance");
  }
  sweep->add_option("--variation-tol", f.variation_tol, "Relative variation counted as bounded");
  sweep->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  oracle->add_option("--oracle-tol", f.oracle_tol, "Relative agreement required");
  lemma->add_option("--id", f.id, "power-sum, polynomial-exponent, polynomial-product (or 3.1, 3.2, 3.3)");
  lemma->add_option("--d", f.d, "Exponent d");
  lemma->add_option("--nu", f.nu, "Power nu (power-sum)");
  lemma->add_option("--p", f.p, "Power p (polynomial-product)");
  lemma->add_option("--q", f.q, "Exponent polynomial, ascending coefficients");
  lemma->add_option("--Q", f.Q, "Product polynomial, ascending coefficients");
  lemma->add_option("--start", f.start, "First index of the power sum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    json config = json::object();
    if (!f.config.empty()) {
      config = sphu::cli::load_config_file(f.config);
      if (!config.is_object()) {
        throw sphu::ValidationError("config file must hold a JSON object");
      }
    }
    auto* sub = app.get_subcommands().front();
    config["command"] = sub->get_name();
    auto count_in = [](CLI::App* a, const std::string& name) -> std::size_t {
      try {
        return a->count(name);
      } catch (const CLI::OptionNotFound&) {
        return 0;
      }
    };
    auto given = [&](const std::string& name) { return count_in(sub, name) + count_in(&app, name) > 0; };
    auto set_if = [&](const std::string& flag, const std::string& key, const json& value) {
      if (given(flag)) {
        config[key] = value;
      }
    };
    set_if("--output", "output", f.output);
    set_if("--format", "format", f.format);
    // A family given on the command line replaces the one in the file.
    if (given("--preset")) {
      config.erase("family");
    }
    if (given("--family")) {
      config.erase("preset");
      config.erase("m");
      config.erase("k");
    }
    if (given("--rho")) {
      config.erase("rho_grid");
    }
    if (given("--rho-grid")) {
      config.erase("rho");
    }
    set_if("--preset", "preset", f.preset);
    set_if("--m", "m", f.m);
    set_if("--k", "k", f.k);
    if (given("--family")) {
      config["family"] = sphu::cli::parse_relaxed_json(f.family);
    }
    set_if("--n", "n", f.n);
    set_if("--rho", "rho", f.rho);
    if (given("--rho-grid")) {
      config["rho_grid"] = number_list(f.rho_grid);
    }
    set_if("--truncation-tol", "truncation_tol", f.truncation_tol);
    set_if("--lower-bound-slack", "lower_bound_slack", f.slack);
    set_if("--slope-tol", "slope_tol", f.slope_tol);
    set_if("--variation-tol", "variation_tol", f.variation_tol);
    set_if("--threads", "threads", f.threads);
    set_if("--oracle-tol", "oracle_tol", f.oracle_tol);
    set_if("--id", "id", f.id);
    set_if("--d", "d", f.d);
    set_if("--nu", "nu", f.nu);
    set_if("--p", "p", f.p);
    if (given("--q")) {
      config["q"] = number_list(f.q);
    }
    if (given("--Q")) {
      config["Q"] = number_list(f.Q);
    }
    set_if("--start", "start", f.start);
    return sphu::cli::run_json(config, std::cout, std::cerr);
  } catch (const sphu::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
