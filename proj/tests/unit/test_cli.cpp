#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sphu/cli.hpp"
#include "sphu/errors.hpp"

using namespace sphu;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(const json& config) {
  std::ostringstream out, err;
  const int status = cli::run_json(config, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("sphu_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("uncertainty with a custom family") {
  const auto r = run({{"command", "uncertainty"},
                      {"family", {{"a", 1}, {"c", 1}, {"q", {0, 1}}, {"n", 2}}},
                      {"rho", 0.1}});
  CHECK(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["u"].get<double>() >= 1.0);
  CHECK(j["family_id"] == "family(a=1,c=1,q=[0,1],n=2)");
  CHECK(j["lower_bound_slack"].get<double>() == 1e-9);
  CHECK(j["metadata"].contains("timestamp"));
}

TEST_CASE("uncertainty csv") {
  const auto r = run({{"command", "uncertainty"}, {"preset", "gw_kernel"}, {"rho", 0.01}, {"format", "csv"}});
  CHECK(r.status == 0);
  CHECK(r.out.rfind("rho,var_s,var_m,u,trunc_index,tail_bound\n", 0) == 0);
  CHECK(count_lines(r.out) == 2);
}

TEST_CASE("sweep of a poisson preset is bounded") {
  const auto r = run({{"command", "sweep"}, {"preset", "poisson"}, {"m", 2}, {"n", 2}});
  CHECK(r.status == 0);
  CHECK(r.out.rfind("rho,var_s,var_m,u,trunc_index,tail_bound\n", 0) == 0);
  CHECK(count_lines(r.out) == 14);
  const auto summary = json::parse(r.err);
  CHECK(summary["verdict"] == "bounded");
  CHECK(summary["failed_points"] == 0);
  CHECK(summary["slope_tol"].get<double>() == 0.05);
}

TEST_CASE("lemma by numeric alias") {
  const auto r = run({{"command", "lemma"}, {"id", "3.1"}, {"d", 1}, {"nu", 1}});
  CHECK(r.status == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header ==
        "lemma,d,nu,p,q,Q,slope,expected_slope,slope_tol,r_squared,n_points,correction_slope,"
        "correction_min_slope,passed");
  CHECK(row.rfind("power-sum,1,1,0,,,", 0) == 0);
  CHECK(row.find(",true") != std::string::npos);

  const auto j = json::parse(
      run({{"command", "lemma"}, {"id", "polynomial-product"}, {"p", 1}, {"Q", {5, 1}}, {"d", 2},
           {"q", {0, 1, 0, 1}}, {"slope_tol", 0.015}, {"format", "json"}}).out);
  CHECK(j["passed"] == true);
  CHECK(std::fabs(j["fit"]["slope"].get<double>() + 4.0 / 3.0) < 0.02);
}

TEST_CASE("oracle-check") {
  auto r = run({{"command", "oracle-check"}, {"preset", "gw_kernel"}, {"rho", 0.1}});
  CHECK(r.status == 0);
  CHECK(r.out.find(",1e-08,true") != std::string::npos);
  r = run({{"command", "oracle-check"}, {"preset", "poisson"}, {"m", 1}, {"n", 3}, {"oracle_tol", 1e-30}});
  CHECK(r.status == 2);
  CHECK(r.out.find(",false") != std::string::npos);
}

TEST_CASE("presets listing") {
  const auto r = run({{"command", "presets"}});
  CHECK(r.status == 0);
  CHECK(r.out.rfind("name,parameter,mapping\n", 0) == 0);
  CHECK(r.out.find("mexican_needlet,k,") != std::string::npos);
}

TEST_CASE("validation failures exit with 1") {
  CHECK(run({{"command", "uncertainty"}, {"preset", "gw_kernel"}, {"rho", 0.1}, {"bogus", 1}}).status == 1);
  CHECK(run({{"command", "uncertainty"}, {"preset", "gw_kernel"}}).status == 1);
  CHECK(run({{"command", "uncertainty"}, {"preset", "gw_kernel"}, {"rho", -1}}).status == 1);
  CHECK(run({{"command", "oracle-check"}, {"preset", "gw_kernel"}, {"rho", 0.1}, {"rho_grid", {0.1, 0.01}}})
            .status == 1);
  CHECK(run({{"command", "sweep"}, {"preset", "gw_kernel"}, {"rho_grid", {0.01, 0.1}}}).status == 1);
  CHECK(run({{"command", "sweep"}, {"preset", "gw_kernel"}, {"threads", 2}, {"rho", 0.1}}).status == 1);
  CHECK(run({{"command", "sweep"}, {"preset", "poisson"}}).status == 1);
  CHECK(run({{"command", "sweep"}, {"preset", "gw_kernel"}, {"n", 3}}).status == 1);
  CHECK(run({{"command", "uncertainty"}, {"family", {{"a", 1}, {"c", 1}, {"q", {3, -1}}}}, {"rho", 0.1}})
            .status == 1);
  CHECK(run({{"command", "lemma"}, {"id", "9.9"}}).status == 1);
  CHECK(run({{"command", "lemma"}, {"id", "3.2"}, {"d", 1}}).status == 1);
  CHECK(run({{"command", "lemma"}, {"id", "3.1"}, {"rho_grid", {1e-3, 1e-4}}}).status == 1);
  CHECK(run({{"command", "explode"}}).status == 1);
  CHECK(run({{"command", "presets"}, {"format", "xml"}}).status == 1);
  CHECK(run({{"command", "presets"}, {"rho", 0.1}}).status == 1);
}

TEST_CASE("numerical failures exit with 2") {
  const auto r = run({{"command", "uncertainty"}, {"preset", "mexican_needlet"}, {"k", 1}, {"rho", 10.0}});
  CHECK(r.status == 2);
  const auto s = run({{"command", "sweep"}, {"preset", "mexican_needlet"}, {"k", 1},
                      {"rho_grid", {10.0, 1.0, 0.1}}});
  CHECK(s.status == 2);
  CHECK(s.out.find("10,nan,nan,nan,,nan\n") != std::string::npos);
}

TEST_CASE("file output: summary, atomic write and determinism") {
  const auto dir = scratch_dir("files");
  const auto path = (dir / "poisson.csv").string();
  const json config = {{"command", "sweep"}, {"preset", "poisson"}, {"m", 1}, {"n", 3},
                       {"rho_grid", {1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5}}, {"output", path}};
  auto r = run(config);
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  const auto first = slurp(path);
  const auto summary = json::parse(slurp(path + ".summary.json"));
  CHECK(summary["verdict"] == "bounded");
  CHECK(summary["metadata"]["command"] == "sweep");

  r = run(config);
  CHECK(slurp(path) == first);

  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    CHECK((name == "poisson.csv" || name == "poisson.csv.summary.json"));
  }

  cli::write_file_atomic((dir / "x.txt").string(), "abc");
  CHECK(slurp(dir / "x.txt") == "abc");
  CHECK_THROWS(cli::write_file_atomic((dir / "missing" / "x.txt").string(), "abc"));
  fs::remove_all(dir);
}

TEST_CASE("config files and relaxed json") {
  const auto j = cli::parse_relaxed_json("{a:1,c:1,q:[0,1],n:2}");
  CHECK(j["a"] == 1);
  CHECK(j["q"] == json::array({0, 1}));
  CHECK(cli::parse_relaxed_json(R"({"a": 2})")["a"] == 2);
  CHECK_THROWS_AS(cli::parse_relaxed_json("{a:"), ValidationError);

  const auto dir = scratch_dir("config");
  const auto path = dir / "run.json";
  std::ofstream(path) << R"({"command": "uncertainty", "preset": "poisson", "m": 1, "rho": 0.1})";
  auto config = cli::load_config_file(path.string());
  CHECK(run(config).status == 0);
  CHECK_THROWS_AS(cli::load_config_file((dir / "absent.json").string()), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("parse_config defaults") {
  auto c = cli::parse_config({{"command", "sweep"}, {"preset", "gw_kernel"}});
  CHECK(c.command == cli::Command::Sweep);
  CHECK(c.format == cli::Format::Csv);
  CHECK(c.slope_tol == 0.05);
  CHECK(c.variation_tol == 0.05);
  CHECK(c.output == "-");
  c = cli::parse_config({{"command", "uncertainty"}, {"preset", "gw_kernel"}, {"rho", 0.1}});
  CHECK(c.format == cli::Format::Json);
  c = cli::parse_config({{"command", "lemma"}, {"id", "3.1"}});
  CHECK(c.slope_tol == 0.01);
  CHECK(cli::command_name(cli::parse_command("oracle-check")) == "oracle-check");
}
