#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "relqi/cli.hpp"

using namespace relqi::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "relqi_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the installed binary; stdout goes to a file.
Result run_binary(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch("stdout.txt");
  const std::string cmd = env + " \"" RELQI_CLI_PATH "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                          scratch("stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(out)};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("range parsing and number formatting") {
  const auto r = parse_range("0:1:0.25", "theta");
  REQUIRE(r.size() == 5);
  CHECK(r[4] == 1.0);
  CHECK(parse_range("0:3.14159:0.1", "theta").size() == 32);
  CHECK(parse_range("0, 0.25,0.5", "gamma") == std::vector<double>{0.0, 0.25, 0.5});
  CHECK_THROWS_AS(parse_range("0:1", "theta"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1:0", "theta"), ConfigError);
  CHECK_THROWS_AS(parse_range("", "theta"), ConfigError);
  try {
    parse_range("1,x", "gamma");
    FAIL("no throw");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "gamma");
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.5e-5) == "2.5e-05");
  CHECK(format_number(0.0) == "0");
}

TEST_CASE("spin-entropy writes the sweep table") {
  const fs::path out = scratch("s.csv");
  const Result r = run_binary("spin-entropy --theta 0:3.14159:1 --gamma 0,0.25,0.5 --nodes 8 --tol 1e-3 --out \"" +
                              out.string() + "\"");
  CHECK(r.code == 0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "theta,gamma,beta,delta_over_m,entropy_bits,p_error,grid_nodes,converged");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    REQUIRE(cells.size() == 8);
    if (std::stod(cells[1]) == 0.0) CHECK(std::abs(std::stod(cells[4])) < 1e-9);
    CHECK(cells[6] == "512");
  }
  CHECK(rows == 12);
}

TEST_CASE("output is identical across worker counts") {
  const std::string args = "spin-distinguish --theta 0.3,1.2 --gamma 0.1,0.2,0.9,2 --nodes 6 --tol 1e-2";
  const Result a = run_binary(args, "RELQI_THREADS=1");
  const Result b = run_binary(args, "RELQI_THREADS=4");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("error") != std::string::npos);  // gamma = 2 is unreachable at delta/m = 1
}

TEST_CASE("doppler reports the Doppler ratio") {
  const Result r = run_binary("doppler --v 0.5 --kA 100 --dr 1 --dz 0.1 --nodes 12");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["ratio"].get<double>() == doctest::Approx(3.0).epsilon(0.05));
  CHECK(j["verdict"].is_string());
}

TEST_CASE("channel-audit certifies the decoherence channel") {
  const Result r = run_binary("channel-audit --gamma 0.2 --nodes 8");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["is_cp"].get<bool>());
  CHECK(j["is_tp"].get<bool>());
  CHECK(j["min_choi_eig"].get<double>() >= -1e-12);
}

TEST_CASE("photon subcommands") {
  const Result d = run_binary("photon-density --kA 100 --dr 1 --dz 0.1 --nodes 8");
  REQUIRE(d.code == 0);
  const auto j = nlohmann::json::parse(d.out);
  CHECK(j["max_eigenvalue"].get<double>() < 1.0);
  const Result p = run_binary("photon-distinguish --kA 100 --dz 0.1 --dr 1 --v 0,0.5 --nodes 8 --tol 1e-3");
  CHECK(p.code == 0);
  CHECK(first_line(p.out) == "kA,delta_r,delta_z,v,p_error,p_error_closed_form,grid_nodes,converged");
}

TEST_CASE("entangle-sweep table") {
  const Result r = run_binary("entangle-sweep --delta-over-m 0.5 --beta 0,0.6 --nodes 4 --tol 1e-2 --format json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["concurrence"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j[1]["concurrence"].get<double>() < 1.0);
}

TEST_CASE("configuration errors exit with code 2 and name the field") {
  CHECK(run_binary("spin-entropy --gamma abc").code == 2);
  CHECK(slurp(scratch("stderr.txt")).find("gamma") != std::string::npos);
  CHECK(run_binary("spin-entropy --nodes 2").code == 2);
  CHECK(slurp(scratch("stderr.txt")).find("nodes") != std::string::npos);
  CHECK(run_binary("doppler --v 1.5").code == 2);
  CHECK(slurp(scratch("stderr.txt")).find("'v'") != std::string::npos);
  CHECK(run_binary("no-such-command").code == 2);
  CHECK(run_binary("spin-entropy --format xml").code == 2);
}

TEST_CASE("JSON config overrides flags") {
  const fs::path cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"gamma": [0.25], "theta": "1.5", "nodes": 6, "tol": 0.01})";
  const Result r = run_binary("spin-entropy --gamma 0,0.5 --config \"" + cfg.string() + "\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("\n1.5,0.25,") != std::string::npos);
  CHECK(r.out.find(",216,") != std::string::npos);
  std::ofstream(cfg) << R"({"gamma": "oops"})";
  CHECK(run_binary("spin-entropy --config \"" + cfg.string() + "\"").code == 2);
  std::ofstream(cfg, std::ios::trunc) << R"({"bogus": 1})";
  CHECK(run_binary("spin-entropy --config \"" + cfg.string() + "\"").code == 2);
  CHECK(slurp(scratch("stderr.txt")).find("bogus") != std::string::npos);
}

TEST_CASE("convergence report") {
  const Result r = run_binary("convergence --observable spin-entropy --nodes 8 --tol 1e-2");
  CHECK(r.code == 0);
  CHECK(first_line(r.out) == "observable,nodes_per_axis,value,delta,converged");
  const Result low = run_binary("convergence --observable spin-entropy --nodes 1");
  CHECK(low.code == 1);
  CHECK(low.out.find("false") != std::string::npos);
  CHECK(run_binary("convergence --observable spin-entropy --nodes 8 --tol 1e-2").out == r.out);

  SweepConfig c;
  c.values = {{"observable", "spin-entropy"}, {"theta", "1.5707963"}, {"gamma", "0.5"}, {"delta-over-m", "1"}};
  c.tolerance = 1e-6;
  c.nodes = 4;
  const auto coarse = convergence_report(c);
  c.nodes = 8;
  const auto fine = convergence_report(c);
  CHECK(fine[1].delta < coarse[1].delta);
}
