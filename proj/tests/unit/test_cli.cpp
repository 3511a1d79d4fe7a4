#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "friable");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = friable::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({}).code == friable::cli::kUsage);
  CHECK(run({"psi", "--x", "1e4", "--y", "10", "--bogus"}).code == friable::cli::kUsage);
  CHECK(run({"nope"}).code == friable::cli::kUsage);
  CHECK(run({"psi", "--x", "1.5", "--y", "10"}).code == friable::cli::kUsage);
  CHECK(run({"--const", "nonsense=1", "alpha", "--x", "1e4", "--y", "10"}).code == friable::cli::kUsage);
  CHECK(run({"psi", "--x", "1e4", "--y", "10", "--yprime", "20"}).code == friable::cli::kDomain);
  CHECK(run({"equid", "--mode", "residues", "--x", "1e4", "--y", "100", "--q", "2"}).code ==
        friable::cli::kDomain);
  CHECK(run({"abc", "--N", "1e6", "--y", "100"}).code == friable::cli::kCapacity);
  CHECK(run({"--help"}).code == friable::cli::kOk);
}

TEST_CASE("psi output") {
  const Run r = run({"psi", "--x", "1e5", "--y", "50"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["tool"] == "friable");
  CHECK(j["command"] == "psi");
  CHECK(j["config"]["x"] == "1e5");
  CHECK(j["result"]["psi"] == 9639);
  CHECK(j["constants"].contains("alpha_main_term"));
  CHECK(j.contains("regime_ok"));
}

TEST_CASE("constant overrides are echoed") {
  const Run r = run({"--const", "alpha_main_term=0.25", "alpha", "--x", "1e8", "--y", "1000"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["constants"]["alpha_main_term"] == 0.25);
  CHECK(j["result"]["bound_constant"] == 0.25);
  CHECK(j["result"]["within"] == false);
}

TEST_CASE("multi-row output is json lines") {
  const Run r = run({"weyl", "--x", "1e4", "--y", "50", "--theta", "0,1/3,0.4142135623730951"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::vector<nlohmann::json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0]["rows"] == 3);
  CHECK(lines[1]["ratio"] == 1.0);
  CHECK(lines[3]["row"] == 2);
}

TEST_CASE("csv output") {
  const Run r = run({"equid", "--mode", "residues", "--x", "1e5", "--y", "100", "--yprime", "5",
                     "--q", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# tool=friable", 0) == 0);
  CHECK(r.out.find("\nkind,x,q,psi,max_deviation,regime_ok,a,count,deviation\n") != std::string::npos);
  CHECK(r.out.find("\nresidue,,,,,,1,") != std::string::npos);
}

TEST_CASE("determinism") {
  const std::vector<std::string> args = {"recur", "--N", "1e5", "--y", "300", "--theta", "2/7+1e-12",
                                         "--eps", "0.05", "--L", "100", "--eps-prime", "0.01",
                                         "--delta", "0.1"};
  const Run a = run(args);
  const Run b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run({"estimate", "--x", "1e6", "--y", "300", "--d", "2,10", "--sigma", "0.5,0.9"});
  REQUIRE(c.code == 0);
  CHECK(c.out == run({"estimate", "--x", "1e6", "--y", "300", "--d", "2,10", "--sigma", "0.5,0.9"}).out);
}

TEST_CASE("every subcommand runs") {
  CHECK(run({"alpha", "--x", "1e6", "--y", "1000"}).code == 0);
  CHECK(run({"equid", "--x", "1e5", "--y", "300", "--n1", "5e4"}).code == 0);
  CHECK(run({"equid", "--mode", "progression", "--x", "1e5", "--y", "300", "--yprime", "5",
             "--n1", "5e4", "--q", "3", "--a", "1"}).code == 0);
  CHECK(run({"equid", "--mode", "count", "--x", "1e5", "--y", "300", "--length", "1000"}).code == 0);
  CHECK(run({"equid", "--mode", "window-count", "--x", "1e5", "--y", "300", "--length", "1e4",
             "--step", "3"}).code == 0);
  CHECK(run({"equid", "--mode", "character", "--x", "1e5", "--y", "300", "--yprime", "5",
             "--q", "4"}).code == 0);
  CHECK(run({"weyl", "--mode", "approx", "--theta", "0.6180339887498949", "--qmax", "100"}).code == 0);
  CHECK(run({"weyl", "--mode", "major", "--theta", "1/3", "--x", "1e6", "--Q", "3"}).code == 0);
  CHECK(run({"weyl", "--mode", "sum", "--x", "1e4", "--y", "30", "--theta", "0.1", "--k", "2"}).code == 0);
  CHECK(run({"weyl", "--mode", "triple", "--n", "360", "--M", "10", "--y", "10"}).code == 0);
  CHECK(run({"phase", "--N", "1e5", "--y", "300", "--poly", "0,0.4142135623730951", "--w", "5"}).code == 0);
  CHECK(run({"phase", "--N", "1e5", "--yprime", "10", "--poly", "0,1/3", "--w", "5",
             "--model", "cramer"}).code == 0);
  CHECK(run({"abc", "--N", "1e4", "--y", "100"}).code == 0);
}
