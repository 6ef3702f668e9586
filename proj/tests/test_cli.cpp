#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "tasep/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = tasep::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& text) {
  std::vector<json> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) records.push_back(json::parse(line));
  return records;
}

}  // namespace

TEST_CASE("exact leftmost examples") {
  const auto det = run({"exact", "leftmost", "--n", "2", "--step-l", "0", "--position", "1", "--time", "1", "--method",
                        "determinant"});
  REQUIRE(det.code == 0);
  const auto r = json::parse(det.out);
  CHECK(r["value"].get<double>() == doctest::Approx(0.367879441171).epsilon(1e-10));
  CHECK(r["method"] == "determinant");
  CHECK(r["version"] == tasep::kVersion);

  const auto poisson = run({"exact", "leftmost", "--n", "1", "--initial", "0", "--position", "3", "--time", "2"});
  REQUIRE(poisson.code == 0);
  CHECK(json::parse(poisson.out)["value"].get<double>() == doctest::Approx(0.180447044315).epsilon(1e-10));
}

TEST_CASE("exact transition and sweep") {
  const auto tr = run({"exact", "transition", "--n", "2", "--initial", "1,2", "--final", "1,3", "--species", "21",
                       "--final-species", "21", "--time", "1", "--method", "quadrature"});
  REQUIRE(tr.code == 0);
  CHECK(std::abs(json::parse(tr.out)["value"].get<double>() - 0.13533528323661267) < 1e-12);

  const auto csv = std::filesystem::temp_directory_path() / "tasep_cli_sweep.csv";
  const auto sw = run({"exact", "leftmost", "--n", "3", "--step-l", "0", "--sweep", "1..4", "--time", "0.5", "--csv",
                       csv.string()});
  REQUIRE(sw.code == 0);
  const auto rec = json::parse(sw.out);
  CHECK(rec["results"].size() == 4);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,value,method,t,n");
  int rows = 0;
  for (std::string row; std::getline(in, row);)
    if (!row.empty()) ++rows;
  CHECK(rows == 4);
  std::filesystem::remove(csv);
}

TEST_CASE("usage errors") {
  CHECK(run({"simulate", "--event", "leftmost", "--n", "2", "--step-l", "0", "--position", "1", "--time", "1", "--runs",
             "0"})
            .code == tasep::kExitUsage);
  CHECK(run({"exact", "leftmost", "--n", "2", "--position", "1"}).code == tasep::kExitUsage);
  CHECK(run({"exact", "leftmost", "--n", "2", "--step-l", "0", "--position", "1", "--time", "1", "--method", "simpson"})
            .code == tasep::kExitUsage);
  CHECK(run({"exact", "leftmost", "--n", "2", "--step-l", "0", "--position", "1", "--time", "-1"}).code ==
        tasep::kExitUsage);
  CHECK(run({"frobnicate"}).code == tasep::kExitUsage);
  CHECK(run({"--help"}).code == tasep::kExitSuccess);
}

TEST_CASE("verify examples") {
  const auto hand = run({"verify", "--identity", "main", "--n-range", "2..2", "--points", "1", "--point", "1/2,1/3"});
  REQUIRE(hand.code == 0);
  const auto recs = lines(hand.out);
  REQUIRE_FALSE(recs.empty());
  CHECK(recs.front()["lhs"] == "-1/2");
  CHECK(recs.front()["rhs"] == "-1/2");

  const auto det = run({"verify", "--identity", "detcollapse", "--n-range", "3..3", "--point", "1/2,1/3,1/5", "--k",
                        "0,1"});
  REQUIRE(det.code == 0);
  CHECK(lines(det.out).front()["lhs"] == "0");

  const auto suite = run({"verify", "--identity", "all", "--n-range", "2..3", "--points", "5"});
  CHECK(suite.code == 0);
  const auto summary = lines(suite.out).back();
  CHECK(summary["pass"] == true);
}

TEST_CASE("simulate and compare") {
  const auto sim = run({"simulate", "--event", "leftmost", "--n", "2", "--step-l", "0", "--position", "1", "--time",
                        "1", "--runs", "20000", "--seed", "5"});
  REQUIRE(sim.code == 0);
  const auto s = json::parse(sim.out);
  CHECK(s["parameters"]["seed"] == "5");
  CHECK(s["parameters"]["runs"] == 20000);
  CHECK(s.contains("estimate"));

  const auto cmp = run({"compare", "transition", "--n", "2", "--initial", "1,2", "--final", "1,3", "--species", "21",
                        "--final-species", "21", "--time", "1", "--runs", "20000", "--seed", "3", "--method",
                        "quadrature"});
  CHECK(cmp.code == 0);
  const auto c = json::parse(cmp.out);
  CHECK(std::abs(c["results"][0]["z"].get<double>()) < 3.0);
  CHECK(c["agree"] == true);
}

TEST_CASE("records are byte-identical across runs") {
  const std::vector<std::string> sim{"simulate", "--event", "leftmost", "--n",    "3",   "--step-l", "0",
                                     "--position", "2",    "--time",  "1", "--runs", "3000", "--seed",  "77"};
  CHECK(run(sim).out == run(sim).out);
  const std::vector<std::string> exact{"exact", "leftmost", "--n", "3", "--step-l", "1", "--sweep", "1..5",
                                       "--time", "2", "--method", "quadrature"};
  CHECK(run(exact).out == run(exact).out);
  const auto timed = run({"--timing", "exact", "leftmost", "--n", "1", "--initial", "0", "--position", "1", "--time",
                          "1"});
  CHECK(json::parse(timed.out).contains("runtime_seconds"));
  CHECK_FALSE(json::parse(run(exact).out).contains("runtime_seconds"));
}
