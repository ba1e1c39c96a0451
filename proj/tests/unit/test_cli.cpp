#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "irswpcn/cli.hpp"
#include "irswpcn/metrics.hpp"

using namespace irswpcn;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string f; std::getline(is, f, ',');) v.push_back(f);
  if (!s.empty() && s.back() == ',') v.push_back("");
  return v;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("number formatting") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1e-3) == "0.001");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(NAN) == "nan");
  }

  TEST_CASE("tau sweep gives one row per point") {
    Run r = run({"analyze", "--sweep", "tau=0.1:0.9:0.1", "--metrics", "p_en"});
    REQUIRE(r.code == kExitOk);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 10);
    CHECK(ls[0] == "axis,value,scenario,p_en,error");
    double prev = -1.0;
    for (std::size_t i = 1; i < ls.size(); ++i) {
      auto f = split(ls[i]);
      REQUIRE(f.size() == 5);
      CHECK(f[0] == "tau");
      CHECK(std::stod(f[1]) == doctest::Approx(0.1 * i));
      double v = std::stod(f[3]);
      CHECK(v > prev);
      prev = v;
      CHECK(f[4].empty());
    }
  }

  TEST_CASE("no-irs scenario removes the surfaces") {
    Run r = run({"analyze", "--scenario", "no-irs,baseline", "--metrics", "p_en"});
    REQUIRE(r.code == kExitOk);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 3);
    auto bare = split(ls[1]), full = split(ls[2]);
    CHECK(bare[0] == "none");
    CHECK(bare[2] == "no-irs");
    NetworkParams p;
    p.n_elems = 0;
    CHECK(std::stod(bare[3]) == doctest::Approx(energy_coverage(p.tau, p)).epsilon(1e-9));
    CHECK(std::stod(full[3]) > std::stod(bare[3]));
  }

  TEST_CASE("simulation output is reproducible and decomposes p_cov") {
    std::vector<std::string> args = {"simulate", "--trials", "200", "--seed", "5", "--metrics", "p_cov"};
    Run a = run(args), b = run(args);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    auto ls = lines(a.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "axis,value,scenario,metric,sim_mean,ci95,n_trials,seed,error");
    std::vector<std::string> names;
    for (std::size_t i = 1; i < ls.size(); ++i) {
      auto f = split(ls[i]);
      names.push_back(f[3]);
      CHECK(f[6] == "200");
      CHECK(f[7] == "5");
    }
    CHECK(std::find(names.begin(), names.end(), "p_en") != names.end());
    CHECK(std::find(names.begin(), names.end(), "p_ul") != names.end());
    CHECK(std::find(names.begin(), names.end(), "p_cov") != names.end());
    Run c = run({"simulate", "--trials", "200", "--seed", "6", "--metrics", "p_cov"});
    CHECK(c.out != a.out);
  }

  TEST_CASE("coupled runs are labelled") {
    Run r = run({"simulate", "--trials", "50", "--mode", "coupled", "--metrics", "p_en"});
    REQUIRE(r.code == kExitOk);
    auto ls = lines(r.out);
    CHECK(ls[0] == "axis,value,scenario,metric,sim_mean,ci95,n_trials,seed,mode,error");
    CHECK(split(ls[1])[8] == "coupled");
  }

  TEST_CASE("jsonl output") {
    Run r = run({"analyze", "--sweep", "tau=0.3:0.5:0.2", "--metrics", "p_en", "--format", "jsonl"});
    REQUIRE(r.code == kExitOk);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    for (const auto& l : ls) {
      auto j = nlohmann::json::parse(l);
      CHECK(j["axis"] == "tau");
      CHECK(j["p_en"].is_number());
    }
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"analyze", "--sweep", "tau=0.1"}).code != kExitUsage);
    CHECK(run({"analyze", "--sweep", "nonsense=1:2:1"}).code == kExitUsage);
    CHECK(run({"analyze", "--sweep", "tau=0.9:0.1:0.1"}).code == kExitUsage);
    CHECK(run({"analyze", "--format", "xml"}).code == kExitUsage);
    Run bad = run({"analyze", "--scenario", "tau=1.5"});
    CHECK(bad.code == kExitUsage);
    CHECK(bad.err.find("tau") != std::string::npos);
    CHECK(run({"simulate", "--trials", "0"}).code == kExitUsage);
    CHECK(run({"validate", "fig99"}).code == kExitUsage);
    CHECK(run({"analyze", "--config", "/nonexistent/params.conf"}).code == kExitUsage);
  }
}
