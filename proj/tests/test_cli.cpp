#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subalg/cli.hpp"
#include "subalg/errors.hpp"

using namespace subalg;
using namespace subalg::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

Json without_timestamp(Json j) {
  j.erase("generated_at");
  return j;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("subalg_cli_test_" + name)).string();
}

std::vector<Block> blocks_of(std::initializer_list<std::pair<int, int>> l) {
  std::vector<Block> b;
  for (auto [m, n] : l) b.push_back({m, n});
  return b;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("algebra presets") {
    CHECK(resolve_algebra("diagonal(2)").blocks() == blocks_of({{1, 1}, {1, 1}}));
    CHECK(resolve_algebra("swap").blocks() == blocks_of({{3, 1}, {1, 1}}));
    CHECK(resolve_algebra("trivial(3)").blocks() == blocks_of({{3, 1}}));
    auto f = resolve_algebra("factor(2,3)");
    CHECK(f.dim() == 6);
    CHECK(pimsner_popa_index(f).lambda == doctest::Approx(1.0 / 6.0));
    CHECK_THROWS_AS(resolve_algebra("diagonal"), ConfigError);
    CHECK_THROWS_AS(resolve_algebra("factor(2)"), ConfigError);
    CHECK_THROWS_AS(resolve_algebra("nonsense(4)"), ConfigError);
  }

  TEST_CASE("state presets") {
    Mat p = resolve_state("plus", 2, 1);
    CHECK(max_abs(p - Mat::Constant(2, 2, 0.5)) < 1e-15);
    Mat g = resolve_state("ghz", 4, 1);
    CHECK(g(0, 3).real() == doctest::Approx(0.5));
    CHECK(max_abs(resolve_state("random(5)", 3, 1) - resolve_state("random(5)", 3, 2)) == 0.0);
    CHECK(max_abs(resolve_state("random", 3, 7) - resolve_state("random(7)", 3, 0)) == 0.0);
    CHECK_THROWS_AS(resolve_state("plus(3)", 2, 1), ConfigError);
  }

  TEST_CASE("aep on the plus state has a constant D row") {
    auto r = run({"aep", "--state", "plus", "--algebra", "diagonal(2)", "--eps", "0.1", "--nmax", "2"});
    CHECK(r.code == kPass);
    Json doc = Json::parse(r.out);
    int d_rows = 0;
    for (const auto& row : doc["rows"])
      if (row["quantity"] == "D") {
        CHECK(row["value_bits"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
        ++d_rows;
      }
    CHECK(d_rows == 2);
  }

  TEST_CASE("duality battery passes and defaults apply") {
    auto r = run({"duality", "--state", "random(3)", "--algebra", "diagonal(2)"});
    CHECK(r.code == kPass);
    Json doc = Json::parse(r.out);
    CHECK(doc["passed"].get<bool>());
    CHECK(doc["epsilons"] == Json::parse("[0.0, 0.01, 0.1, 0.3]"));
    CHECK(doc["alphas"] == Json::parse("[0.5, 1.0, 2.0, \"inf\"]"));
    for (const auto& row : doc["rows"]) CHECK(row.contains("certificate_gap"));

    auto a = run({"aep", "--nmax", "1"});
    CHECK(Json::parse(a.out)["epsilons"] == Json::parse("[0.01, 0.1, 0.3]"));
  }

  TEST_CASE("same seed gives identical output") {
    std::vector<std::string> args = {"duality", "--state", "random", "--seed", "42", "--algebra", "diagonal(3)", "--eps", "0.1", "--alpha", "2"};
    auto a = run(args), b = run(args);
    CHECK(without_timestamp(Json::parse(a.out)).dump() == without_timestamp(Json::parse(b.out)).dump());
    args[4] = "43";
    auto c = run(args);
    CHECK(without_timestamp(Json::parse(a.out)).dump() != without_timestamp(Json::parse(c.out)).dump());
  }

  TEST_CASE("csv output") {
    auto r = run({"aep", "--eps", "0.1", "--nmax", "1", "--format", "csv"});
    CHECK(r.code == kPass);
    CHECK(r.out.rfind("quantity,value_bits,n,epsilon,route,certificate_gap\n", 0) == 0);
  }

  TEST_CASE("dilution of the plus state") {
    auto r = run({"dilution", "--state", "plus", "--algebra", "diagonal(2)", "--eps", "0"});
    CHECK(r.code == kPass);
    Json doc = Json::parse(r.out);
    const Json& mio = doc["rows"][0];
    CHECK(mio["quantity"] == "C_MIO");
    CHECK(mio["source_dim"] == 2);
    CHECK(mio["value_bits"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["rows"][1]["source_dim"] == 2);
    auto phi = channel_from_json(doc["dio_channel"]);
    CHECK(is_dio(phi, make_diagonal(2), make_diagonal(2)));
  }

  TEST_CASE("decompose and axioms") {
    auto d = run({"decompose", "--algebra", "swap"});
    CHECK(d.code == kPass);
    Json doc = Json::parse(d.out);
    CHECK(doc["index"]["inverse"] == 4);
    CHECK(doc["env_dim"] == 10);
    auto a = run({"axioms", "--algebra", "diagonal(2)", "--nmax", "2"});
    CHECK(a.code == kPass);
  }

  TEST_CASE("config files and overrides") {
    std::string path = temp_path("config.json");
    {
      std::ofstream f(path);
      f << R"({"task": "aep", "algebra": {"dim": 2, "blocks": [[1, 1], [1, 1]]}, "eps": [0.1], "nmax": 1, "state": "plus"})";
    }
    auto r = run({"aep", "--config", path});
    CHECK(r.code == kPass);
    CHECK(Json::parse(r.out)["algebra"] == "inline");
    auto o = run({"aep", "--config", path, "--algebra", "trivial(2)"});
    CHECK(Json::parse(o.out)["algebra"] == "trivial(2)");

    {
      std::ofstream f(path);
      f << "{\n  \"eps\": [0.1,\n  }\n";
    }
    auto bad = run({"aep", "--config", path});
    CHECK(bad.code == kConfigError);
    CHECK(bad.err.find(":3:") != std::string::npos);

    {
      std::ofstream f(path);
      f << R"({"eps": "0.1"})";
    }
    auto bad_field = run({"aep", "--config", path});
    CHECK(bad_field.code == kConfigError);
    CHECK(bad_field.err.find("field 'eps'") != std::string::npos);
    std::remove(path.c_str());
  }

  TEST_CASE("configuration errors exit with 2") {
    CHECK(run({}).code == kConfigError);
    CHECK(run({"nonsense"}).code == kConfigError);
    CHECK(run({"aep", "--eps", "abc"}).code == kConfigError);
    CHECK(run({"aep", "--eps", "1.5"}).code == kConfigError);
    CHECK(run({"aep", "--algebra", "diagonal(3)", "--nmax", "6"}).code == kConfigError);
    CHECK(run({"duality", "--format", "xml"}).code == kConfigError);
    CHECK(run({"duality", "--state", "/nonexistent/state.json"}).code == kConfigError);
    CHECK(run({"--help"}).code == kPass);
  }

  TEST_CASE("output file receives the document") {
    std::string path = temp_path("out.json");
    auto r = run({"decompose", "--algebra", "factor(2,2)", "--out", path});
    CHECK(r.code == kPass);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(Json::parse(std::ifstream(path))["task"] == "decompose");
    std::remove(path.c_str());
  }
}
