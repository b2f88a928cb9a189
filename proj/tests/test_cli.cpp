#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pseudospec/cli.hpp"
#include "pseudospec/errors.hpp"
#include "pseudospec/presets.hpp"

using namespace pseudospec;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(int (*fn)(const RunConfig&, std::ostream&, std::ostream&), const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = fn(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig preset(const char* name) {
  RunConfig c;
  c.preset = name;
  return c;
}

RunConfig custom(const char* g) {
  RunConfig c;
  c.g_source = g;
  return c;
}

// Row of a construct CSV whose x column equals `x`.
std::vector<double> csv_row_at(const std::string& csv, double x) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> cols;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cols.push_back(std::stod(cell));
    if (cols.at(0) == x) return cols;
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("presets pin their parameters") {
    const ModelSpec e2 = preset_spec(find_preset("example2"));
    CHECK(e2.alpha == 1.0);
    CHECK(e2.beta == -0.25);
    CHECK(*e2.e_imag == -1.0);
    const ModelSpec e3 = preset_spec(find_preset("example3"));
    CHECK(*e3.e_imag == -1.0);
    CHECK(e3.beta == 0.0);
    CHECK_THROWS_AS(preset_spec(find_preset("example3"), 2.0), ConfigError);
    CHECK_THROWS_AS(find_preset("example4"), ConfigError);

    const Preset& p1 = find_preset("example1");
    CHECK(*preset_spec(p1, 4.0).e_imag == -2.0);
    CHECK(*preset_spec(p1, 0.0).e_imag == 0.0);
    CHECK_FALSE(preset_spec(p1, -1.0).e_imag.has_value());
    CHECK(*preset_spec(p1, std::nullopt, 3.0).e_imag == 3.0);
    CHECK(preset_spec(p1, std::nullopt, 3.0).alpha == 9.0);
    CHECK_THROWS_AS(preset_spec(p1, 1.0, 2.0), ConfigError);
  }

  TEST_CASE("constructed potentials match the closed forms") {
    const Grid g(-4, 4, 401);
    const Model m2(preset_spec(find_preset("example2")), g);
    const Model m3(preset_spec(find_preset("example3")), g);
    ModelSpec s1 = preset_spec(find_preset("example1"), 0.5);
    s1.beta = 0.2;
    const Model m1(s1, g);
    for (std::size_t i = 0; i < g.size(); i += 9) {
      const double x = g.x(i);
      CHECK(std::abs(m2.potential(x) - example2_potential(x)) <=
            1e-12 * std::max(1.0, std::abs(example2_potential(x))));
      CHECK(std::abs(m3.potential(x) - example3_potential(x, 0.0)) <= 1e-12);
      const auto want = example1_potential(x, 0.5, 0.2, +1.0);
      CHECK(std::abs(m1.potential(x) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }

  TEST_CASE("construct emits the expected rows") {
    RunConfig c = preset("example3");
    c.format = OutputFormat::Csv;
    c.n = 801;
    const Run r = run(run_construct, c);
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.rfind("x,re_V,im_V,f,re_phi,im_phi\n", 0) == 0);
    const auto row = csv_row_at(r.out, 0.0);
    REQUIRE(row.size() == 6);
    CHECK(row[1] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(row[2] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(row[4] == 1.0);

    RunConfig c2 = preset("example2");
    c2.format = OutputFormat::Csv;
    const auto row2 = csv_row_at(run(run_construct, c2).out, 0.0);
    REQUIRE(row2.size() == 6);
    CHECK(row2[2] == doctest::Approx(-2.0).epsilon(1e-14));

    RunConfig c3 = preset("example1");
    c3.alpha = -1.0;
    c3.format = OutputFormat::Csv;
    c3.n = 101;
    const Run r3 = run(run_construct, c3);
    CHECK(r3.code == kExitOk);
    CHECK(r3.out.rfind("x,re_V,im_V\n", 0) == 0);
  }

  TEST_CASE("construct JSON carries schema and energy") {
    RunConfig c = preset("example3");
    c.n = 201;
    const json j = json::parse(run(run_construct, c).out);
    CHECK(j["schema"] == "pseudospec/1");
    CHECK(j["command"] == "construct");
    CHECK(j["energy"]["im"] == -1.0);
    CHECK(j["samples"]["x"].size() == 201);
  }

  TEST_CASE("error exit codes") {
    CHECK(run(run_construct, custom("1/x")).code == kExitConstruction);
    CHECK(run(run_construct, custom("sinh(x")).code == kExitConfig);
    CHECK(run(run_construct, custom("foo(x)")).code == kExitConfig);
    RunConfig both = preset("example3");
    both.g_source = "tanh(x)";
    CHECK(run(run_construct, both).code == kExitConfig);
    CHECK(run(run_construct, RunConfig{}).code == kExitConfig);
    CHECK(run(run_construct, preset("example9")).code == kExitConfig);
    RunConfig even = preset("example3");
    even.n = 4;
    CHECK(run(run_spectrum, even).code == kExitConfig);
    RunConfig flipped = preset("example3");
    flipped.x_min = 3.0;
    flipped.x_max = -3.0;
    CHECK(run(run_construct, flipped).code == kExitConfig);
    RunConfig irregular = custom("tanh(x)");
    irregular.e_imag = -2.0;
    const Run r = run(run_verify, irregular);
    CHECK(r.code == kExitConstruction);
    CHECK(r.err.find("e_imag") != std::string::npos);
  }

  TEST_CASE("verify passes for examples 3 and 1") {
    const Run r3 = run(run_verify, preset("example3"));
    CHECK(r3.code == kExitOk);
    const json j3 = json::parse(r3.out);
    CHECK(j3["pass"] == true);
    for (const auto& check : j3["checks"]) {
      CAPTURE(check.dump());
      CHECK(check["pass"] == true);
      if (check.contains("order")) {
        CHECK(check["order"].get<double>() >= 1.7);
        CHECK(check["order"].get<double>() <= 2.3);
      }
    }
    const Run r1 = run(run_verify, preset("example1"));
    CHECK(r1.code == kExitOk);
    bool saw_eigen = false;
    const json j1 = json::parse(r1.out);
    for (const auto& check : j1["checks"])
      if (check["name"] == "eigen_residual") {
        saw_eigen = true;
        CHECK(check["pass"] == true);
      }
    CHECK(saw_eigen);
  }

  TEST_CASE("verify reports skipped kernel checks for alpha < 0") {
    RunConfig c = preset("example1");
    c.alpha = -1.0;
    c.n = 201;
    const Run r = run(run_verify, c);
    CHECK(r.code == kExitOk);
    CHECK(json::parse(r.out)["checks"][0]["pass"].is_null());
  }

  TEST_CASE("spectrum overflow policy") {
    RunConfig c = preset("example1");
    c.alpha = -1.0;
    const Run r = run(run_spectrum, c);
    CHECK(r.code == kExitConstruction);
    CHECK(r.err.find("suggested domain") != std::string::npos);

    c.x_min = -2.5;
    c.x_max = 2.5;
    c.n = 401;
    const Run ok = run(run_spectrum, c);
    CHECK(ok.code == kExitOk);
    CHECK(json::parse(ok.out)["truncation_dominated"] == true);
  }

  TEST_CASE("spectrum of example 3 isolates the eigenvalue near -i") {
    RunConfig c = preset("example3");
    c.n = 801;
    const Run r = run(run_spectrum, c);
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["truncation_dominated"] == false);
    int deep = 0;
    for (const auto& z : j["complex"])
      if (z["im"].get<double>() < -0.5) {
        ++deep;
        CHECK(std::hypot(z["re"].get<double>(), z["im"].get<double>() + 1.0) <= 1e-2);
      }
    CHECK(deep == 1);
    CHECK(j["eigenvalues"].size() == 799);
  }

  TEST_CASE("classify verdict lines") {
    RunConfig c1 = preset("example1");
    c1.alpha = -1.0;
    CHECK(run(run_classify, c1).out.rfind("RealSpectrumGuaranteed\n", 0) == 0);
    CHECK(run(run_classify, preset("example1")).out.rfind("KnownRealEigenfunction{E=0}\n", 0) ==
          0);
    CHECK(run(run_classify, preset("example2")).out.rfind("RealSpectrumByExclusion\n", 0) == 0);
    const Run r3 = run(run_classify, preset("example3"));
    CHECK(r3.out.rfind("ComplexEigenvaluePresent{E=0-1i}\n", 0) == 0);
    const json detail = json::parse(r3.out.substr(r3.out.find('\n') + 1));
    CHECK(detail["verdict"] == "ComplexEigenvaluePresent");
    CHECK(detail["candidates"][0]["normalizability"]["integrals"].size() == 4);
  }

  TEST_CASE("reports can be written to a file and are deterministic") {
    const auto path = std::filesystem::temp_directory_path() / "pseudospec_cli_test.csv";
    RunConfig c = preset("example2");
    c.format = OutputFormat::Csv;
    c.n = 51;
    c.output_path = path.string();
    const Run r = run(run_construct, c);
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream first;
    first << in.rdbuf();
    c.output_path.clear();
    CHECK(run(run_construct, c).out == first.str());
    std::filesystem::remove(path);

    c.output_path = "/nonexistent-dir/x.csv";
    CHECK(run(run_construct, c).code == kExitConfig);
  }
}
