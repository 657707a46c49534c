#include <doctest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SEMISCALE_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe))
    result.out.append(buf.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::filesystem::path write_fixture(const std::string& name, const json& content) {
  const auto dir = std::filesystem::temp_directory_path() / "semiscale_cli_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << content.dump(2);
  return path;
}

json matrix_entry(const std::string& name, const json& rows) {
  return json{{"name", name}, {"rows", rows}};
}

}  // namespace

TEST_CASE("tropical command emits the closure and an auto potential") {
  const auto path = write_fixture(
      "two_cycle.json",
      {{"dim", 2},
       {"matrices", {matrix_entry("mu", {{"-inf", 1.0}, {-1.0, "-inf"}})}}});
  const auto r = run_cli("tropical " + path.string() + " --reproducible");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["schema"] == 1);
  CHECK(report["status"] == "ok");
  CHECK(report["results"]["walk_supremum"][0][0] == 0.0);
  CHECK(report["results"]["potential"]["rho"][0] == 0.0);
  CHECK(report["results"]["potential"]["rho"][1] == -1.0);
  CHECK(report["results"]["potential"]["basepoint"] == 1);
  CHECK_FALSE(report.contains("timestamp"));
}

TEST_CASE("divergence is reported, and blocks an explicit potential request") {
  const auto path = write_fixture(
      "positive_loop.json",
      {{"dim", 2},
       {"matrices", {matrix_entry("mu", {{1.0, "-inf"}, {"-inf", "-inf"}})}}});

  const auto plain = run_cli("tropical " + path.string() + " --reproducible");
  CHECK(plain.exit_code == 0);
  const json report = json::parse(plain.out);
  CHECK(report["results"]["divergent_pairs"][0] == json::array({1, 1}));

  const auto asked = run_cli("tropical " + path.string() + " --basepoint 1");
  CHECK(asked.exit_code == 2);
}

TEST_CASE("malformed input exits 3") {
  const auto dir = std::filesystem::temp_directory_path() / "semiscale_cli_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / "broken.json";
  std::ofstream(path) << "{ not json";
  CHECK(run_cli("tropical " + path.string()).exit_code == 3);
  CHECK(run_cli("scale " + (dir / "does_not_exist.json").string()).exit_code == 3);
}

TEST_CASE("scale certifies the matrix-unit pair") {
  const auto path = write_fixture(
      "units.json",
      {{"dim", 2},
       {"matrices",
        {matrix_entry("a", {{0.0, 1.0}, {0.0, 0.0}}),
         matrix_entry("b", {{0.0, 0.0}, {1.0, 0.0}})}}});
  const auto r = run_cli("scale " + path.string() + " --reproducible");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["results"]["indecomposable"] == true);
  CHECK(report["results"]["closure_status"] == "complete");
  CHECK(report["results"]["certificate"]["max_violation"].get<double>() ==
        doctest::Approx(1.0));
}

TEST_CASE("scale balances skewed units and reports the ratio") {
  const auto path = write_fixture(
      "skewed.json",
      {{"dim", 2},
       {"matrices",
        {matrix_entry("a", {{0.0, 3.0}, {0.0, 0.0}}),
         matrix_entry("b", {{0.0, 0.0}, {1.0 / 3.0, 0.0}})}}});
  const auto r = run_cli("scale " + path.string() + " --reproducible");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  const auto d = report["results"]["certificate"]["d"].get<std::vector<double>>();
  CHECK(d[0] / d[1] == doctest::Approx(3.0));
}

TEST_CASE("scale certifies a contracting atom-weighted family") {
  const auto path = write_fixture(
      "weighted.json",
      {{"dim", 2},
       {"matrices",
        {matrix_entry("a", {{0.0, 0.5}, {0.0, 0.0}}),
         matrix_entry("b", {{0.0, 0.0}, {0.25, 0.0}})}},
       {"atom_weights", {1.0, 2.0}}});
  const auto r = run_cli("scale " + path.string() + " --reproducible");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["parameters"]["composition"] == "atom-weighted");
  CHECK(report["results"]["certificate"]["max_violation"].get<double>() <= 1.0 + 1e-9);
}

TEST_CASE("tropical selects a named matrix") {
  const auto path = write_fixture(
      "named.json",
      {{"dim", 1},
       {"matrices",
        {matrix_entry("first", {{-1.0}}), matrix_entry("second", {{-2.0}})}}});
  const auto r =
      run_cli("tropical " + path.string() + " --matrix second --reproducible");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["results"]["walk_supremum"][0][0] == -2.0);
}

TEST_CASE("strict scaling of an unbounded family exits 2") {
  const auto path = write_fixture(
      "doubling.json",
      {{"dim", 2},
       {"matrices",
        {matrix_entry("a", {{0.0, 2.0}, {0.0, 0.0}}),
         matrix_entry("b", {{0.0, 0.0}, {2.0, 0.0}})}}});
  const auto strict = run_cli("scale " + path.string() + " --strict");
  CHECK(strict.exit_code == 2);
  const auto loose = run_cli("scale " + path.string());
  CHECK(loose.exit_code == 2);  // the sup-function closure diverges either way
}

TEST_CASE("binary command recovers a planted diagonal similarity") {
  const auto path = write_fixture(
      "planted.json",
      {{"dim", 2},
       {"matrices", {matrix_entry("g", {{0.0, 3.0}, {1.0 / 3.0, 0.0}})}}});
  const auto r = run_cli("binary " + path.string() + " --reproducible");
  CHECK(r.exit_code == 0);
  const json report = json::parse(r.out);
  const auto d = report["results"]["d"].get<std::vector<double>>();
  CHECK(d[0] / d[1] == doctest::Approx(3.0));
  for (const auto& row : report["results"]["rescaled_generators"][0])
    for (const auto& cell : row) {
      const double v = cell.get<double>();
      CHECK((std::abs(v) <= 1e-9 || std::abs(v - 1.0) <= 1e-9));
    }
}

TEST_CASE("binary command witnesses a non-binary diagonal") {
  const auto path = write_fixture(
      "halfdiag.json",
      {{"dim", 2},
       {"matrices", {matrix_entry("g", {{0.5, 0.0}, {0.0, 1.0}})}}});
  const auto r = run_cli("binary " + path.string() + " --reproducible");
  CHECK(r.exit_code == 1);
  const json report = json::parse(r.out);
  CHECK(report["results"]["witness"]["entry"] == json::array({1, 1}));
  CHECK(report["results"]["witness"]["value"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("binary command rejects decomposable generators") {
  const auto path = write_fixture(
      "e11.json",
      {{"dim", 2}, {"matrices", {matrix_entry("g", {{1.0, 0.0}, {0.0, 0.0}})}}});
  const auto r = run_cli("binary " + path.string());
  CHECK(r.exit_code == 1);
}

TEST_CASE("operator command passes matrix units and flags stretched ones") {
  const auto good = write_fixture(
      "op_units.json",
      {{"dim", 2},
       {"matrices",
        {matrix_entry("e11", {{1.0, 0.0}, {0.0, 0.0}}),
         matrix_entry("e12", {{0.0, 1.0}, {0.0, 0.0}}),
         matrix_entry("e21", {{0.0, 0.0}, {1.0, 0.0}}),
         matrix_entry("e22", {{0.0, 0.0}, {0.0, 1.0}}),
         matrix_entry("zero", {{0.0, 0.0}, {0.0, 0.0}})}}});
  CHECK(run_cli("operator " + good.string()).exit_code == 0);

  const auto bad = write_fixture(
      "op_stretched.json",
      {{"dim", 2},
       {"matrices",
        {matrix_entry("a", {{0.0, 2.0}, {0.0, 0.0}}),
         matrix_entry("b", {{0.0, 0.0}, {2.0, 0.0}}),
         matrix_entry("c", {{4.0, 0.0}, {0.0, 0.0}})}}});
  const auto r = run_cli("operator " + bad.string() + " --reproducible");
  CHECK(r.exit_code == 1);
  const json report = json::parse(r.out);
  CHECK(report["results"].contains("first_failure"));

  const auto empty = write_fixture(
      "op_empty.json", {{"dim", 2}, {"matrices", json::array()}});
  CHECK(run_cli("operator " + empty.string()).exit_code == 3);
}

TEST_CASE("counterexample command verifies and validates truncation") {
  const auto ok = run_cli("counterexample --N 64 --m-max 2 --reproducible");
  CHECK(ok.exit_code == 0);
  const json report = json::parse(ok.out);
  CHECK(report["results"]["max_residual"].get<double>() <= 1e-8);
  CHECK(report["results"]["first_diagonal_family"][0].get<double>() ==
        doctest::Approx(0.5));

  CHECK(run_cli("counterexample --N 4 --m-max 3").exit_code == 3);
}

TEST_CASE("reproducible reports are byte-identical") {
  const auto path = write_fixture(
      "repeat.json",
      {{"dim", 2},
       {"matrices",
        {matrix_entry("a", {{0.0, 1.0}, {0.0, 0.0}}),
         matrix_entry("b", {{0.0, 0.0}, {1.0, 0.0}})}}});
  const auto first = run_cli("scale " + path.string() + " --reproducible");
  const auto second = run_cli("scale " + path.string() + " --reproducible");
  CHECK(first.out == second.out);
  CHECK(first.out.find("timestamp") == std::string::npos);
}

TEST_CASE("reports can be written to a file") {
  const auto dir = std::filesystem::temp_directory_path() / "semiscale_cli_tests";
  const auto out_path = dir / "report_out.json";
  std::filesystem::remove(out_path);
  const auto input = write_fixture(
      "for_output.json",
      {{"dim", 1}, {"matrices", {matrix_entry("mu", {{-2.0}})}}});
  const auto r =
      run_cli("tropical " + input.string() + " --reproducible --output " + out_path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out_path);
  REQUIRE(in.good());
  const json report = json::parse(in);
  CHECK(report["results"]["walk_supremum"][0][0] == -2.0);
}
