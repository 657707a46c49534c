#include <doctest.h>

#include <nlohmann/json.hpp>

#include "semiscale/matrix_set_io.hpp"

using namespace semiscale;
using nlohmann::json;

namespace {

json valid_file() {
  return json{
      {"dim", 2},
      {"matrices",
       {{{"name", "mu"}, {"rows", {{"-inf", 1.0}, {-1.0, "-inf"}}}},
        {{"name", "f"}, {"rows", {{0.0, 2.0}, {0.25, 0.0}}}}}},
      {"atom_weights", {1.0, 2.0}},
      {"config", {{"tol", 1e-8}, {"cap", 500}}}};
}

}  // namespace

TEST_CASE("a well-formed matrix set parses") {
  const MatrixSetFile file = parse_matrix_set(valid_file());
  CHECK(file.dim == 2);
  REQUIRE(file.matrices.size() == 2);
  CHECK(file.matrices[0].name == "mu");
  CHECK(file.matrices[0].rows[0][0] == -std::numeric_limits<double>::infinity());
  CHECK(file.matrices[0].rows[0][1] == 1.0);
  REQUIRE(file.atom_weights.has_value());
  CHECK((*file.atom_weights)[1] == 2.0);
  CHECK(file.config.tol == 1e-8);
  CHECK(file.config.cap == 500);

  const ExtendedWeightMatrix mu = file.as_weights(file.find("mu"));
  CHECK(mu(0, 0).is_bottom());
  CHECK(mu(0, 1).value() == 1.0);

  const NonnegMatrix f = file.as_nonneg(file.find("f"));
  CHECK(f(0, 1) == 2.0);
}

TEST_CASE("interpretation errors surface as parse errors") {
  const MatrixSetFile file = parse_matrix_set(valid_file());
  CHECK_THROWS_AS(file.find("missing"), ParseError);
  CHECK_THROWS_AS(file.as_nonneg(file.find("mu")), ParseError);  // -inf entries
  CHECK_THROWS_AS(file.as_real(file.find("mu")), ParseError);
}

TEST_CASE("schema violations are rejected") {
  json j = valid_file();
  j.erase("dim");
  CHECK_THROWS_AS(parse_matrix_set(j), ParseError);

  j = valid_file();
  j["matrices"][0]["rows"][0] = {1.0};  // ragged row
  CHECK_THROWS_AS(parse_matrix_set(j), ParseError);

  j = valid_file();
  j["matrices"][1]["name"] = "mu";  // duplicate name
  CHECK_THROWS_AS(parse_matrix_set(j), ParseError);

  j = valid_file();
  j["matrices"][0]["rows"][0][0] = "inf";  // only "-inf" is admitted
  CHECK_THROWS_AS(parse_matrix_set(j), ParseError);

  j = valid_file();
  j["atom_weights"] = {0.5, 1.0};  // atoms must weigh at least 1
  CHECK_THROWS_AS(parse_matrix_set(j), ParseError);

  j = valid_file();
  j["matrices"] = json::array();
  CHECK_THROWS_AS(parse_matrix_set(j), ParseError);
}

TEST_CASE("weight matrices serialize -inf as the string form") {
  const MatrixSetFile file = parse_matrix_set(valid_file());
  const json out = to_json(file.as_weights(file.find("mu")));
  CHECK(out[0][0] == "-inf");
  CHECK(out[0][1] == 1.0);
  // Round trip through the parser.
  json wrapped = valid_file();
  wrapped["matrices"][0]["rows"] = out;
  const MatrixSetFile again = parse_matrix_set(wrapped);
  CHECK(again.as_weights(again.find("mu"))(0, 0).is_bottom());
}

TEST_CASE("digest is a pure function of the bytes") {
  CHECK(content_digest("abc") == content_digest("abc"));
  CHECK(content_digest("abc") != content_digest("abd"));
  CHECK(content_digest("").rfind("fnv1a:", 0) == 0);
}

TEST_CASE("pair lists report 1-based indices") {
  const json out = pairs_to_json({{0, 1}, {2, 0}});
  CHECK(out[0][0] == 1);
  CHECK(out[0][1] == 2);
  CHECK(out[1][0] == 3);
}
