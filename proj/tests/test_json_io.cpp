#include <doctest.h>

#include <random>

#include "fsel/errors.hpp"
#include "fsel/fixtures.hpp"
#include "fsel/json_io.hpp"
#include "support.hpp"

using namespace fsel;

TEST_SUITE("json_io") {

TEST_CASE("pmf round trip") {
  const auto p = fixtures::skewed_pair_pmf();
  const auto j = to_json(p);
  CHECK(j["variables"][2]["name"] == "C");
  CHECK(j["class"] == "C");
  const auto back = pmf_from_json(Json::parse(j.dump()));
  CHECK(back.probs() == p.probs());
  CHECK(back.class_index() == p.class_index());
}

TEST_CASE("mi matrix and q matrix round trip") {
  std::mt19937_64 rng(1);
  const auto mi = testing_support::random_mi_matrix(rng, 4, Redundancy::Pairwise);
  const auto mi2 = mi_matrix_from_json(Json::parse(to_json(mi).dump()));
  CHECK(mi2.kind == Redundancy::Pairwise);
  CHECK(mi2.relevance == mi.relevance);
  CHECK(mi2.redundancy == mi.redundancy);

  const auto q = build_q_matrix(mi, 3);
  const auto q2 = q_matrix_from_json(Json::parse(to_json(q).dump()));
  CHECK(q2.q == q.q);
  CHECK(q2.lambda == q.lambda);
  CHECK(q2.p_target == 3);
}

TEST_CASE("problem documents") {
  const Json doc = Json::parse(R"({"q": [[1, 0.5], [0.5, 2]], "p": 1})");
  CHECK(problem_from_json(doc).p_target == 1);
  const Json nested = Json::parse(R"({"qmatrix": {"q": [[1, 0], [0, 1]]}, "p": 2})");
  CHECK(problem_from_json(nested).p_target == 2);
  CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"q": [[1, 0], [0, 1]]})")), ConfigError);
  CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"q": [[1, 2], [0, 1]], "p": 1})")), DataError);
  CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"q": [[1, 2], [0]], "p": 1})")), DataError);
  CHECK_THROWS_AS(pmf_from_json(Json::parse(R"({"variables": []})")), DataError);
}

TEST_CASE("selection and report documents") {
  SelectionResult r;
  r.strategy = "fs";
  r.selected = {1, 4};
  r.score = 0.5;
  r.trajectory = {{1, 1, 4, 0.3}, {2, 2, 1, 0.5}};
  const auto j = to_json(r);
  CHECK(j["selected"] == Json::array({1, 4}));
  CHECK(j["trajectory"][1]["feature"] == 1);
  CHECK(j.dump().find("seed") == std::string::npos);

  EvalReport e;
  e.features = {2};
  e.fold_accuracies = {1.0};
  e.mean_accuracy = 1.0;
  CHECK(to_json(e)["mean_accuracy"] == 1.0);
  CHECK_FALSE(to_json(e).contains("curve"));
}

TEST_CASE("sdp diagnostics") {
  std::mt19937_64 rng(2);
  const auto q = testing_support::random_signed_q(rng, 4, 2);
  const auto sol = solve_sdp(homogenize(q));
  const auto j = to_json(sol);
  CHECK(j["status"] == "converged");
  CHECK(j["residuals"].contains("psd"));
  CHECK_FALSE(j.contains("y"));
  CHECK(to_json(sol, true)["y"].size() == 5);
}

TEST_CASE("bin edges") {
  std::vector<ColumnEncoding> enc{{"a", ColumnKind::Numeric, {1.5, 3.0}, {}},
                                  {"b", ColumnKind::Categorical, {}, {"red", "blue"}}};
  const auto j = to_json(enc);
  CHECK(j[0]["edges"] == Json::array({1.5, 3.0}));
  CHECK(j[1]["categories"][1] == "blue");
}

}  // TEST_SUITE
