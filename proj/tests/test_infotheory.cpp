#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fsel/errors.hpp"
#include "fsel/fixtures.hpp"
#include "fsel/infotheory.hpp"
#include "support.hpp"

using namespace fsel;
using testing_support::oracle_entropy;
using testing_support::oracle_mi;

namespace {

JointPmf bernoulli(double p1) { return JointPmf({"A"}, {2}, {1.0 - p1, p1}); }

// Copy of a (X1, X2, C) pmf with X2 replaced by X1.
JointPmf duplicate_first(const JointPmf& p) {
  std::vector<double> probs(8, 0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) probs[static_cast<std::size_t>(a * 4 + a * 2 + c)] += p.probs()[static_cast<std::size_t>(a * 4 + b * 2 + c)];
  return JointPmf({"X1", "X1copy", "C"}, {2, 2, 2}, std::move(probs), 2);
}

double truncate2(double v) { return std::floor(v * 100.0) / 100.0; }

}  // namespace

TEST_SUITE("infotheory") {

TEST_CASE("entropy of simple variables") {
  CHECK(entropy(bernoulli(0.5), {0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy(bernoulli(1.0), {0}) == doctest::Approx(0.0));
  // -(0.75 log2 0.75 + 0.25 log2 0.25)
  CHECK(std::abs(entropy(bernoulli(0.75), {0}) - 0.8113) < 1e-4);
}

TEST_CASE("pmf validation") {
  CHECK_THROWS_AS(JointPmf({"A"}, {2}, {0.5, 0.6}), DataError);
  CHECK_THROWS_AS(JointPmf({"A"}, {2}, {1.5, -0.5}), DataError);
  CHECK_THROWS_AS(JointPmf({"A"}, {3}, {0.5, 0.5}), DataError);
  CHECK_THROWS_AS(fixtures::xor_pmf().index_of("nope"), ConfigError);
}

TEST_CASE("independent product has zero MI") {
  std::vector<double> probs;
  for (double a : {0.3, 0.7})
    for (double b : {0.2, 0.5, 0.3}) probs.push_back(a * b);
  const JointPmf p({"A", "B"}, {2, 3}, probs);
  CHECK(std::abs(mutual_information(p, {0}, {1})) < 1e-10);
}

TEST_CASE("balanced-pair relevance") {
  const auto p = fixtures::balanced_pair_pmf();
  const double i1 = mutual_information(p, {0}, {2});
  const double i2 = mutual_information(p, {1}, {2});
  CHECK(i1 == doctest::Approx(oracle_mi(p, {0}, {2})).epsilon(1e-12));
  CHECK(i2 == doctest::Approx(oracle_mi(p, {1}, {2})).epsilon(1e-12));
  CHECK(i1 == doctest::Approx(0.311278).epsilon(1e-5));
  CHECK(i2 == doctest::Approx(0.295807).epsilon(1e-5));
  // The commonly quoted 0.31 / 0.29 are these values cut to two decimals.
  CHECK(truncate2(i1) == doctest::Approx(0.31));
  CHECK(truncate2(i2) == doctest::Approx(0.29));
  CHECK(i1 > i2);
}

TEST_CASE("skewed-pair relevance") {
  const auto p = fixtures::skewed_pair_pmf();
  const double i1 = mutual_information(p, {0}, {2});
  const double i2 = mutual_information(p, {1}, {2});
  CHECK(i1 == doctest::Approx(oracle_mi(p, {0}, {2})).epsilon(1e-12));
  CHECK(i2 == doctest::Approx(oracle_mi(p, {1}, {2})).epsilon(1e-12));
  CHECK(truncate2(i1) == doctest::Approx(0.18));
  CHECK(truncate2(i2) == doctest::Approx(0.20));
  CHECK(i2 > i1);
}

TEST_CASE("conditional MI") {
  std::mt19937_64 rng(1);
  const auto p = testing_support::random_pmf(rng, 3);
  CHECK(conditional_mi(p, {0}, {3}, {}) == doctest::Approx(mutual_information(p, {0}, {3})).epsilon(1e-12));
  CHECK_THROWS_AS(conditional_mi(p, {0}, {0, 3}, {}), ConfigError);
  CHECK_THROWS_AS(conditional_mi(p, {0}, {3}, {0}), ConfigError);

  // Markov chain A -> Z -> B.
  const double pa[2] = {0.4, 0.6};
  const double pz_a[2][2] = {{0.8, 0.2}, {0.3, 0.7}};
  const double pb_z[2][3] = {{0.5, 0.25, 0.25}, {0.1, 0.1, 0.8}};
  std::vector<double> probs;
  for (int a = 0; a < 2; ++a)
    for (int z = 0; z < 2; ++z)
      for (int b = 0; b < 3; ++b) probs.push_back(pa[a] * pz_a[a][z] * pb_z[z][b]);
  const JointPmf chain({"A", "Z", "B"}, {2, 2, 3}, probs);
  CHECK(std::abs(conditional_mi(chain, {0}, {2}, {1})) < 1e-10);
  CHECK(mutual_information(chain, {0}, {2}) > 1e-3);
}

TEST_CASE("multiway MI") {
  std::vector<double> probs;
  for (double a : {0.3, 0.7})
    for (double b : {0.6, 0.4})
      for (double c : {0.1, 0.9}) probs.push_back(a * b * c);
  const JointPmf indep({"A", "B", "C"}, {2, 2, 2}, probs);
  CHECK(std::abs(multiway_mi(indep, {0, 1, 2})) < 1e-10);

  // XOR: pairs are independent but jointly determine C.
  CHECK(multiway_mi(fixtures::xor_pmf(), {0, 1, 2}) == doctest::Approx(-1.0).epsilon(1e-12));

  // A duplicated feature collapses the triple term onto I(X1;C).
  const auto dup = duplicate_first(fixtures::balanced_pair_pmf());
  const double i3 = multiway_mi(dup, {0, 1, 2});
  CHECK(i3 == doctest::Approx(oracle_mi(dup, {0}, {2})).epsilon(1e-10));
  CHECK(std::abs(i3 - 0.31) < 0.005);

  CHECK_THROWS_AS(multiway_mi(indep, {0}), ConfigError);
}

TEST_CASE("first expansion") {
  std::mt19937_64 rng(7);
  const auto one = testing_support::random_pmf(rng, 1);
  CHECK(expansion_first(one).total == doctest::Approx(mutual_information(one, {0}, {1})).epsilon(1e-12));

  const auto x = expansion_first(fixtures::xor_pmf());
  REQUIRE(x.order_sums.size() == 2);
  CHECK(std::abs(x.order_sums[0]) < 1e-12);
  CHECK(x.order_sums[1] == doctest::Approx(1.0));
  CHECK(x.total == doctest::Approx(1.0));

  for (int t = 0; t < 10; ++t) {
    const auto p = testing_support::random_pmf(rng, 3);
    CHECK(std::abs(expansion_first(p).total - oracle_mi(p, {0, 1, 2}, {3})) < 1e-8);
  }
}

TEST_CASE("second expansion") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto p2 = testing_support::random_pmf(rng, 2);
    CHECK(std::abs(expansion_second(p2).total - oracle_mi(p2, {0, 1}, {2})) < 1e-8);
    const auto p4 = testing_support::random_pmf(rng, 4, 2);
    CHECK(std::abs(expansion_second(p4).total - 2.0 * oracle_mi(p4, {0, 1, 2, 3}, {4})) < 1e-8);
  }

  // Under the factorized i-map both sides collapse to (N/2) times the sum
  // of relevances.
  const auto ci = testing_support::factorized_pmf();
  double relevance = 0.0;
  for (std::size_t i = 0; i < 3; ++i) relevance += oracle_mi(ci, {i}, {3});
  CHECK(oracle_mi(ci, {0, 1, 2}, {3}) == doctest::Approx(relevance).epsilon(1e-10));
  CHECK(expansion_second(ci).total == doctest::Approx(1.5 * relevance).epsilon(1e-10));
}

TEST_CASE("kirkwood cross-entropy") {
  std::vector<double> probs;
  for (double a : {0.3, 0.7})
    for (double b : {0.6, 0.4})
      for (double d : {0.25, 0.75})
        for (double c : {0.5, 0.5}) probs.push_back(a * b * d * c);
  const JointPmf indep({"X1", "X2", "X3", "C"}, {2, 2, 2, 2}, probs, 3);
  CHECK(kirkwood_cross_entropy(indep) ==
        doctest::Approx(oracle_entropy(indep, {0}) + oracle_entropy(indep, {1}) + oracle_entropy(indep, {2})).epsilon(1e-10));

  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const auto p = testing_support::random_pmf(rng, 3);
    double rhs = 0.0;
    for (std::size_t i = 0; i < 3; ++i) rhs += oracle_entropy(p, {i});
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) rhs -= oracle_mi(p, {i}, {j});
    CHECK(std::abs(kirkwood_cross_entropy(p) - rhs) < 1e-8);
  }

  // X2 declares three symbols but never takes the third.
  std::vector<double> holes;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 2; ++c) holes.push_back(b == 2 ? 0.0 : 1.0 / 8.0);
  const JointPmf bad({"X1", "X2", "C"}, {2, 3, 2}, holes, 2);
  CHECK_THROWS_AS(kirkwood_cross_entropy(bad), DataError);
}

TEST_CASE("fano lower bound") {
  CHECK(fano_lower_bound(1.0, 1.0, 3).value == doctest::Approx(0.0));
  CHECK(std::abs(fano_lower_bound(0.5, 2.0, 4).value - 0.5 / std::log2(3.0)) < 1e-12);
  CHECK(std::abs(fano_lower_bound(0.5, 2.0, 4).value - 0.3155) < 1e-3);
  const auto binary = fano_lower_bound(0.2, 1.0, 2);
  CHECK(binary.degenerate);
  CHECK(binary.value == 0.0);
  CHECK_THROWS_AS(fano_lower_bound(-0.1, 1.0, 3), ConfigError);
}

TEST_CASE("hellman-raviv upper bound") {
  CHECK(hellman_raviv_upper_bound(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(hellman_raviv_upper_bound(0.31, 1.0) == doctest::Approx(0.345));
  CHECK(hellman_raviv_upper_bound(0.0, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(hellman_raviv_upper_bound(1.2, 1.0), ConfigError);
  // The balanced-pair error of 0.25 respects the bound.
  const double i1 = mutual_information(fixtures::balanced_pair_pmf(), {0}, {2});
  CHECK(0.25 <= hellman_raviv_upper_bound(i1, 1.0));
}

TEST_CASE("empirical terms on the skewed-pair dataset") {
  const auto d = fixtures::skewed_pair_dataset();
  const auto t = empirical_mi_terms(d);
  const auto exact = mi_terms(fixtures::skewed_pair_pmf());
  CHECK(t.relevance(0) == doctest::Approx(exact.relevance(0)).epsilon(1e-12));
  CHECK(t.relevance(1) == doctest::Approx(exact.relevance(1)).epsilon(1e-12));
  CHECK(truncate2(t.relevance(0)) == doctest::Approx(0.18));
  CHECK(truncate2(t.relevance(1)) == doctest::Approx(0.20));
}

TEST_CASE("duplicated column has redundancy equal to its entropy") {
  const auto base = fixtures::balanced_pair_dataset();
  Eigen::MatrixXi x(base.rows(), 2);
  x.col(0) = base.values().col(1);
  x.col(1) = base.values().col(1);
  const DiscreteDataset d(x, base.labels(), {"X2", "X2copy"});
  const auto t = empirical_mi_terms(d);
  const auto pmf = empirical_pmf(d);
  CHECK(t.pairwise(0, 1) == doctest::Approx(entropy(pmf, {0})).epsilon(1e-12));
}

TEST_CASE("single-feature dataset gives a 1x1 zero redundancy") {
  Eigen::MatrixXi x(4, 1);
  x << 0, 1, 0, 1;
  Eigen::VectorXi y(4);
  y << 0, 1, 1, 0;
  const auto t = empirical_mi_terms(DiscreteDataset(x, y));
  CHECK(t.matrix(Redundancy::Pairwise).redundancy.size() == 1);
  CHECK(t.matrix(Redundancy::ThreeWay).redundancy(0, 0) == 0.0);
}

TEST_CASE("miller-madow correction shrinks plug-in relevance") {
  const auto d = fixtures::xor_noise_dataset();
  const auto plain = empirical_mi_terms(d);
  const auto corrected = empirical_mi_terms(d, true);
  for (Eigen::Index i = 0; i < plain.relevance.size(); ++i) {
    CHECK(corrected.relevance(i) >= 0.0);
    CHECK(corrected.relevance(i) <= plain.relevance(i) + 1e-15);
  }
  CHECK((corrected.relevance - plain.relevance).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("property: empirical terms match the empirical pmf") {
  const auto d = fixtures::xor_noise_dataset(3);
  const auto t = empirical_mi_terms(d);
  const auto p = empirical_pmf(d);
  const std::size_t c = p.num_vars() - 1;
  for (std::size_t i = 0; i < d.num_features(); ++i) {
    CHECK(t.relevance(static_cast<Eigen::Index>(i)) == doctest::Approx(oracle_mi(p, {i}, {c})).epsilon(1e-10));
    for (std::size_t j = i + 1; j < d.num_features(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      CHECK(t.pairwise(ii, jj) == doctest::Approx(oracle_mi(p, {i}, {j})).epsilon(1e-10));
      CHECK(t.joint_relevance(ii, jj) == doctest::Approx(oracle_mi(p, {i, j}, {c})).epsilon(1e-10));
      CHECK(std::abs(t.three_way(ii, jj) - multiway_mi(p, {i, j, c})) < 1e-10);
    }
  }
}

TEST_CASE("property: chain rule holds for every ordering") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 5; ++t) {
    const auto p = testing_support::random_pmf(rng, 4, 2);
    const double joint = oracle_mi(p, {0, 1, 2, 3}, {4});
    std::vector<std::size_t> order{0, 1, 2, 3};
    do {
      double total = 0.0;
      VarSet given;
      for (std::size_t v : order) {
        total += conditional_mi(p, {v}, {4}, given);
        given.push_back(v);
      }
      CHECK(std::abs(total - joint) < 1e-10);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("property: multiway MI is symmetric in its arguments") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5; ++t) {
    const auto p = testing_support::random_pmf(rng, 3);
    const double ref = multiway_mi(p, {0, 1, 2, 3});
    std::vector<std::size_t> order{0, 1, 2, 3};
    while (std::next_permutation(order.begin(), order.end())) {
      std::vector<VarSet> vars;
      for (std::size_t v : order) vars.push_back({v});
      CHECK(std::abs(multiway_mi(p, vars) - ref) < 1e-10);
    }
  }
}

TEST_CASE("property: three-way identity") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto p = testing_support::random_pmf(rng, 2);
    const double lhs = multiway_mi(p, {0, 1, 2});
    const double rhs = oracle_mi(p, {0}, {2}) + oracle_mi(p, {1}, {2}) - oracle_mi(p, {0, 1}, {2});
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

}  // TEST_SUITE
