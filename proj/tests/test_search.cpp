#include <doctest.h>

#include <bit>
#include <random>

#include "fsel/errors.hpp"
#include "fsel/fixtures.hpp"
#include "fsel/search.hpp"
#include "support.hpp"

using namespace fsel;

namespace {

SubsetOracle additive(const Eigen::VectorXd& w) {
  return oracle_from_table({}, static_cast<std::size_t>(w.size()), additive_default(w));
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("p = n returns the full set") {
  const auto o = additive(Eigen::Vector3d(0.3, 0.1, 0.2));
  CHECK(forward_selection(o, 3, 3).selected == FeatureSet{0, 1, 2});
  CHECK(backward_elimination(o, 3, 3).selected == FeatureSet{0, 1, 2});
  CHECK(exhaustive(o, 3, 3).selected == FeatureSet{0, 1, 2});
}

TEST_CASE("p out of range") {
  const auto o = additive(Eigen::Vector3d(0.3, 0.1, 0.2));
  CHECK_THROWS_AS(forward_selection(o, 3, 0), ConfigError);
  CHECK_THROWS_AS(backward_elimination(o, 3, 4), ConfigError);
  CHECK_THROWS_AS(exhaustive(o, 3, 4), ConfigError);
}

TEST_CASE("additive oracle: greedy strategies agree with exhaustive") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd w(7);
    for (Eigen::Index i = 0; i < 7; ++i) w(i) = u(rng);
    const auto o = additive(w);
    for (std::size_t p = 1; p <= 7; ++p) {
      const auto best = exhaustive(o, 7, p).selected;
      CHECK(forward_selection(o, 7, p).selected == best);
      CHECK(backward_elimination(o, 7, p).selected == best);
      // The top-p weights.
      std::vector<std::size_t> order(7);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return w(static_cast<Eigen::Index>(a)) > w(static_cast<Eigen::Index>(b)); });
      FeatureSet top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p));
      std::sort(top.begin(), top.end());
      CHECK(best == top);
    }
  }
}

TEST_CASE("interaction blocks: forward picks the individually strong pair") {
  const auto o = fixtures::interaction_blocks_oracle();
  const auto r = forward_selection(o, 4, 2);
  CHECK(r.selected == FeatureSet{2, 3});
  CHECK(r.score == doctest::Approx(0.45));
  REQUIRE(r.trajectory.size() == 2);
  CHECK(r.trajectory[0].feature == std::optional<std::size_t>(3));
  CHECK(r.trajectory[0].score == doctest::Approx(0.25));
  CHECK(r.trajectory[1].feature == std::optional<std::size_t>(2));
  CHECK(r.trajectory[1].score == doctest::Approx(0.45));
}

TEST_CASE("interaction blocks: backward keeps the cooperative pair") {
  const auto o = fixtures::interaction_blocks_oracle();
  const auto r = backward_elimination(o, 4, 2);
  CHECK(r.selected == FeatureSet{0, 1});
  CHECK(r.score == doctest::Approx(0.4));
  REQUIRE(r.trajectory.size() == 2);
  CHECK(r.trajectory[0].feature == std::optional<std::size_t>(2));
  CHECK(r.trajectory[0].score == doctest::Approx(0.65));
  CHECK(r.trajectory[1].feature == std::optional<std::size_t>(3));
}

TEST_CASE("interaction blocks: exhaustive finds the optimum") {
  const auto r = exhaustive(fixtures::interaction_blocks_oracle(), 4, 2);
  CHECK(r.selected == FeatureSet{2, 3});
  CHECK(r.score == doctest::Approx(0.45));
}

TEST_CASE("table oracle reproduces the stated block values") {
  const auto o = fixtures::interaction_blocks_oracle();
  CHECK(o({0, 1}) == doctest::Approx(0.4));
  CHECK(o({2}) == doctest::Approx(0.2));
  CHECK(o({3}) == doctest::Approx(0.25));
  CHECK(o({2, 3}) == doctest::Approx(0.45));
  CHECK(o({0, 1, 2, 3}) == doctest::Approx(0.85));
  CHECK(o({0, 3}) == doctest::Approx(0.25));
}

TEST_CASE("table without default rejects unknown sets") {
  const auto o = oracle_from_table({{{0}, 1.0}}, 3);
  CHECK(o({0}) == 1.0);
  CHECK_THROWS_AS(o({1}), ConfigError);
}

TEST_CASE("exhaustive matches a brute-force quadratic form") {
  std::mt19937_64 rng(2);
  const auto q = testing_support::random_signed_q(rng, 10, 4);
  const auto r = exhaustive(make_quadratic_oracle(q), 10, 4);
  double best = -1e300;
  unsigned best_mask = 0;
  for (unsigned mask = 0; mask < 1024; ++mask) {
    if (std::popcount(mask) != 4) continue;
    double v = 0.0;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        if ((mask >> i & 1) && (mask >> j & 1)) v += q.q(i, j);
    if (v > best) {
      best = v;
      best_mask = mask;
    }
  }
  FeatureSet expected;
  for (std::size_t i = 0; i < 10; ++i)
    if (best_mask >> i & 1) expected.push_back(i);
  CHECK(r.selected == expected);
  CHECK(r.score == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("enumeration cap names the subset count") {
  const auto o = additive(Eigen::VectorXd::Ones(30));
  try {
    exhaustive(o, 30, 10);
    FAIL("expected the cap to trip");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("C(30,10) = 30045015") != std::string::npos);
  }
}

TEST_CASE("binomial and subset enumeration") {
  CHECK(binomial(10, 4) == 210);
  CHECK(binomial(4, 5) == 0);
  CHECK(binomial(200, 100) == std::numeric_limits<std::uint64_t>::max());
  std::size_t seen = 0;
  FeatureSet prev;
  for_each_subset(8, 3, [&](const FeatureSet& s) {
    if (seen) CHECK(prev < s);
    prev = s;
    ++seen;
    return true;
  });
  CHECK(seen == 56);
}

TEST_CASE("property: greedy oracle call counts") {
  const std::size_t n = 9;
  for (std::size_t p = 1; p <= n; ++p) {
    const auto fo = additive(Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 0.1, 0.9));
    forward_selection(fo, n, p);
    std::size_t expected = 0;
    for (std::size_t k = 0; k < p; ++k) expected += n - k;
    CHECK(fo.evaluations() == expected);

    const auto bo = additive(Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 0.1, 0.9));
    backward_elimination(bo, n, p);
    std::size_t removals = 0;
    for (std::size_t k = p + 1; k <= n; ++k) removals += k;
    CHECK(bo.evaluations() == removals + (p == n ? 1 : 0));
  }
}

TEST_CASE("ties break toward the lowest index") {
  const auto flat = additive(Eigen::VectorXd::Ones(5));
  CHECK(forward_selection(flat, 5, 2).selected == FeatureSet{0, 1});
  // Backward elimination drops the lowest index first.
  CHECK(backward_elimination(flat, 5, 2).selected == FeatureSet{3, 4});
  CHECK(exhaustive(flat, 5, 2).selected == FeatureSet{0, 1});
}

TEST_CASE("restricted growth and shrinking") {
  const auto o = additive(Eigen::Vector4d(0.4, 0.3, 0.2, 0.1));
  CHECK(grow_forward(o, {3}, {1, 2, 3}, 3).selected == FeatureSet{1, 2, 3});
  CHECK(shrink_backward(o, {0, 2, 3}, 2).selected == FeatureSet{0, 2});
  CHECK_THROWS_AS(grow_forward(o, {3}, {3}, 2), ConfigError);
}

}  // TEST_SUITE
