#include "fsel/fixtures.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <random>

#include "fsel/search.hpp"

namespace fsel::fixtures {

namespace {

// Row-major (X1, X2, C) table from class priors and per-class
// Pr(X=+1 | C), assuming independence given C.
JointPmf conditional_pair(double prior_pos, double x1_pos, double x1_neg, double x2_pos, double x2_neg) {
  std::vector<double> probs(8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const double pc = c ? prior_pos : 1.0 - prior_pos;
        const double p1 = c ? x1_pos : x1_neg;
        const double p2 = c ? x2_pos : x2_neg;
        probs[static_cast<std::size_t>(a * 4 + b * 2 + c)] = pc * (a ? p1 : 1.0 - p1) * (b ? p2 : 1.0 - p2);
      }
  return JointPmf({"X1", "X2", "C"}, {2, 2, 2}, std::move(probs), 2);
}

// Rows in proportion to a (X1, X2, C) pmf scaled by m; every cell must be integral.
DiscreteDataset realize(const JointPmf& p, int m) {
  std::vector<std::array<int, 3>> rows;
  for (int cell = 0; cell < 8; ++cell) {
    const int n = static_cast<int>(std::lround(p.probs()[static_cast<std::size_t>(cell)] * m));
    for (int k = 0; k < n; ++k) rows.push_back({cell / 4, (cell / 2) % 2, cell % 2});
  }
  Eigen::MatrixXi x(static_cast<Eigen::Index>(rows.size()), 2);
  Eigen::VectorXi y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    x(static_cast<Eigen::Index>(r), 0) = rows[r][0];
    x(static_cast<Eigen::Index>(r), 1) = rows[r][1];
    y(static_cast<Eigen::Index>(r)) = rows[r][2];
  }
  return DiscreteDataset(std::move(x), std::move(y), {"X1", "X2"}, {"-1", "+1"});
}

}  // namespace

JointPmf balanced_pair_pmf() { return conditional_pair(0.5, 1.0, 0.5, 0.9, 0.3); }
DiscreteDataset balanced_pair_dataset() { return realize(balanced_pair_pmf(), 40); }

JointPmf skewed_pair_pmf() { return conditional_pair(0.9, 1.0, 0.5, 0.8, 0.0); }
DiscreteDataset skewed_pair_dataset() { return realize(skewed_pair_pmf(), 100); }

SubsetOracle interaction_blocks_oracle() {
  ScoreTable table{
      {{0}, 0.0}, {{1}, 0.0}, {{0, 1}, 0.4}, {{2}, 0.2}, {{3}, 0.25}, {{2, 3}, 0.45},
  };
  return oracle_from_table(std::move(table), 4, block_default({{0, 1}, {2, 3}}));
}

MiMatrix interaction_blocks_terms() {
  MiMatrix mi;
  mi.kind = Redundancy::ThreeWay;
  mi.relevance = Eigen::Vector4d(0.0, 0.0, 0.2, 0.25);
  mi.redundancy = Eigen::MatrixXd::Zero(4, 4);
  // I(Xi;Xj;C) = I(Xi;C) + I(Xj;C) - I(Xi,Xj;C)
  mi.redundancy(0, 1) = mi.redundancy(1, 0) = 0.0 + 0.0 - 0.4;
  mi.redundancy(2, 3) = mi.redundancy(3, 2) = 0.2 + 0.25 - 0.45;
  return mi;
}

JointPmf xor_pmf() {
  std::vector<double> probs(8, 0.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) probs[static_cast<std::size_t>(a * 4 + b * 2 + (a ^ b))] = 0.25;
  return JointPmf({"X1", "X2", "C"}, {2, 2, 2}, std::move(probs), 2);
}

JointPmf class_blind_pmf() {
  std::vector<double> probs(8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) probs[static_cast<std::size_t>(a * 4 + b * 2 + c)] = 0.5 * (a == b ? 0.9 : 0.1) * 0.5;
  return JointPmf({"X1", "X2", "C"}, {2, 2, 2}, std::move(probs), 2);
}

DiscreteDataset xor_noise_dataset(std::size_t noise, std::uint64_t seed) {
  constexpr Eigen::Index m = 200;
  const auto n = static_cast<Eigen::Index>(2 + noise);
  Eigen::MatrixXi x(m, n);
  Eigen::VectorXi y(m);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index r = 0; r < m; ++r) {
    x(r, 0) = static_cast<int>(r % 2);
    x(r, 1) = static_cast<int>((r / 2) % 2);
    y(r) = x(r, 0) ^ x(r, 1);
    for (Eigen::Index j = 2; j < n; ++j) x(r, j) = coin(rng) ? 1 : 0;
  }
  std::vector<std::string> names{"X1", "X2"};
  for (std::size_t k = 0; k < noise; ++k) names.push_back("N" + std::to_string(k + 1));
  return DiscreteDataset(std::move(x), std::move(y), std::move(names));
}

DiscreteDataset separable_dataset(std::uint64_t seed) {
  constexpr Eigen::Index m = 400, n = 10, a = 2, b = 5;
  Eigen::MatrixXi x(m, n);
  Eigen::VectorXi y(m);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index r = 0; r < m; ++r) {
    y(r) = static_cast<int>(r % 4);
    for (Eigen::Index j = 0; j < n; ++j) x(r, j) = coin(rng) ? 1 : 0;
    x(r, a) = y(r) / 2;
    x(r, b) = y(r) % 2;
  }
  return DiscreteDataset(std::move(x), std::move(y), {}, {"c0", "c1", "c2", "c3"});
}

JointPmf seeded_pmf(std::uint64_t seed, std::size_t features, int max_card) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> card(2, max_card);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::vector<std::string> names;
  std::vector<int> cards;
  std::size_t cells = 2;
  for (std::size_t i = 0; i < features; ++i) {
    names.push_back("X" + std::to_string(i + 1));
    cards.push_back(card(rng));
    cells *= static_cast<std::size_t>(cards.back());
  }
  names.push_back("C");
  cards.push_back(2);
  std::vector<double> probs(cells);
  double total = 0.0;
  for (auto& q : probs) total += q = mass(rng);
  for (auto& q : probs) q /= total;
  return JointPmf(std::move(names), std::move(cards), std::move(probs), features);
}

std::vector<std::pair<std::string, JointPmf>> bundled_pmfs() {
  return {
      {"balanced-pair", balanced_pair_pmf()},
      {"skewed-pair", skewed_pair_pmf()},
      {"xor", xor_pmf()},
      {"class-blind", class_blind_pmf()},
      {"seeded-3", seeded_pmf(3, 3)},
      {"seeded-4", seeded_pmf(4, 4, 2)},
  };
}

void write_csv(const DiscreteDataset& data, std::ostream& out) {
  for (const auto& name : data.names()) out << name << ',';
  out << "class\n";
  for (Eigen::Index r = 0; r < data.values().rows(); ++r) {
    for (Eigen::Index j = 0; j < data.values().cols(); ++j) out << data.values()(r, j) << ',';
    out << data.class_names()[static_cast<std::size_t>(data.labels()(r))] << '\n';
  }
}

}  // namespace fsel::fixtures
