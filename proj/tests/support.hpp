#pragma once

// Shared generators and brute-force oracles. The oracles work straight from
// the probability table and never call into the library's entropy code.

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsel/criteria.hpp"
#include "fsel/infotheory.hpp"

namespace testing_support {

/// Random pmf over `features` variables plus a class variable (last).
/// With full_support every cell gets mass bounded away from zero.
inline fsel::JointPmf random_pmf(std::mt19937_64& rng, std::size_t features, int max_card = 3,
                                 bool full_support = true) {
  std::uniform_int_distribution<int> card(2, max_card);
  std::vector<std::string> names;
  std::vector<int> cards;
  for (std::size_t i = 0; i < features; ++i) {
    names.push_back("X" + std::to_string(i + 1));
    cards.push_back(card(rng));
  }
  names.push_back("C");
  cards.push_back(2);
  std::size_t cells = 1;
  for (int c : cards) cells *= static_cast<std::size_t>(c);
  std::gamma_distribution<double> g(0.7);
  std::bernoulli_distribution hole(0.2);
  std::vector<double> probs(cells);
  double total = 0.0;
  for (auto& p : probs) {
    p = full_support ? 0.05 + g(rng) : (hole(rng) ? 0.0 : g(rng));
    total += p;
  }
  if (total == 0.0) {
    probs[0] = 1.0;
    total = 1.0;
  }
  for (auto& p : probs) p /= total;
  return fsel::JointPmf(std::move(names), std::move(cards), std::move(probs), features);
}

/// Symbol of variable v in flat cell index `cell` (row-major, last fastest).
inline int symbol_of(const fsel::JointPmf& p, std::size_t cell, std::size_t v) {
  std::size_t stride = 1;
  for (std::size_t k = p.num_vars(); k-- > v + 1;) stride *= static_cast<std::size_t>(p.cards()[k]);
  return static_cast<int>((cell / stride) % static_cast<std::size_t>(p.cards()[v]));
}

inline std::vector<int> key_of(const fsel::JointPmf& p, std::size_t cell, const std::vector<std::size_t>& vars) {
  std::vector<int> key;
  for (std::size_t v : vars) key.push_back(symbol_of(p, cell, v));
  return key;
}

/// H(vars) by accumulating the marginal in a map.
inline double oracle_entropy(const fsel::JointPmf& p, const std::vector<std::size_t>& vars) {
  std::map<std::vector<int>, double> m;
  for (std::size_t cell = 0; cell < p.probs().size(); ++cell) m[key_of(p, cell, vars)] += p.probs()[cell];
  double h = 0.0;
  for (const auto& [k, q] : m)
    if (q > 0) h -= q * std::log2(q);
  return h;
}

/// I(A;B) straight from the definition sum p(a,b) log p(a,b) / (p(a) p(b)).
inline double oracle_mi(const fsel::JointPmf& p, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::map<std::vector<int>, double> pa, pb, pab;
  for (std::size_t cell = 0; cell < p.probs().size(); ++cell) {
    const double q = p.probs()[cell];
    auto ka = key_of(p, cell, a), kb = key_of(p, cell, b);
    pa[ka] += q;
    pb[kb] += q;
    ka.insert(ka.end(), kb.begin(), kb.end());
    pab[ka] += q;
  }
  double total = 0.0;
  for (const auto& [k, q] : pab) {
    if (q <= 0) continue;
    const std::vector<int> ka(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(a.size()));
    const std::vector<int> kb(k.begin() + static_cast<std::ptrdiff_t>(a.size()), k.end());
    total += q * std::log2(q / (pa[ka] * pb[kb]));
  }
  return total;
}

/// Features mutually independent and independent given C. C is uniform on
/// four values; X1 follows its high bit, X2 its low bit, X3 ignores it.
inline fsel::JointPmf factorized_pmf() {
  const double flip[3] = {0.2, 0.35, 0.5};
  std::vector<double> probs;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d)
        for (int c = 0; c < 4; ++c) {
          const int bit[3] = {c / 2, c % 2, 0};
          const int s[3] = {a, b, d};
          double q = 0.25;
          for (int i = 0; i < 3; ++i) q *= s[i] == bit[i] ? 1.0 - flip[i] : flip[i];
          probs.push_back(q);
        }
  return fsel::JointPmf({"X1", "X2", "X3", "C"}, {2, 2, 2, 4}, probs, 3);
}

/// Random MiMatrix; three-way redundancies are signed, pairwise ones are not.
inline fsel::MiMatrix random_mi_matrix(std::mt19937_64& rng, Eigen::Index n, fsel::Redundancy kind) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  fsel::MiMatrix mi;
  mi.kind = kind;
  mi.relevance.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) mi.relevance(i) = u(rng);
  mi.redundancy = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      mi.redundancy(i, j) = mi.redundancy(j, i) = kind == fsel::Redundancy::ThreeWay ? u(rng) - 0.5 : u(rng) * 0.5;
  return mi;
}

/// Random symmetric Q with nonnegative entries.
inline fsel::QMatrix<double> random_nonnegative_q(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  fsel::QMatrix<double> q;
  q.q.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) q.q(i, j) = q.q(j, i) = u(rng);
  q.p_target = p;
  return q;
}

/// Random symmetric Q with entries of both signs.
inline fsel::QMatrix<double> random_signed_q(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  fsel::QMatrix<double> q;
  q.q.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) q.q(i, j) = q.q(j, i) = u(rng);
  q.p_target = p;
  return q;
}

}  // namespace testing_support
