#include "fsel/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsel/errors.hpp"

namespace fsel {

namespace {

constexpr double kMassTolerance = 1e-12;

double plogp_sum(std::span<const double> table) {
  double h = 0.0;
  for (double q : table)
    if (q > 0.0) h -= q * std::log2(q);
  return h;
}

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void require_disjoint(const VarSet& a, const VarSet& b, const char* what) {
  for (std::size_t x : a)
    if (std::find(b.begin(), b.end(), x) != b.end())
      throw ConfigError(std::string(what) + ": variable sets overlap");
}

// Calls f(subset) for every k-combination of `items`, in lexicographic order.
template <typename F>
void for_each_combination(const VarSet& items, std::size_t k, F&& f) {
  const std::size_t n = items.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  VarSet subset(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
    f(subset);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double entropy_of_counts(std::span<const long> table, double total, bool miller_madow) {
  double h = 0.0;
  long support = 0;
  for (long c : table) {
    if (c == 0) continue;
    ++support;
    const double q = static_cast<double>(c) / total;
    h -= q * std::log2(q);
  }
  if (miller_madow) h += static_cast<double>(support - 1) / (2.0 * total * std::log(2.0));
  return h;
}

// Marginalizes a row-major count table onto the kept axes.
std::vector<long> reduce_counts(const ContingencyTable& t, const std::vector<int>& keep) {
  std::vector<int> dims;
  for (int k : keep) dims.push_back(t.dims[k]);
  std::size_t cells = 1;
  for (int d : dims) cells *= static_cast<std::size_t>(d);
  std::vector<long> out(cells, 0);
  std::vector<std::size_t> digit(t.dims.size());
  for (std::size_t flat = 0; flat < t.counts.size(); ++flat) {
    std::size_t rest = flat;
    for (std::size_t a = t.dims.size(); a-- > 0;) {
      digit[a] = rest % static_cast<std::size_t>(t.dims[a]);
      rest /= static_cast<std::size_t>(t.dims[a]);
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) idx = idx * static_cast<std::size_t>(dims[k]) + digit[keep[k]];
    out[idx] += t.counts[flat];
  }
  return out;
}

std::size_t require_class(const JointPmf& p) {
  if (!p.class_index()) throw ConfigError("pmf has no designated class variable");
  return *p.class_index();
}

}  // namespace

JointPmf::JointPmf(std::vector<std::string> names, std::vector<int> cards, std::vector<double> probs,
                   std::optional<std::size_t> class_index)
    : names_(std::move(names)), cards_(std::move(cards)), probs_(std::move(probs)), class_index_(class_index) {
  if (cards_.empty()) throw DataError("pmf needs at least one variable");
  if (names_.empty())
    for (std::size_t i = 0; i < cards_.size(); ++i) names_.push_back("Y" + std::to_string(i + 1));
  if (names_.size() != cards_.size()) throw DataError("pmf name count does not match alphabet count");
  std::size_t cells = 1;
  for (int c : cards_) {
    if (c < 1) throw DataError("pmf alphabet sizes must be positive");
    cells *= static_cast<std::size_t>(c);
  }
  if (probs_.size() != cells)
    throw DataError("pmf table has " + std::to_string(probs_.size()) + " entries, expected " +
                    std::to_string(cells));
  double mass = 0.0;
  for (double q : probs_) {
    if (!(q >= 0.0)) throw DataError("pmf entries must be nonnegative");
    mass += q;
  }
  if (std::abs(mass - 1.0) > kMassTolerance) throw DataError("pmf mass differs from 1");
  if (class_index_ && *class_index_ >= cards_.size()) throw DataError("class index out of range");
}

std::size_t JointPmf::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ConfigError("unknown variable '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

VarSet JointPmf::features() const {
  VarSet out;
  for (std::size_t i = 0; i < cards_.size(); ++i)
    if (!class_index_ || i != *class_index_) out.push_back(i);
  return out;
}

std::vector<double> JointPmf::marginal(std::span<const std::size_t> vars) const {
  const std::size_t n = cards_.size();
  std::vector<std::size_t> out_stride(n, 0);
  std::vector<bool> seen(n, false);
  std::size_t cells = 1;
  for (std::size_t k = vars.size(); k-- > 0;) {
    const std::size_t v = vars[k];
    if (v >= n) throw ConfigError("variable index " + std::to_string(v) + " out of range");
    if (seen[v]) throw ConfigError("variable listed twice");
    seen[v] = true;
    out_stride[v] = cells;
    cells *= static_cast<std::size_t>(cards_[v]);
  }
  std::vector<double> out(cells, 0.0);
  std::vector<std::size_t> digit(n, 0);
  std::size_t target = 0;
  for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
    out[target] += probs_[flat];
    // Odometer increment, last variable fastest.
    for (std::size_t a = n; a-- > 0;) {
      target += out_stride[a];
      if (++digit[a] < static_cast<std::size_t>(cards_[a])) break;
      target -= out_stride[a] * digit[a];
      digit[a] = 0;
    }
  }
  return out;
}

double entropy(const JointPmf& p, const VarSet& vars) {
  if (vars.empty()) return 0.0;
  return plogp_sum(p.marginal(vars));
}

double mutual_information(const JointPmf& p, const VarSet& a, const VarSet& b) {
  if (a.empty() || b.empty()) throw ConfigError("mutual_information: empty variable set");
  require_disjoint(a, b, "mutual_information");
  return entropy(p, a) + entropy(p, b) - entropy(p, set_union(a, b));
}

double conditional_mi(const JointPmf& p, const VarSet& a, const VarSet& b, const VarSet& given) {
  if (a.empty() || b.empty()) throw ConfigError("conditional_mi: empty variable set");
  require_disjoint(a, b, "conditional_mi");
  require_disjoint(a, given, "conditional_mi");
  require_disjoint(b, given, "conditional_mi");
  if (given.empty()) return mutual_information(p, a, b);
  return entropy(p, set_union(a, given)) + entropy(p, set_union(b, given)) -
         entropy(p, set_union(set_union(a, b), given)) - entropy(p, given);
}

double multiway_mi(const JointPmf& p, std::span<const VarSet> vars, const VarSet& given) {
  if (vars.size() < 2) throw ConfigError("multiway_mi needs at least two variables");
  if (vars.size() == 2) return conditional_mi(p, vars[0], vars[1], given);
  const auto head = vars.first(vars.size() - 1);
  return multiway_mi(p, head, given) - multiway_mi(p, head, set_union(given, vars.back()));
}

double multiway_mi(const JointPmf& p, std::initializer_list<std::size_t> singles) {
  std::vector<VarSet> vars;
  for (std::size_t v : singles) vars.push_back({v});
  return multiway_mi(p, vars);
}

ExpansionTerms expansion_first(const JointPmf& p) {
  const std::size_t c = require_class(p);
  const VarSet features = p.features();
  ExpansionTerms out;
  for (std::size_t k = 1; k <= features.size(); ++k) {
    double sum = 0.0;
    for_each_combination(features, k, [&](const VarSet& subset) {
      std::vector<VarSet> vars;
      for (std::size_t f : subset) vars.push_back({f});
      vars.push_back({c});
      sum += multiway_mi(p, vars);
    });
    out.order_sums.push_back(k % 2 == 1 ? sum : -sum);
    out.total += out.order_sums.back();
  }
  return out;
}

ExpansionTerms expansion_second(const JointPmf& p) {
  const std::size_t c = require_class(p);
  const VarSet features = p.features();
  const std::size_t n = features.size();
  ExpansionTerms out;
  double relevance = 0.0;
  for (std::size_t f : features) relevance += mutual_information(p, {f}, {c});
  if (n == 1) {
    out.order_sums.push_back(0.5 * relevance);
    out.total = out.order_sums.back();
    return out;
  }
  out.order_sums.push_back(relevance);

  double interaction = 0.0;
  for_each_combination(features, 2, [&](const VarSet& pair) {
    interaction += multiway_mi(p, {pair[0], pair[1], c});
  });
  out.order_sums.push_back(-interaction / static_cast<double>(n - 1));

  // Conditioning sets of size k >= 2 keep weight k!(n-1-k)! / (2 (n-1)!).
  for (std::size_t k = 2; k + 1 <= n; ++k) {
    double weight = 0.5;
    for (std::size_t j = 1; j <= k; ++j) weight *= static_cast<double>(j) / static_cast<double>(n - j);
    double sum = 0.0;
    for (std::size_t f : features) {
      VarSet rest;
      for (std::size_t g : features)
        if (g != f) rest.push_back(g);
      for_each_combination(rest, k, [&](const VarSet& cond) { sum += conditional_mi(p, {f}, {c}, cond); });
    }
    out.order_sums.push_back(weight * sum);
  }
  out.total = std::accumulate(out.order_sums.begin(), out.order_sums.end(), 0.0);
  return out;
}

double kirkwood_cross_entropy(const JointPmf& p) {
  const VarSet features = p.features();
  const std::size_t n = features.size();
  if (n < 2) throw ConfigError("Kirkwood approximation needs at least two features");

  std::vector<std::vector<double>> single(n);
  for (std::size_t i = 0; i < n; ++i) {
    single[i] = p.marginal(std::span(&features[i], 1));
    for (double q : single[i])
      if (q <= 0.0) throw DataError("Kirkwood undefined on support: feature '" + p.names()[features[i]] +
                                    "' has a zero-probability symbol");
  }
  std::vector<std::vector<std::vector<double>>> pair(n, std::vector<std::vector<double>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pair[i][j] = p.marginal(VarSet{features[i], features[j]});

  const std::vector<double> joint = p.marginal(features);
  std::vector<int> digit(n, 0);
  double cross = 0.0;
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    if (joint[flat] > 0.0) {
      double log_hat = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        log_hat -= static_cast<double>(n - 2) * std::log2(single[i][digit[i]]);
        for (std::size_t j = i + 1; j < n; ++j) {
          const double q = pair[i][j][digit[i] * p.cards()[features[j]] + digit[j]];
          if (q <= 0.0) throw DataError("Kirkwood undefined on support");
          log_hat += std::log2(q);
        }
      }
      cross -= joint[flat] * log_hat;
    }
    for (std::size_t a = n; a-- > 0;) {
      if (++digit[a] < p.cards()[features[a]]) break;
      digit[a] = 0;
    }
  }
  return cross;
}

BoundResult fano_lower_bound(double mi, double h_c, int n_classes) {
  if (mi < 0.0 || h_c < 0.0) throw ConfigError("Fano bound: negative information");
  if (n_classes < 2) throw ConfigError("Fano bound needs at least two classes");
  if (n_classes == 2) return {0.0, true};
  return {std::max(0.0, (h_c - mi - 1.0) / std::log2(static_cast<double>(n_classes - 1))), false};
}

double hellman_raviv_upper_bound(double mi, double h_c) {
  if (mi < 0.0 || h_c < 0.0) throw ConfigError("Hellman-Raviv bound: negative information");
  if (mi > h_c + 1e-10) throw ConfigError("Hellman-Raviv bound: I(X;C) exceeds H(C)");
  return std::clamp(0.5 * (h_c - mi), 0.0, 1.0);
}

MiMatrix MiTerms::matrix(Redundancy kind) const {
  return {relevance, kind == Redundancy::ThreeWay ? three_way : pairwise, kind};
}

MiTerms empirical_mi_terms(const DiscreteDataset& data, bool miller_madow) {
  const auto n = static_cast<Eigen::Index>(data.num_features());
  const double total = static_cast<double>(data.rows());
  MiTerms t;
  t.relevance.setZero(n);
  t.three_way.setZero(n, n);
  t.pairwise.setZero(n, n);
  t.joint_relevance.setZero(n, n);

  auto h = [&](const ContingencyTable& table, const std::vector<int>& keep) {
    return entropy_of_counts(reduce_counts(table, keep), total, miller_madow);
  };
  const std::size_t label_only[] = {kLabel};
  const double h_c = entropy_of_counts(counts(data, label_only).counts, total, miller_madow);

  std::vector<double> h_i(n), h_ic(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t vars[] = {static_cast<std::size_t>(i), kLabel};
    const auto table = counts(data, vars);
    h_i[i] = h(table, {0});
    h_ic[i] = entropy_of_counts(table.counts, total, miller_madow);
    t.relevance(i) = std::max(0.0, h_i[i] + h_c - h_ic[i]);
    t.joint_relevance(i, i) = t.relevance(i);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const std::size_t vars[] = {static_cast<std::size_t>(i), static_cast<std::size_t>(j), kLabel};
      const auto table = counts(data, vars);
      const double h_ij = h(table, {0, 1});
      const double h_ijc = entropy_of_counts(table.counts, total, miller_madow);
      const double pairwise = h_i[i] + h_i[j] - h_ij;
      const double conditional = h_ic[i] + h_ic[j] - h_ijc - h_c;
      t.pairwise(i, j) = t.pairwise(j, i) = pairwise;
      t.three_way(i, j) = t.three_way(j, i) = pairwise - conditional;
      t.joint_relevance(i, j) = t.joint_relevance(j, i) = h_ij + h_c - h_ijc;
    }
  }
  return t;
}

MiTerms mi_terms(const JointPmf& p) {
  const std::size_t c = require_class(p);
  const VarSet f = p.features();
  const auto n = static_cast<Eigen::Index>(f.size());
  MiTerms t;
  t.relevance.setZero(n);
  t.three_way.setZero(n, n);
  t.pairwise.setZero(n, n);
  t.joint_relevance.setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.relevance(i) = mutual_information(p, {f[i]}, {c});
    t.joint_relevance(i, i) = t.relevance(i);
    for (Eigen::Index j = 0; j < i; ++j) {
      t.pairwise(i, j) = t.pairwise(j, i) = mutual_information(p, {f[i]}, {f[j]});
      t.three_way(i, j) = t.three_way(j, i) = multiway_mi(p, {f[i], f[j], c});
      t.joint_relevance(i, j) = t.joint_relevance(j, i) = mutual_information(p, {f[i], f[j]}, {c});
    }
  }
  return t;
}

JointPmf empirical_pmf(const DiscreteDataset& data) {
  std::vector<std::string> names = data.names();
  std::vector<int> cards = data.alphabets();
  names.push_back("C");
  cards.push_back(data.num_classes());
  double cells = 1.0;
  for (int c : cards) cells *= c;
  if (cells > 1 << 24) throw ConfigError("empirical joint table too large");
  std::vector<double> probs(static_cast<std::size_t>(cells), 0.0);
  const double w = 1.0 / static_cast<double>(data.rows());
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(data.rows()); ++r) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < data.num_features(); ++j)
      idx = idx * static_cast<std::size_t>(cards[j]) + static_cast<std::size_t>(data.values()(r, static_cast<Eigen::Index>(j)));
    idx = idx * static_cast<std::size_t>(data.num_classes()) + static_cast<std::size_t>(data.labels()(r));
    probs[idx] += w;
  }
  // Renormalize away accumulated rounding before validation.
  const double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& q : probs) q /= mass;
  const std::size_t label_index = cards.size() - 1;
  return JointPmf(std::move(names), std::move(cards), std::move(probs), label_index);
}

}  // namespace fsel
