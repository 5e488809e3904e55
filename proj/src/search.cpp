#include "fsel/search.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace fsel {

SelectionResult grow_forward(const SubsetOracle& oracle, FeatureSet start, const FeatureSet& pool, std::size_t p) {
  const std::size_t n = oracle.num_features();
  FeatureSet current = normalize_set(std::move(start), n);
  const FeatureSet candidates = normalize_set(pool, n);
  if (p > n) throw ConfigError("p exceeds the number of features");
  if (current.size() > p) throw ConfigError("start set already larger than p");

  SelectionResult result;
  result.strategy = "fs";
  std::size_t step = 0;
  while (current.size() < p) {
    double best = -std::numeric_limits<double>::infinity();
    std::optional<std::size_t> pick;
    for (std::size_t m : candidates) {
      if (std::binary_search(current.begin(), current.end(), m)) continue;
      FeatureSet trial = current;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), m), m);
      const double s = oracle(trial);
      if (!pick || s > best) {
        best = s;
        pick = m;
      }
    }
    if (!pick) throw ConfigError("candidate pool too small to reach p features");
    current.insert(std::upper_bound(current.begin(), current.end(), *pick), *pick);
    result.trajectory.push_back({++step, current.size(), pick, best});
  }
  result.selected = current;
  result.score = current.empty() ? 0.0 : oracle(current);
  return result;
}

SelectionResult forward_selection(const SubsetOracle& oracle, std::size_t n, std::size_t p) {
  if (n != oracle.num_features()) throw ConfigError("n does not match the oracle's feature count");
  if (p < 1 || p > n) throw ConfigError("p must satisfy 1 <= p <= n");
  FeatureSet all(n);
  std::iota(all.begin(), all.end(), 0);
  return grow_forward(oracle, {}, all, p);
}

SelectionResult shrink_backward(const SubsetOracle& oracle, FeatureSet start, std::size_t p) {
  FeatureSet current = normalize_set(std::move(start), oracle.num_features());
  if (p < 1 || p > current.size()) throw ConfigError("p must satisfy 1 <= p <= |start|");
  SelectionResult result;
  result.strategy = "be";
  std::size_t step = 0;
  while (current.size() > p) {
    double best = -std::numeric_limits<double>::infinity();
    std::optional<std::size_t> drop;
    for (std::size_t k = 0; k < current.size(); ++k) {
      FeatureSet trial = current;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
      const double s = oracle(trial);
      if (!drop || s > best) {
        best = s;
        drop = current[k];
      }
    }
    current.erase(std::find(current.begin(), current.end(), *drop));
    result.trajectory.push_back({++step, current.size(), drop, best});
  }
  result.selected = current;
  result.score = oracle(current);
  return result;
}

SelectionResult backward_elimination(const SubsetOracle& oracle, std::size_t n, std::size_t p) {
  if (n != oracle.num_features()) throw ConfigError("n does not match the oracle's feature count");
  if (p < 1 || p > n) throw ConfigError("p must satisfy 1 <= p <= n");
  FeatureSet all(n);
  std::iota(all.begin(), all.end(), 0);
  return shrink_backward(oracle, all, p);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const FeatureSet&)>& visit) {
  if (k > n) return;
  FeatureSet s(k);
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    if (!visit(s)) return;
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

SelectionResult exhaustive(const SubsetOracle& oracle, std::size_t n, std::size_t p, std::uint64_t cap) {
  if (n != oracle.num_features()) throw ConfigError("n does not match the oracle's feature count");
  if (p < 1 || p > n) throw ConfigError("p must satisfy 1 <= p <= n");
  const std::uint64_t total = binomial(n, p);
  if (total > cap)
    throw ConfigError("exhaustive search over C(" + std::to_string(n) + "," + std::to_string(p) + ") = " +
                      (total == std::numeric_limits<std::uint64_t>::max() ? std::string("overflow")
                                                                           : std::to_string(total)) +
                      " subsets exceeds the enumeration cap of " + std::to_string(cap));
  SelectionResult result;
  result.strategy = "exhaustive";
  result.score = -std::numeric_limits<double>::infinity();
  for_each_subset(n, p, [&](const FeatureSet& s) {
    const double v = oracle(s);
    if (result.selected.empty() || v > result.score) {
      result.score = v;
      result.selected = s;
    }
    return true;
  });
  result.trajectory.push_back({1, p, std::nullopt, result.score});
  return result;
}

SubsetOracle oracle_from_table(ScoreTable entries, std::size_t n, TableDefault fallback) {
  ScoreTable table;
  for (auto& [k, v] : entries) table.emplace(normalize_set(k, n), v);
  auto shared = std::make_shared<const ScoreTable>(std::move(table));
  return SubsetOracle("table", n, [shared, fallback](const FeatureSet& s) {
    if (auto it = shared->find(s); it != shared->end()) return it->second;
    if (!fallback) {
      std::string key;
      for (std::size_t i : s) key += (key.empty() ? "" : ",") + std::to_string(i);
      throw ConfigError("score table has no entry for {" + key + "} and no default rule");
    }
    return fallback(s, *shared);
  });
}

TableDefault additive_default(Eigen::VectorXd weights) {
  return [weights = std::move(weights)](const FeatureSet& s, const ScoreTable&) {
    double total = 0.0;
    for (std::size_t i : s) total += weights(static_cast<Eigen::Index>(i));
    return total;
  };
}

TableDefault block_default(std::vector<FeatureSet> blocks) {
  return [blocks = std::move(blocks)](const FeatureSet& s, const ScoreTable& table) {
    double total = 0.0;
    std::size_t covered = 0;
    for (const auto& block : blocks) {
      FeatureSet part;
      std::set_intersection(s.begin(), s.end(), block.begin(), block.end(), std::back_inserter(part));
      if (part.empty()) continue;
      covered += part.size();
      auto it = table.find(part);
      if (it == table.end()) throw ConfigError("score table has no entry for a block intersection");
      total += it->second;
    }
    if (covered != s.size()) throw ConfigError("set is not covered by the declared blocks");
    return total;
  };
}

}  // namespace fsel
