#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsel/criteria.hpp"

namespace fsel {

struct TrajectoryStep {
  std::size_t step = 0;
  std::size_t set_size = 0;
  std::optional<std::size_t> feature;  // added/removed feature, if any
  double score = 0.0;
};

struct SelectionResult {
  FeatureSet selected;
  double score = 0.0;
  std::vector<TrajectoryStep> trajectory;
  std::string strategy;
  std::optional<std::uint64_t> seed;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

// Greedy steps break ties toward the lowest feature index.
SelectionResult forward_selection(const SubsetOracle& oracle, std::size_t n, std::size_t p);
SelectionResult backward_elimination(const SubsetOracle& oracle, std::size_t n, std::size_t p);

/// Forward steps from `start`, adding only members of `pool`, until |S| == p.
SelectionResult grow_forward(const SubsetOracle& oracle, FeatureSet start, const FeatureSet& pool, std::size_t p);
/// Backward steps from `start` until |S| == p.
SelectionResult shrink_backward(const SubsetOracle& oracle, FeatureSet start, std::size_t p);

/// Global argmax over all size-p subsets; ties keep the lexicographically first.
SelectionResult exhaustive(const SubsetOracle& oracle, std::size_t n, std::size_t p,
                           std::uint64_t cap = kDefaultEnumerationCap);

/// n choose k, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Visits every size-k subset of {0..n-1} in lexicographic order. Stops early
/// when the visitor returns false.
void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const FeatureSet&)>& visit);

using ScoreTable = std::map<FeatureSet, double>;
/// Fallback for sets missing from a table.
using TableDefault = std::function<double(const FeatureSet&, const ScoreTable&)>;

SubsetOracle oracle_from_table(ScoreTable entries, std::size_t n, TableDefault fallback = {});

/// Sum of per-feature values (missing-from-table sets score additively).
TableDefault additive_default(Eigen::VectorXd weights);
/// Sum over blocks of the table entry for (set intersect block); empty
/// intersections contribute zero.
TableDefault block_default(std::vector<FeatureSet> blocks);

}  // namespace fsel
