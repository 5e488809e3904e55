#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsel/dataset.hpp"

namespace fsel {

/// Set of variable indices into a JointPmf, treated as one joint variable.
using VarSet = std::vector<std::size_t>;

/// Explicit probability table over a handful of small-alphabet variables.
/// Storage is row-major in the listed variable order (last variable fastest).
class JointPmf {
 public:
  JointPmf(std::vector<std::string> names, std::vector<int> cards, std::vector<double> probs,
           std::optional<std::size_t> class_index = std::nullopt);

  std::size_t num_vars() const { return cards_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& probs() const { return probs_; }
  std::optional<std::size_t> class_index() const { return class_index_; }

  std::size_t index_of(const std::string& name) const;
  /// All variables except the class, in order.
  VarSet features() const;

  /// Dense marginal table over `vars` (row-major in the given order).
  std::vector<double> marginal(std::span<const std::size_t> vars) const;

 private:
  std::vector<std::string> names_;
  std::vector<int> cards_;
  std::vector<double> probs_;
  std::optional<std::size_t> class_index_;
};

// All quantities are in bits.
double entropy(const JointPmf& p, const VarSet& vars);
double mutual_information(const JointPmf& p, const VarSet& a, const VarSet& b);
double conditional_mi(const JointPmf& p, const VarSet& a, const VarSet& b, const VarSet& given);

/// Signed interaction information of k >= 2 (joint) variables, by the
/// recursion I(Y1;..;Yk | Z) = I(Y1;..;Yk-1 | Z) - I(Y1;..;Yk-1 | Yk, Z).
double multiway_mi(const JointPmf& p, std::span<const VarSet> vars, const VarSet& given = {});
double multiway_mi(const JointPmf& p, std::initializer_list<std::size_t> singles);

struct ExpansionTerms {
  std::vector<double> order_sums;  // signed contribution of each order, order 1 first
  double total = 0.0;
};

/// Inclusion-exclusion over interaction terms; total == I(X;C).
ExpansionTerms expansion_first(const JointPmf& p);
/// Permutation-averaged chain rule; total == (N/2) I(X;C).
ExpansionTerms expansion_second(const JointPmf& p);

/// Cross-entropy -E_P[log2 Phat(X)] of the feature marginal against its
/// second-order Kirkwood superposition. Throws DataError when a declared
/// symbol of some feature has zero mass (Phat is 0/0 on those cells).
double kirkwood_cross_entropy(const JointPmf& p);

struct BoundResult {
  double value = 0.0;
  bool degenerate = false;
};

BoundResult fano_lower_bound(double mi, double h_c, int n_classes);
double hellman_raviv_upper_bound(double mi, double h_c);

enum class Redundancy { ThreeWay, Pairwise };

/// Relevance vector and one redundancy matrix (zero diagonal).
struct MiMatrix {
  Eigen::VectorXd relevance;
  Eigen::MatrixXd redundancy;
  Redundancy kind = Redundancy::ThreeWay;

  Eigen::Index size() const { return relevance.size(); }
};

/// Every first- and second-order term the criteria need.
struct MiTerms {
  Eigen::VectorXd relevance;        // I(Xi;C)
  Eigen::MatrixXd three_way;        // I(Xi;Xj;C)
  Eigen::MatrixXd pairwise;         // I(Xi;Xj)
  Eigen::MatrixXd joint_relevance;  // I(Xi,Xj;C); diagonal holds I(Xi;C)

  MiMatrix matrix(Redundancy kind) const;
};

/// Plug-in estimates from counts. Miller-Madow correction is off by default so
/// identities hold exactly on the empirical distribution.
MiTerms empirical_mi_terms(const DiscreteDataset& data, bool miller_madow = false);

/// Exact terms of a pmf with a designated class variable.
MiTerms mi_terms(const JointPmf& p);

/// Empirical joint distribution of all features plus the label (label last).
JointPmf empirical_pmf(const DiscreteDataset& data);

}  // namespace fsel
