#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "fsel/errors.hpp"
#include "fsel/infotheory.hpp"

namespace fsel {

/// Sorted, duplicate-free list of 0-based feature indices.
using FeatureSet = std::vector<std::size_t>;

/// Maps a non-empty feature set to a real score. Copies share one memo table
/// and one set of call counters; evaluation is thread-safe.
class SubsetOracle {
 public:
  using Fn = std::function<double(const FeatureSet&)>;

  SubsetOracle(std::string descriptor, std::size_t num_features, Fn fn,
               std::optional<std::size_t> cardinality_hint = std::nullopt);

  double operator()(FeatureSet s) const;

  std::size_t num_features() const { return num_features_; }
  const std::string& descriptor() const { return descriptor_; }
  std::optional<std::size_t> cardinality_hint() const { return cardinality_hint_; }

  /// Calls made through operator() / distinct sets actually evaluated.
  std::size_t queries() const;
  std::size_t evaluations() const;
  void reset_counters() const;

 private:
  struct State {
    std::mutex mutex;
    std::map<FeatureSet, double> memo;
    std::size_t queries = 0;
    std::size_t evaluations = 0;
  };

  std::string descriptor_;
  std::size_t num_features_;
  Fn fn_;
  std::optional<std::size_t> cardinality_hint_;
  std::shared_ptr<State> state_;
};

/// Sorts, dedups and range-checks a feature set.
FeatureSet normalize_set(FeatureSet s, std::size_t num_features);

template <typename Derived>
typename Derived::Scalar pair_sum(const Eigen::MatrixBase<Derived>& m, const FeatureSet& s) {
  typename Derived::Scalar total(0);
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      total += m(static_cast<Eigen::Index>(s[a]), static_cast<Eigen::Index>(s[b]));
  return total;
}

double score_max_relevance(const MiMatrix& mi, const FeatureSet& s);
double score_mifs(const MiMatrix& mi, const FeatureSet& s);
double score_mrmr(const MiMatrix& mi, const FeatureSet& s);
double score_d1(const MiMatrix& mi, const FeatureSet& s);
double score_d2(const MiMatrix& mi, const FeatureSet& s);
/// Sum of I(Xi,Xj;C) over pairs; needs |s| >= 2.
double score_jmi(const MiTerms& terms, const FeatureSet& s);
double score_jmi(const JointPmf& p, const FeatureSet& s);

enum class Criterion { MaxRelevance, Mifs, Mrmr, Jmi, D1, D2 };

Criterion parse_criterion(const std::string& name);
std::string to_string(Criterion c);

SubsetOracle make_oracle(Criterion c, const MiTerms& terms);

/// Quadratic-form encoding of a pairwise subset score:
/// diag = relevance, off-diagonal = -(lambda/2) * redundancy.
template <typename Scalar>
struct QMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix q;
  Scalar lambda = Scalar(0);
  Redundancy variant = Redundancy::ThreeWay;
  Eigen::Index p_target = 0;

  Eigen::Index size() const { return q.rows(); }
};

/// lambda defaults to 1/(p-1); an override lets MIFS/D1 (1) or
/// Max-Relevance (0) reuse the same machinery.
template <typename Scalar = double>
QMatrix<Scalar> build_q_matrix(const MiMatrix& mi, Eigen::Index p,
                               std::optional<std::type_identity_t<Scalar>> lambda_override = std::nullopt) {
  const Eigen::Index n = mi.size();
  if (p < 2) throw ConfigError("QMatrix needs target cardinality P >= 2");
  if (p > n) throw ConfigError("target cardinality exceeds number of features");
  QMatrix<Scalar> out;
  out.lambda = lambda_override ? *lambda_override : Scalar(1) / Scalar(p - 1);
  out.variant = mi.kind;
  out.p_target = p;
  out.q = (-out.lambda / Scalar(2)) * mi.redundancy.cast<Scalar>();
  out.q.diagonal() = mi.relevance.cast<Scalar>();
  return out;
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> indicator(Eigen::Index n, const FeatureSet& s) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  for (std::size_t i : s) x(static_cast<Eigen::Index>(i)) = Scalar(1);
  return x;
}

template <typename DerivedQ, typename DerivedX>
typename DerivedQ::Scalar quadratic_form(const Eigen::MatrixBase<DerivedQ>& q,
                                         const Eigen::MatrixBase<DerivedX>& x) {
  return x.dot(q * x);
}

/// Oracle scoring sets by x^T Q x of their indicator.
template <typename Scalar>
SubsetOracle make_quadratic_oracle(const QMatrix<Scalar>& qm, std::string descriptor = "quadratic") {
  auto q = std::make_shared<typename QMatrix<Scalar>::Matrix>(qm.q);
  return SubsetOracle(std::move(descriptor), static_cast<std::size_t>(qm.size()),
                      [q](const FeatureSet& s) {
                        Scalar total(0);
                        for (std::size_t a : s)
                          for (std::size_t b : s)
                            total += (*q)(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                        return static_cast<double>(total);
                      },
                      static_cast<std::size_t>(qm.p_target));
}

}  // namespace fsel
