#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsel/criteria.hpp"
#include "fsel/dataset.hpp"

namespace fsel {

enum class ClassifierKind { NaiveBayes, Knn };

struct CvConfig {
  std::size_t folds = 10;
  bool leave_one_out = false;
  ClassifierKind classifier = ClassifierKind::NaiveBayes;
  int k = 1;
  double alpha = 1.0;  // Laplace smoothing for naive Bayes
  std::uint64_t seed = 0;
  bool stratified = true;
  unsigned threads = 1;  // folds evaluated concurrently
};

/// Categorical naive Bayes with add-alpha counts, scored in log space.
class NaiveBayes {
 public:
  NaiveBayes(const DiscreteDataset& train, FeatureSet features, double alpha = 1.0);

  Eigen::VectorXd log_posterior(const Eigen::Ref<const Eigen::RowVectorXi>& row) const;
  /// argmax posterior; ties go to the smaller class index.
  int predict(const Eigen::Ref<const Eigen::RowVectorXi>& row) const;

 private:
  FeatureSet features_;
  Eigen::VectorXd log_prior_;
  std::vector<Eigen::MatrixXd> log_likelihood_;  // per feature: classes x symbols
};

/// Majority vote of the k nearest training rows under Hamming distance.
/// Equal distances keep training order; vote ties go to the smaller class.
int knn_predict(const DiscreteDataset& train, const FeatureSet& features,
                const Eigen::Ref<const Eigen::RowVectorXi>& row, int k);

struct CurvePoint {
  std::size_t p = 0;
  FeatureSet features;
  double accuracy = 0.0;
};

struct EvalReport {
  FeatureSet features;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  std::size_t classifier_runs = 0;
  std::optional<std::size_t> selected_p;
  std::vector<CurvePoint> curve;
  std::vector<double> similarity;
};

/// Row indices of each test fold.
std::vector<std::vector<std::size_t>> make_folds(const DiscreteDataset& data, const CvConfig& cfg);

EvalReport cross_validate(const DiscreteDataset& data, const FeatureSet& features, const CvConfig& cfg);

/// Error of the classifier trained and tested on the full dataset.
double training_error(const DiscreteDataset& data, const FeatureSet& features, const CvConfig& cfg);

/// Selects p features for each grid point, cross-validates, and reports the
/// p with the lowest error (ties to the smaller p).
using Selector = std::function<FeatureSet(std::size_t p)>;
EvalReport p_search(const DiscreteDataset& data, const Selector& select, const std::vector<std::size_t>& grid,
                    const CvConfig& cfg);

/// S_i = |set_i & set_{i+1}| / |set_i| for consecutive pairs.
std::vector<double> similarity_ratio(const std::vector<FeatureSet>& sets);
double window_mean(const std::vector<double>& ratios, std::size_t start, std::size_t length);

std::string to_table(const EvalReport& report);
std::string curve_csv(const EvalReport& report);

}  // namespace fsel
