#include "fsel/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "fsel/errors.hpp"

namespace fsel {

NaiveBayes::NaiveBayes(const DiscreteDataset& train, FeatureSet features, double alpha)
    : features_(normalize_set(std::move(features), train.num_features())) {
  if (train.rows() == 0) throw DataError("naive Bayes: empty training set");
  if (!(alpha > 0.0)) throw ConfigError("naive Bayes smoothing must be positive");
  const int classes = train.num_classes();
  Eigen::VectorXd class_count = Eigen::VectorXd::Zero(classes);
  for (Eigen::Index r = 0; r < train.labels().size(); ++r) class_count(train.labels()(r)) += 1.0;
  const double m = static_cast<double>(train.rows());
  log_prior_ = ((class_count.array() + alpha) / (m + alpha * classes)).log();

  for (std::size_t f : features_) {
    const int symbols = train.alphabet(f);
    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(classes, symbols);
    for (Eigen::Index r = 0; r < train.labels().size(); ++r)
      table(train.labels()(r), train.values()(r, static_cast<Eigen::Index>(f))) += 1.0;
    for (int c = 0; c < classes; ++c)
      table.row(c) = ((table.row(c).array() + alpha) / (class_count(c) + alpha * symbols)).log();
    log_likelihood_.push_back(std::move(table));
  }
}

Eigen::VectorXd NaiveBayes::log_posterior(const Eigen::Ref<const Eigen::RowVectorXi>& row) const {
  Eigen::VectorXd score = log_prior_;
  for (std::size_t k = 0; k < features_.size(); ++k) {
    const int symbol = row(static_cast<Eigen::Index>(features_[k]));
    // Symbols unseen in training carry no evidence.
    if (symbol >= 0 && symbol < log_likelihood_[k].cols()) score += log_likelihood_[k].col(symbol);
  }
  return score;
}

int NaiveBayes::predict(const Eigen::Ref<const Eigen::RowVectorXi>& row) const {
  const Eigen::VectorXd score = log_posterior(row);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < score.size(); ++c)
    if (score(c) > score(best)) best = c;
  return static_cast<int>(best);
}

int knn_predict(const DiscreteDataset& train, const FeatureSet& features,
                const Eigen::Ref<const Eigen::RowVectorXi>& row, int k) {
  if (train.rows() == 0) throw DataError("k-NN: empty training set");
  if (k < 1) throw ConfigError("k-NN needs k >= 1");
  std::vector<std::pair<int, std::size_t>> dist;
  dist.reserve(train.rows());
  for (std::size_t r = 0; r < train.rows(); ++r) {
    int d = 0;
    for (std::size_t f : features)
      d += train.values()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) !=
           row(static_cast<Eigen::Index>(f));
    dist.emplace_back(d, r);
  }
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
  std::vector<int> votes(static_cast<std::size_t>(train.num_classes()), 0);
  for (std::size_t i = 0; i < kk; ++i) ++votes[static_cast<std::size_t>(train.labels()(static_cast<Eigen::Index>(dist[i].second)))];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

namespace {

std::vector<int> predict_rows(const DiscreteDataset& train, const DiscreteDataset& test, const FeatureSet& features,
                              const CvConfig& cfg) {
  std::vector<int> out(test.rows());
  if (cfg.classifier == ClassifierKind::NaiveBayes) {
    const NaiveBayes model(train, features, cfg.alpha);
    for (std::size_t r = 0; r < test.rows(); ++r) out[r] = model.predict(test.values().row(static_cast<Eigen::Index>(r)));
  } else {
    for (std::size_t r = 0; r < test.rows(); ++r)
      out[r] = knn_predict(train, features, test.values().row(static_cast<Eigen::Index>(r)), cfg.k);
  }
  return out;
}

double accuracy_of(const DiscreteDataset& test, const std::vector<int>& predicted) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < test.rows(); ++r) hits += predicted[r] == test.labels()(static_cast<Eigen::Index>(r));
  return static_cast<double>(hits) / static_cast<double>(test.rows());
}

void validate_config(const DiscreteDataset& data, const CvConfig& cfg) {
  if (cfg.classifier == ClassifierKind::Knn && cfg.k < 1) throw ConfigError("k-NN needs k >= 1");
  if (!cfg.leave_one_out) {
    if (cfg.folds < 2) throw ConfigError("cross-validation needs at least two folds");
    if (cfg.folds > data.rows())
      throw ConfigError("folds exceed rows (" + std::to_string(cfg.folds) + " > " + std::to_string(data.rows()) + ")");
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> make_folds(const DiscreteDataset& data, const CvConfig& cfg) {
  validate_config(data, cfg);
  const std::size_t m = data.rows();
  if (cfg.leave_one_out) {
    std::vector<std::vector<std::size_t>> folds(m);
    for (std::size_t r = 0; r < m; ++r) folds[r] = {r};
    return folds;
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<std::size_t>> folds(cfg.folds);
  std::size_t slot = 0;
  auto deal = [&](std::vector<std::size_t> rows) {
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t r : rows) folds[slot++ % cfg.folds].push_back(r);
  };
  if (cfg.stratified) {
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(data.num_classes()));
    for (std::size_t r = 0; r < m; ++r) by_class[static_cast<std::size_t>(data.labels()(static_cast<Eigen::Index>(r)))].push_back(r);
    for (auto& rows : by_class) deal(std::move(rows));
  } else {
    std::vector<std::size_t> rows(m);
    std::iota(rows.begin(), rows.end(), 0);
    deal(std::move(rows));
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

EvalReport cross_validate(const DiscreteDataset& data, const FeatureSet& features, const CvConfig& cfg) {
  if (features.empty()) throw ConfigError("cross-validation needs a non-empty feature set");
  EvalReport report;
  report.features = normalize_set(features, data.num_features());
  const auto folds = make_folds(data, cfg);

  std::vector<char> class_present(static_cast<std::size_t>(data.num_classes()), 0);
  for (Eigen::Index r = 0; r < data.labels().size(); ++r) class_present[static_cast<std::size_t>(data.labels()(r))] = 1;

  const std::size_t k = folds.size();
  report.fold_accuracies.assign(k, 0.0);
  std::vector<std::exception_ptr> errors(k);
  auto run_fold = [&](std::size_t f) {
    try {
      std::vector<char> in_test(data.rows(), 0);
      for (std::size_t r : folds[f]) in_test[r] = 1;
      std::vector<std::size_t> train_rows;
      for (std::size_t r = 0; r < data.rows(); ++r)
        if (!in_test[r]) train_rows.push_back(r);
      const DiscreteDataset train = data.select_rows(train_rows);
      const DiscreteDataset test = data.select_rows(folds[f]);

      std::vector<char> seen(class_present.size(), 0);
      for (Eigen::Index r = 0; r < train.labels().size(); ++r) seen[static_cast<std::size_t>(train.labels()(r))] = 1;
      for (std::size_t c = 0; c < seen.size(); ++c)
        if (class_present[c] && !seen[c])
          throw DataError("class '" + data.class_names()[c] + "' absent from a training fold (unstratifiable)");

      report.fold_accuracies[f] = accuracy_of(test, predict_rows(train, test, report.features, cfg));
    } catch (...) {
      errors[f] = std::current_exception();
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, k);
  if (workers == 1) {
    for (std::size_t f = 0; f < k; ++f) run_fold(f);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t f = w; f < k; f += workers) run_fold(f);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  report.classifier_runs = k;
  report.mean_accuracy = std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) /
                         static_cast<double>(report.fold_accuracies.size());
  return report;
}

double training_error(const DiscreteDataset& data, const FeatureSet& features, const CvConfig& cfg) {
  const FeatureSet f = normalize_set(features, data.num_features());
  const auto predicted = predict_rows(data, data, f, cfg);
  std::size_t misses = 0;
  for (std::size_t r = 0; r < data.rows(); ++r) misses += predicted[r] != data.labels()(static_cast<Eigen::Index>(r));
  return static_cast<double>(misses) / static_cast<double>(data.rows());
}

EvalReport p_search(const DiscreteDataset& data, const Selector& select, const std::vector<std::size_t>& grid,
                    const CvConfig& cfg) {
  if (grid.empty()) throw ConfigError("p grid is empty");
  for (std::size_t p : grid)
    if (p < 1 || p > data.num_features())
      throw ConfigError("grid value " + std::to_string(p) + " outside 1.." + std::to_string(data.num_features()));
  EvalReport report;
  double best_error = 2.0;
  for (std::size_t p : grid) {
    const FeatureSet chosen = select(p);
    const EvalReport cv = cross_validate(data, chosen, cfg);
    report.classifier_runs += cv.classifier_runs;
    report.curve.push_back({p, cv.features, cv.mean_accuracy});
    const double error = 1.0 - cv.mean_accuracy;
    if (error < best_error || (error == best_error && p < *report.selected_p)) {
      best_error = error;
      report.selected_p = p;
      report.features = cv.features;
      report.fold_accuracies = cv.fold_accuracies;
      report.mean_accuracy = cv.mean_accuracy;
    }
  }
  std::vector<FeatureSet> sets;
  for (const auto& pt : report.curve) sets.push_back(pt.features);
  if (sets.size() >= 2) report.similarity = similarity_ratio(sets);
  return report;
}

std::vector<double> similarity_ratio(const std::vector<FeatureSet>& sets) {
  if (sets.size() < 2) throw ConfigError("similarity ratio needs at least two sets");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    if (sets[i].empty()) throw ConfigError("similarity ratio: set " + std::to_string(i) + " is empty");
    FeatureSet a = sets[i], b = sets[i + 1];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    FeatureSet common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    out.push_back(static_cast<double>(common.size()) / static_cast<double>(a.size()));
  }
  return out;
}

double window_mean(const std::vector<double>& ratios, std::size_t start, std::size_t length) {
  if (length == 0 || start + length > ratios.size()) throw ConfigError("similarity window out of range");
  return std::accumulate(ratios.begin() + static_cast<std::ptrdiff_t>(start),
                         ratios.begin() + static_cast<std::ptrdiff_t>(start + length), 0.0) /
         static_cast<double>(length);
}

namespace {

std::string one_based(const FeatureSet& s) {
  std::string out;
  for (std::size_t i : s) out += (out.empty() ? "X" : " X") + std::to_string(i + 1);
  return out;
}

}  // namespace

std::string to_table(const EvalReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  if (!report.curve.empty()) {
    os << std::setw(6) << "P" << std::setw(12) << "accuracy" << std::setw(10) << "error" << "  features\n";
    for (const auto& pt : report.curve)
      os << std::setw(6) << pt.p << std::setw(12) << pt.accuracy << std::setw(10) << 1.0 - pt.accuracy << "  "
         << one_based(pt.features) << (report.selected_p == pt.p ? "  <- P_opt" : "") << '\n';
  }
  os << std::setw(6) << "fold" << std::setw(12) << "accuracy" << '\n';
  for (std::size_t f = 0; f < report.fold_accuracies.size(); ++f)
    os << std::setw(6) << f + 1 << std::setw(12) << report.fold_accuracies[f] << '\n';
  os << std::setw(6) << "mean" << std::setw(12) << report.mean_accuracy << '\n';
  os << "features: " << one_based(report.features) << '\n';
  return os.str();
}

std::string curve_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "p,accuracy,error,features\n";
  os << std::setprecision(17);
  for (const auto& pt : report.curve) {
    os << pt.p << ',' << pt.accuracy << ',' << 1.0 - pt.accuracy << ',';
    for (std::size_t k = 0; k < pt.features.size(); ++k) os << (k ? " " : "") << pt.features[k];
    os << '\n';
  }
  return os.str();
}

}  // namespace fsel
