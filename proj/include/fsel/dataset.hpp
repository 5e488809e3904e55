#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace fsel {

enum class ColumnKind { Numeric, Categorical };

/// One feature column as read from disk. Missing cells are std::nullopt.
struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  std::vector<std::optional<std::string>> tokens;
  std::vector<std::optional<double>> values;  // filled for numeric columns only
};

struct RawDataset {
  std::vector<RawColumn> features;
  std::string label_name;
  std::vector<std::string> labels;

  std::size_t rows() const { return labels.size(); }
  std::size_t num_features() const { return features.size(); }
};

/// Label column selector: header name or 0-based column index.
using LabelSpec = std::variant<std::string, std::size_t>;
/// Index value meaning "the last column".
inline constexpr std::size_t kLastColumn = std::numeric_limits<std::size_t>::max();
using Schema = std::map<std::string, ColumnKind>;

RawDataset read_csv(std::istream& in, const LabelSpec& label, const Schema& schema = {});
RawDataset load_csv(const std::string& path, const LabelSpec& label, const Schema& schema = {});

enum class BinStrategy { EqualFrequency, EqualWidth };
enum class MissingPolicy { DropRow, ImputeMode };

struct DiscretizeOptions {
  int bins = 5;
  BinStrategy strategy = BinStrategy::EqualFrequency;
  MissingPolicy missing = MissingPolicy::DropRow;
};

/// How a raw column was mapped to codes. Numeric columns carry upper bin
/// edges (a value v gets the number of edges strictly below v); categorical
/// columns carry the dictionary in code order.
struct ColumnEncoding {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  std::vector<double> edges;
  std::vector<std::string> categories;
};

/// Discretized feature matrix, immutable after construction.
class DiscreteDataset {
 public:
  DiscreteDataset() = default;

  /// Validates ranges and drops constant columns (reported by dropped()).
  DiscreteDataset(Eigen::MatrixXi values, Eigen::VectorXi labels, std::vector<std::string> names = {},
                  std::vector<std::string> class_names = {},
                  std::vector<ColumnEncoding> encodings = {});

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t num_features() const { return static_cast<std::size_t>(values_.cols()); }
  int num_classes() const { return num_classes_; }

  const Eigen::MatrixXi& values() const { return values_; }
  const Eigen::VectorXi& labels() const { return labels_; }
  int alphabet(std::size_t feature) const { return alphabets_.at(feature); }
  const std::vector<int>& alphabets() const { return alphabets_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::vector<ColumnEncoding>& encodings() const { return encodings_; }
  const std::vector<std::string>& dropped() const { return dropped_; }

  /// Copy keeping only the given rows (used by cross-validation splits).
  DiscreteDataset select_rows(std::span<const std::size_t> rows) const;

 private:
  Eigen::MatrixXi values_;
  Eigen::VectorXi labels_;
  std::vector<int> alphabets_;
  int num_classes_ = 0;
  std::vector<std::string> names_;
  std::vector<std::string> class_names_;
  std::vector<ColumnEncoding> encodings_;
  std::vector<std::string> dropped_;
};

DiscreteDataset discretize(const RawDataset& raw, const DiscretizeOptions& options = {});

/// Codes for a single numeric column; exposed for tests and the edge export.
std::vector<int> bin_column(std::span<const double> column, int bins, BinStrategy strategy,
                            std::vector<double>* edges = nullptr);

/// Selector for the class column inside counts().
inline constexpr std::size_t kLabel = std::numeric_limits<std::size_t>::max();

struct ContingencyTable {
  std::vector<int> dims;
  std::vector<long> counts;  // row-major, last variable fastest
};

/// Joint occurrence counts of up to three variables (features or kLabel).
ContingencyTable counts(const DiscreteDataset& data, std::span<const std::size_t> vars);

}  // namespace fsel
