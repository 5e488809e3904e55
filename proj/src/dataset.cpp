#include "fsel/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fsel/errors.hpp"

namespace fsel {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("unterminated quote on line " + std::to_string(line_no));
  out.push_back(was_quoted ? cur : trim(cur));
  return out;
}

bool is_missing(const std::string& tok) { return tok.empty() || tok == "?" || tok == "NA"; }

std::optional<double> parse_number(const std::string& tok) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

RawDataset read_csv(std::istream& in, const LabelSpec& label, const Schema& schema) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_record(line, line_no);
      break;
    }
  }
  if (header.empty()) throw DataError("empty CSV: no header row");

  std::size_t label_col = 0;
  if (const auto* name = std::get_if<std::string>(&label)) {
    auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw DataError("label column '" + *name + "' not found in header");
    label_col = static_cast<std::size_t>(it - header.begin());
  } else {
    label_col = std::get<std::size_t>(label);
    if (label_col == kLastColumn && !header.empty()) label_col = header.size() - 1;
    if (label_col >= header.size())
      throw DataError("label column index " + std::to_string(label_col) + " out of range");
  }
  if (header.size() < 2) throw DataError("CSV needs at least one feature column besides the label");

  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto rec = split_record(line, line_no);
    if (rec.size() != header.size())
      throw DataError("row " + std::to_string(records.size() + 1) + " (line " + std::to_string(line_no) +
                      ") has " + std::to_string(rec.size()) + " fields, expected " +
                      std::to_string(header.size()));
    records.push_back(std::move(rec));
    record_lines.push_back(line_no);
  }
  if (records.empty()) throw DataError("CSV has zero data rows");

  RawDataset raw;
  raw.label_name = header[label_col];
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& tok = records[r][label_col];
    if (is_missing(tok)) throw DataError("missing label at row " + std::to_string(r + 1));
    raw.labels.push_back(tok);
  }
  if (std::set<std::string>(raw.labels.begin(), raw.labels.end()).size() < 2)
    throw DataError("degenerate labels: label column '" + raw.label_name + "' has a single class");

  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_col) continue;
    RawColumn col;
    col.name = header[c];
    if (auto hint = schema.find(col.name); hint != schema.end()) {
      col.kind = hint->second;
    } else {
      col.kind = ColumnKind::Numeric;
      for (const auto& rec : records) {
        if (is_missing(rec[c])) continue;
        if (!parse_number(rec[c])) col.kind = ColumnKind::Categorical;
        break;
      }
    }
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto& tok = records[r][c];
      if (is_missing(tok)) {
        col.tokens.emplace_back();
        if (col.kind == ColumnKind::Numeric) col.values.emplace_back();
        continue;
      }
      col.tokens.emplace_back(tok);
      if (col.kind == ColumnKind::Numeric) {
        auto v = parse_number(tok);
        if (!v)
          throw DataError("parse error at row " + std::to_string(r + 1) + " (line " +
                          std::to_string(record_lines[r]) + "), column '" + col.name +
                          "': non-numeric token '" + tok + "'");
        col.values.emplace_back(*v);
      }
    }
    raw.features.push_back(std::move(col));
  }
  return raw;
}

RawDataset load_csv(const std::string& path, const LabelSpec& label, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in, label, schema);
}

std::vector<int> bin_column(std::span<const double> column, int bins, BinStrategy strategy,
                            std::vector<double>* edges_out) {
  if (bins < 2) throw ConfigError("bins must be >= 2");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> edges;
  if (distinct.size() <= static_cast<std::size_t>(bins)) {
    // Already discrete enough: one code per distinct value keeps the map idempotent.
    edges.assign(distinct.begin(), distinct.empty() ? distinct.end() : distinct.end() - 1);
  } else if (strategy == BinStrategy::EqualFrequency) {
    const std::size_t m = sorted.size();
    for (int b = 1; b < bins; ++b) {
      std::size_t rank = (static_cast<std::size_t>(b) * m + bins - 1) / bins;  // ceil(b*m/bins)
      edges.push_back(sorted[std::max<std::size_t>(rank, 1) - 1]);
    }
  } else {
    const double lo = sorted.front(), hi = sorted.back();
    for (int b = 1; b < bins; ++b) edges.push_back(lo + (hi - lo) * b / bins);
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // Ties go to the lower bin: code = number of edges strictly below the value.
  std::vector<int> codes(column.size());
  for (std::size_t i = 0; i < column.size(); ++i)
    codes[i] = static_cast<int>(std::lower_bound(edges.begin(), edges.end(), column[i]) - edges.begin());

  // Compact away empty bins (order preserving).
  std::vector<int> used(edges.size() + 1, 0);
  for (int c : codes) used[c] = 1;
  std::vector<int> remap(used.size(), -1);
  std::vector<double> kept;
  int next = 0;
  for (std::size_t b = 0; b < used.size(); ++b) {
    if (!used[b]) continue;
    remap[b] = next++;
    if (b < edges.size()) kept.push_back(edges[b]);
  }
  // The last used bin needs no upper edge.
  if (!kept.empty() && static_cast<int>(kept.size()) == next) kept.pop_back();
  for (int& c : codes) c = remap[c];
  if (edges_out) *edges_out = std::move(kept);
  return codes;
}

DiscreteDataset::DiscreteDataset(Eigen::MatrixXi values, Eigen::VectorXi labels,
                                 std::vector<std::string> names, std::vector<std::string> class_names,
                                 std::vector<ColumnEncoding> encodings) {
  if (values.rows() == 0) throw DataError("dataset has no rows");
  if (values.rows() != labels.size()) throw DataError("label count does not match row count");
  if (names.empty()) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) names.push_back("X" + std::to_string(j + 1));
  }
  if (static_cast<Eigen::Index>(names.size()) != values.cols())
    throw DataError("feature name count does not match column count");
  if (!encodings.empty() && encodings.size() != names.size())
    throw DataError("encoding count does not match column count");
  if (labels.minCoeff() < 0) throw DataError("negative class index");
  num_classes_ = labels.maxCoeff() + 1;
  if (class_names.empty()) {
    for (int c = 0; c < num_classes_; ++c) class_names.push_back(std::to_string(c));
  }
  if (static_cast<int>(class_names.size()) < num_classes_) throw DataError("missing class names");
  num_classes_ = static_cast<int>(class_names.size());
  if (num_classes_ < 2) throw DataError("degenerate labels: fewer than two classes");
  if (values.size() > 0 && values.minCoeff() < 0) throw DataError("negative feature code");

  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    const auto col = values.col(j);
    if ((col.array() == col(0)).all())
      dropped_.push_back(names[j]);
    else
      keep.push_back(j);
  }
  if (keep.empty()) throw DataError("no informative features: every column is constant");

  values_.resize(values.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    values_.col(static_cast<Eigen::Index>(k)) = values.col(keep[k]);
    alphabets_.push_back(values.col(keep[k]).maxCoeff() + 1);
    names_.push_back(names[keep[k]]);
    if (!encodings.empty()) encodings_.push_back(encodings[keep[k]]);
  }
  labels_ = std::move(labels);
  class_names_ = std::move(class_names);
}

DiscreteDataset DiscreteDataset::select_rows(std::span<const std::size_t> rows) const {
  DiscreteDataset out = *this;
  out.values_.resize(static_cast<Eigen::Index>(rows.size()), values_.cols());
  out.labels_.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= this->rows()) throw DataError("row index out of range");
    out.values_.row(static_cast<Eigen::Index>(r)) = values_.row(static_cast<Eigen::Index>(rows[r]));
    out.labels_(static_cast<Eigen::Index>(r)) = labels_(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

namespace {

template <typename T>
T column_mode(const std::vector<std::optional<T>>& cells) {
  std::map<T, std::size_t> freq;
  for (const auto& c : cells)
    if (c) ++freq[*c];
  if (freq.empty()) throw DataError("column has no observed values to impute from");
  return std::max_element(freq.begin(), freq.end(),
                          [](const auto& a, const auto& b) { return a.second < b.second; })
      ->first;
}

}  // namespace

DiscreteDataset discretize(const RawDataset& raw, const DiscretizeOptions& options) {
  if (options.bins < 2) throw ConfigError("bins must be >= 2");
  if (raw.features.empty()) throw DataError("dataset has no feature columns");

  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    bool complete = std::all_of(raw.features.begin(), raw.features.end(),
                                [r](const RawColumn& c) { return c.tokens[r].has_value(); });
    if (complete || options.missing == MissingPolicy::ImputeMode) rows.push_back(r);
  }
  if (rows.empty()) throw DataError("no complete rows after dropping missing values");

  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXi values(m, static_cast<Eigen::Index>(raw.features.size()));
  std::vector<std::string> names;
  std::vector<ColumnEncoding> encodings;

  for (std::size_t j = 0; j < raw.features.size(); ++j) {
    const RawColumn& col = raw.features[j];
    ColumnEncoding enc{col.name, col.kind, {}, {}};
    if (col.kind == ColumnKind::Numeric) {
      std::optional<double> fill;
      std::vector<double> column;
      column.reserve(rows.size());
      for (std::size_t r : rows) {
        if (!col.values[r] && !fill) fill = column_mode(col.values);
        column.push_back(col.values[r] ? *col.values[r] : *fill);
      }
      auto codes = bin_column(column, options.bins, options.strategy, &enc.edges);
      for (Eigen::Index i = 0; i < m; ++i) values(i, static_cast<Eigen::Index>(j)) = codes[i];
    } else {
      std::optional<std::string> fill;
      std::unordered_map<std::string, int> dict;
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto& cell = col.tokens[rows[i]];
        if (!cell && !fill) fill = column_mode(col.tokens);
        const std::string& tok = cell ? *cell : *fill;
        auto [it, inserted] = dict.emplace(tok, static_cast<int>(dict.size()));
        if (inserted) enc.categories.push_back(tok);
        values(i, static_cast<Eigen::Index>(j)) = it->second;
      }
    }
    names.push_back(col.name);
    encodings.push_back(std::move(enc));
  }

  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_dict;
  Eigen::VectorXi labels(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& tok = raw.labels[rows[i]];
    auto [it, inserted] = class_dict.emplace(tok, static_cast<int>(class_dict.size()));
    if (inserted) class_names.push_back(tok);
    labels(i) = it->second;
  }
  if (class_names.size() < 2) throw DataError("degenerate labels after dropping rows");

  return DiscreteDataset(std::move(values), std::move(labels), std::move(names), std::move(class_names),
                         std::move(encodings));
}

ContingencyTable counts(const DiscreteDataset& data, std::span<const std::size_t> vars) {
  if (vars.empty()) throw ConfigError("counts needs at least one variable");
  if (vars.size() > 3) throw ConfigError("empirical counts support at most three variables");
  if (data.rows() == 0) throw DataError("empty dataset");
  ContingencyTable table;
  for (std::size_t v : vars) {
    if (v == kLabel)
      table.dims.push_back(data.num_classes());
    else if (v < data.num_features())
      table.dims.push_back(data.alphabet(v));
    else
      throw ConfigError("variable index " + std::to_string(v) + " out of range");
  }
  std::size_t cells = 1;
  for (int d : table.dims) cells *= static_cast<std::size_t>(d);
  table.counts.assign(cells, 0);
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(data.rows()); ++r) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      int code = vars[k] == kLabel ? data.labels()(r) : data.values()(r, static_cast<Eigen::Index>(vars[k]));
      idx = idx * static_cast<std::size_t>(table.dims[k]) + static_cast<std::size_t>(code);
    }
    ++table.counts[idx];
  }
  return table;
}

}  // namespace fsel
