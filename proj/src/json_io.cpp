#include "fsel/json_io.hpp"

#include <algorithm>

#include "fsel/errors.hpp"

namespace fsel {

namespace {

template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DataError(std::string("JSON: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("JSON: bad field '") + key + "': " + e.what());
  }
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw DataError("JSON: expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DataError("JSON: expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

const char* variant_name(Redundancy r) { return r == Redundancy::ThreeWay ? "three-way" : "pairwise"; }

Redundancy variant_from(const std::string& s) {
  if (s == "three-way") return Redundancy::ThreeWay;
  if (s == "pairwise") return Redundancy::Pairwise;
  throw DataError("JSON: unknown redundancy variant '" + s + "'");
}

}  // namespace

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array()) throw DataError("JSON: expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(rows, rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size()));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from_json(j[static_cast<std::size_t>(r)]);
    if (row.size() != m.cols()) throw DataError("JSON: ragged matrix rows");
    m.row(r) = row.transpose();
  }
  return m;
}

Json to_json(const JointPmf& p) {
  Json vars = Json::array();
  for (std::size_t i = 0; i < p.num_vars(); ++i) vars.push_back({{"name", p.names()[i]}, {"size", p.cards()[i]}});
  Json out{{"variables", vars}, {"probabilities", p.probs()}};
  if (p.class_index()) out["class"] = p.names()[*p.class_index()];
  return out;
}

JointPmf pmf_from_json(const Json& j) {
  const Json vars = get_field<Json>(j, "variables");
  if (!vars.is_array()) throw DataError("JSON: 'variables' must be an array");
  std::vector<std::string> names;
  std::vector<int> cards;
  for (const auto& v : vars) {
    names.push_back(get_field<std::string>(v, "name"));
    cards.push_back(get_field<int>(v, "size"));
  }
  auto probs = get_field<std::vector<double>>(j, "probabilities");
  std::optional<std::size_t> cls;
  if (j.contains("class")) {
    const auto name = get_field<std::string>(j, "class");
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw DataError("JSON: class variable '" + name + "' is not listed");
    cls = static_cast<std::size_t>(it - names.begin());
  }
  return JointPmf(std::move(names), std::move(cards), std::move(probs), cls);
}

Json to_json(const MiMatrix& mi) {
  return Json{{"variant", variant_name(mi.kind)},
              {"relevance", vector_to_json(mi.relevance)},
              {"redundancy", matrix_to_json(mi.redundancy)}};
}

MiMatrix mi_matrix_from_json(const Json& j) {
  MiMatrix mi;
  mi.kind = variant_from(get_field<std::string>(j, "variant"));
  mi.relevance = vector_from_json(get_field<Json>(j, "relevance"));
  mi.redundancy = matrix_from_json(get_field<Json>(j, "redundancy"));
  if (mi.redundancy.rows() != mi.size() || mi.redundancy.cols() != mi.size())
    throw DataError("JSON: redundancy matrix does not match relevance length");
  return mi;
}

Json to_json(const QMatrix<double>& q) {
  return Json{{"variant", variant_name(q.variant)},
              {"lambda", q.lambda},
              {"p", q.p_target},
              {"q", matrix_to_json(q.q)}};
}

QMatrix<double> q_matrix_from_json(const Json& j) {
  QMatrix<double> q;
  q.q = matrix_from_json(get_field<Json>(j, "q"));
  if (q.q.rows() != q.q.cols() || q.q.rows() == 0) throw DataError("JSON: Q must be a non-empty square matrix");
  if (!q.q.isApprox(q.q.transpose(), 1e-12)) throw DataError("JSON: Q must be symmetric");
  if (j.contains("variant")) q.variant = variant_from(get_field<std::string>(j, "variant"));
  if (j.contains("lambda")) q.lambda = get_field<double>(j, "lambda");
  if (j.contains("p")) q.p_target = get_field<Eigen::Index>(j, "p");
  return q;
}

QMatrix<double> problem_from_json(const Json& j) {
  QMatrix<double> q = j.contains("qmatrix") ? q_matrix_from_json(j.at("qmatrix")) : q_matrix_from_json(j);
  if (j.contains("p")) q.p_target = get_field<Eigen::Index>(j, "p");
  if (q.p_target < 1 || q.p_target > q.size())
    throw ConfigError("problem: p must lie in 1.." + std::to_string(q.size()));
  return q;
}

Json to_json(const SdpSolution<double>& sol, bool include_matrix) {
  Json out{{"status", sol.status == SdpStatus::Converged ? "converged" : "max_iter"},
           {"objective", sol.objective},
           {"dual_bound", sol.dual_bound},
           {"iterations", sol.iterations},
           {"residuals",
            {{"cardinality_squared", sol.residuals.cardinality_squared},
             {"linear_cardinality", sol.residuals.linear_cardinality},
             {"diagonal", sol.residuals.diagonal},
             {"psd", sol.residuals.psd}}}};
  if (include_matrix) out["y"] = matrix_to_json(sol.y_mat);
  return out;
}

Json to_json(const SelectionResult& r) {
  Json steps = Json::array();
  for (const auto& s : r.trajectory) {
    Json step{{"step", s.step}, {"size", s.set_size}, {"score", s.score}};
    step["feature"] = s.feature ? Json(*s.feature) : Json(nullptr);
    steps.push_back(step);
  }
  Json out{{"strategy", r.strategy}, {"selected", r.selected}, {"score", r.score}, {"trajectory", steps}};
  if (r.seed) out["seed"] = *r.seed;
  return out;
}

Json to_json(const EvalReport& r) {
  Json out{{"features", r.features},
           {"fold_accuracies", r.fold_accuracies},
           {"mean_accuracy", r.mean_accuracy},
           {"classifier_runs", r.classifier_runs}};
  if (r.selected_p) out["selected_p"] = *r.selected_p;
  if (!r.curve.empty()) {
    Json curve = Json::array();
    for (const auto& pt : r.curve)
      curve.push_back({{"p", pt.p}, {"features", pt.features}, {"accuracy", pt.accuracy}, {"error", 1.0 - pt.accuracy}});
    out["curve"] = curve;
  }
  if (!r.similarity.empty()) out["similarity"] = r.similarity;
  return out;
}

Json to_json(const std::vector<ColumnEncoding>& encodings) {
  Json out = Json::array();
  for (const auto& e : encodings) {
    Json col{{"name", e.name}, {"kind", e.kind == ColumnKind::Numeric ? "numeric" : "categorical"}};
    if (e.kind == ColumnKind::Numeric)
      col["edges"] = e.edges;
    else
      col["categories"] = e.categories;
    out.push_back(col);
  }
  return out;
}

}  // namespace fsel
