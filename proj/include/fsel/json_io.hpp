#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "fsel/criteria.hpp"
#include "fsel/dataset.hpp"
#include "fsel/eval.hpp"
#include "fsel/infotheory.hpp"
#include "fsel/sdp.hpp"
#include "fsel/search.hpp"

namespace fsel {

using Json = nlohmann::ordered_json;

// Matrices are stored dense and row-major as arrays of rows. Readers throw
// DataError on malformed documents.

Json to_json(const JointPmf& p);
JointPmf pmf_from_json(const Json& j);

Json to_json(const MiMatrix& mi);
MiMatrix mi_matrix_from_json(const Json& j);

Json to_json(const QMatrix<double>& q);
QMatrix<double> q_matrix_from_json(const Json& j);

/// Standalone solver input: a QMatrix document plus the target cardinality
/// under "p" (either at top level or inside the QMatrix document).
QMatrix<double> problem_from_json(const Json& j);

/// Objective, bounds, residuals, iterations, status; the Y matrix only on request.
Json to_json(const SdpSolution<double>& sol, bool include_matrix = false);

Json to_json(const SelectionResult& r);
Json to_json(const EvalReport& r);
Json to_json(const std::vector<ColumnEncoding>& encodings);

Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

}  // namespace fsel
