#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fsel/criteria.hpp"
#include "fsel/search.hpp"

namespace fsel {

/// (N+1)x(N+1) homogenized objective: row/column 0 carry e^T Q, the lower
/// block is Q itself.
template <typename Scalar>
struct HomogenizedProblem {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix qu;
  Eigen::Index p_target = 0;
  Eigen::Index n = 0;

  /// Required value of sum_i y_i y_0.
  Scalar balance() const { return Scalar(2 * p_target - n); }
};

template <typename Scalar>
HomogenizedProblem<Scalar> homogenize(const QMatrix<Scalar>& q) {
  const Eigen::Index n = q.size();
  HomogenizedProblem<Scalar> h;
  h.n = n;
  h.p_target = q.p_target;
  h.qu.setZero(n + 1, n + 1);
  h.qu.bottomRightCorner(n, n) = q.q;
  h.qu.row(0).tail(n) = q.q.colwise().sum();
  h.qu.col(0).tail(n) = q.q.rowwise().sum();
  return h;
}

/// c = e^T Q e / 4, so that y^T Qu y = 4 x^T Q x - 4c for x = (y + e)/2.
template <typename Scalar>
Scalar homogenization_offset(const QMatrix<Scalar>& q) {
  return q.q.sum() / Scalar(4);
}

/// +-1 vector with y_0 = +1 and y_i = +1 exactly for i-1 in s.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> signs_from_subset(Eigen::Index n, const FeatureSet& s) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(n + 1, Scalar(-1));
  y(0) = Scalar(1);
  for (std::size_t i : s) y(static_cast<Eigen::Index>(i) + 1) = Scalar(1);
  return y;
}

/// Features whose sign agrees with the reference entry y_0.
template <typename Derived>
FeatureSet subset_from_signs(const Eigen::MatrixBase<Derived>& y) {
  FeatureSet s;
  const bool ref = y(0) >= 0;
  for (Eigen::Index i = 1; i < y.size(); ++i)
    if ((y(i) >= 0) == ref) s.push_back(static_cast<std::size_t>(i - 1));
  return s;
}

template <typename Scalar, typename Derived>
Scalar homogenized_value(const HomogenizedProblem<Scalar>& h, const Eigen::MatrixBase<Derived>& y) {
  return y.dot(h.qu * y);
}

template <typename Scalar>
struct SdpResiduals {
  Scalar cardinality_squared = Scalar(0);  // |sum_{i,j>=1} Y_ij - (2P-N)^2|
  Scalar linear_cardinality = Scalar(0);   // |sum_{i>=1} Y_i0 - (2P-N)|
  Scalar diagonal = Scalar(0);             // max_i |Y_ii - 1|
  Scalar psd = Scalar(0);                  // max(0, -lambda_min(Y))

  Scalar max() const { return std::max({cardinality_squared, linear_cardinality, diagonal, psd}); }
};

template <typename Scalar, typename Derived>
SdpResiduals<Scalar> sdp_residuals(const HomogenizedProblem<Scalar>& h, const Eigen::MatrixBase<Derived>& y) {
  using std::abs;
  const Eigen::Index n = h.n;
  const Scalar b = h.balance();
  SdpResiduals<Scalar> r;
  r.cardinality_squared = abs(y.bottomRightCorner(n, n).sum() - b * b);
  r.linear_cardinality = abs(y.col(0).tail(n).sum() - b);
  r.diagonal = (y.diagonal().array() - Scalar(1)).abs().maxCoeff();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sym = (y + y.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<decltype(sym)> eig(sym, Eigen::EigenvaluesOnly);
  r.psd = std::max(Scalar(0), -eig.eigenvalues().minCoeff());
  return r;
}

enum class SdpStatus { Converged, MaxIter };

template <typename Scalar>
struct SdpSolution {
  typename HomogenizedProblem<Scalar>::Matrix y_mat;
  Scalar objective = Scalar(0);
  Scalar dual_bound = Scalar(0);  // dual objective of the last iterate (diagnostic)
  SdpResiduals<Scalar> residuals;
  Eigen::Index iterations = 0;
  SdpStatus status = SdpStatus::MaxIter;
};

struct SdpOptions {
  double tol = 1e-6;
  int max_iter = 5000;
  double relaxation = 1.6;  // over-relaxation factor, in (0, 2)
  double step_scale = 1.0;
};

/// Maximizes tr(Qu Y) over Y >= 0 with unit diagonal and both cardinality
/// constraints.
///
/// Every feasible Y satisfies Y v = 0 for v = (-(2P-N), 1, ..., 1), so the
/// feasible set has no interior. The solver works on the face
/// Y = V X V^T, V an orthonormal basis of v's complement, where both
/// cardinality rows hold identically and only diag(V X V^T) = e remains.
/// On that face it runs over-relaxed Douglas-Rachford splitting between the
/// PSD cone (eigenvalue clipping) and the affine diagonal constraint
/// (closed-form least-squares projection).
template <typename Scalar>
SdpSolution<Scalar> solve_sdp(const HomogenizedProblem<Scalar>& h, const SdpOptions& opt = {}) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  if (!(opt.tol > 0)) throw ConfigError("solver tolerance must be positive");
  if (opt.max_iter < 1) throw ConfigError("max_iter must be positive");
  if (!(opt.relaxation > 0 && opt.relaxation < 2)) throw ConfigError("relaxation must lie in (0, 2)");
  const Eigen::Index n = h.n;
  if (n < 1 || h.qu.rows() != n + 1 || h.qu.cols() != n + 1) throw ConfigError("malformed homogenized problem");
  if (h.p_target < 0 || h.p_target > n) throw ConfigError("target cardinality out of range");

  SdpSolution<Scalar> sol;
  using std::abs;
  const Scalar tol(opt.tol);

  Vector v = Vector::Ones(n + 1);
  v(0) = -h.balance();
  if (h.p_target == 0 || h.p_target == n) {
    // Only one +-1 pattern is feasible, and the cardinality row forces Y = y y^T.
    FeatureSet all;
    if (h.p_target == n)
      for (Eigen::Index i = 0; i < n; ++i) all.push_back(static_cast<std::size_t>(i));
    const Vector y = signs_from_subset<Scalar>(n, all);
    sol.y_mat = y * y.transpose();
    sol.objective = (h.qu.cwiseProduct(sol.y_mat)).sum();
    sol.dual_bound = sol.objective;
    sol.residuals = sdp_residuals(h, sol.y_mat);
    sol.status = SdpStatus::Converged;
    return sol;
  }

  const Matrix v_col = v;
  Eigen::HouseholderQR<Matrix> qr(v_col);
  const Matrix basis = Matrix(qr.householderQ()).rightCols(n);  // (n+1) x n
  const Matrix c = basis.transpose() * h.qu * basis;

  // Gram of the diagonal constraint on the face: (V V^T) o (V V^T).
  const Matrix vvt = basis * basis.transpose();
  const Matrix gram = vvt.cwiseProduct(vvt);
  Eigen::SelfAdjointEigenSolver<Matrix> geig(gram);
  const Scalar gmax = geig.eigenvalues().cwiseAbs().maxCoeff();
  Vector ginv_diag = geig.eigenvalues();
  for (Eigen::Index i = 0; i < ginv_diag.size(); ++i)
    ginv_diag(i) = ginv_diag(i) > Scalar(1e-12) * gmax ? Scalar(1) / ginv_diag(i) : Scalar(0);
  const Matrix gram_pinv = geig.eigenvectors() * ginv_diag.asDiagonal() * geig.eigenvectors().transpose();

  auto diag_of = [&](const Matrix& x) -> Vector { return (basis * x).cwiseProduct(basis).rowwise().sum(); };

  const Scalar c_norm = c.norm();
  const Scalar t = Scalar(opt.step_scale) * Scalar(n) / (c_norm > Scalar(0) ? c_norm : Scalar(1));
  const Scalar alpha(opt.relaxation);
  // Yv = 0 turns a diagonal error e into b*e and b^2*e on the cardinality rows.
  const Scalar diag_tol = tol / std::max(Scalar(1), h.balance() * h.balance());
  const Scalar fp_tol = tol / Scalar(10);
  // Objective gap measured against the problem scale rather than the objective.
  const Scalar gap_tol = tol * std::max(Scalar(1), c_norm) / Scalar(2);

  Matrix z = Matrix::Zero(n, n);
  Matrix x(n, n), w(n, n);
  Vector mu = Vector::Zero(n + 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  Eigen::Index it = 0;
  for (; it < opt.max_iter; ++it) {
    eig.compute(z);
    const Vector lam = eig.eigenvalues().cwiseMax(Scalar(0));
    x.noalias() = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();

    w = Scalar(2) * x - z + t * c;
    mu = gram_pinv * (diag_of(w) - Vector::Ones(n + 1));
    w.noalias() -= basis.transpose() * mu.asDiagonal() * basis;
    w = (w + w.transpose()) / Scalar(2);

    const Scalar fixed_point = (w - x).norm() / (Scalar(1) + x.norm());
    z += alpha * (w - x);
    if (fixed_point <= fp_tol && (diag_of(x).array() - Scalar(1)).abs().maxCoeff() <= diag_tol &&
        abs(c.cwiseProduct(x).sum() - mu.sum() / t) <= gap_tol) {
      sol.status = SdpStatus::Converged;
      ++it;
      break;
    }
  }
  sol.iterations = it;
  sol.y_mat = basis * x * basis.transpose();
  sol.y_mat = (sol.y_mat + sol.y_mat.transpose()) / Scalar(2);
  sol.objective = (h.qu.cwiseProduct(sol.y_mat)).sum();
  sol.dual_bound = mu.sum() / t;
  sol.residuals = sdp_residuals(h, sol.y_mat);
  if (sol.status == SdpStatus::Converged && sol.residuals.max() > tol) sol.status = SdpStatus::MaxIter;
  return sol;
}

/// Zero-mean Gaussian with covariance Y, factored once by eigendecomposition.
/// Eigenvalues below 1e-10 * max are treated as zero.
class GaussianRounder {
 public:
  explicit GaussianRounder(const Eigen::MatrixXd& covariance);

  /// One rounding: u ~ N(0, Y), signs with sign(0) = +1, subset of features
  /// agreeing with entry 0.
  FeatureSet draw(std::mt19937_64& rng) const;
  Eigen::VectorXd sample(std::mt19937_64& rng) const;

 private:
  Eigen::MatrixXd factor_;
};

/// Independent generator for round `round` of a run seeded with `seed`.
std::mt19937_64 round_stream(std::uint64_t seed, std::uint64_t round);

FeatureSet randomized_round(const SdpSolution<double>& sol, std::uint64_t seed);

/// How an oversized candidate is cut down to p.
enum class ShrinkPolicy {
  Backward,  // backward elimination inside the candidate
  Forward,   // forward selection restricted to the candidate
};

FeatureSet size_adjust(const FeatureSet& candidate, const SubsetOracle& oracle, std::size_t p,
                       ShrinkPolicy policy = ShrinkPolicy::Backward);

struct CobraOptions {
  int rounds = 100;
  std::uint64_t seed = 0;
  SdpOptions sdp;
  ShrinkPolicy shrink = ShrinkPolicy::Backward;
  bool fail_on_nonconvergence = false;
  unsigned threads = 1;
};

struct CobraResult {
  SelectionResult selection;
  std::optional<SdpSolution<double>> sdp;  // empty when p == N short-circuits
  std::vector<std::string> warnings;
};

/// Solve once, round `rounds` times on independent substreams, resize each
/// candidate to p, and keep the best oracle score (ties: lexicographically
/// smaller set).
CobraResult cobra(const QMatrix<double>& q, const SubsetOracle& oracle, std::size_t p,
                  const CobraOptions& options = {});

}  // namespace fsel
