#include "fsel/sdp.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

namespace fsel {

GaussianRounder::GaussianRounder(const Eigen::MatrixXd& covariance) {
  const Eigen::MatrixXd sym = (covariance + covariance.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  Eigen::VectorXd lam = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max(lam.maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = lam(i) > cutoff ? std::sqrt(lam(i)) : 0.0;
  factor_ = eig.eigenvectors() * lam.asDiagonal();
}

Eigen::VectorXd GaussianRounder::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal;
  Eigen::VectorXd g(factor_.cols());
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
  return factor_ * g;
}

FeatureSet GaussianRounder::draw(std::mt19937_64& rng) const { return subset_from_signs(sample(rng)); }

std::mt19937_64 round_stream(std::uint64_t seed, std::uint64_t round) {
  // splitmix64 finalizer over (seed, round) gives decorrelated stream seeds.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (round + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

FeatureSet randomized_round(const SdpSolution<double>& sol, std::uint64_t seed) {
  auto rng = round_stream(seed, 0);
  return GaussianRounder(sol.y_mat).draw(rng);
}

FeatureSet size_adjust(const FeatureSet& candidate, const SubsetOracle& oracle, std::size_t p, ShrinkPolicy policy) {
  const std::size_t n = oracle.num_features();
  if (p > n) throw ConfigError("p exceeds the number of features");
  FeatureSet c = normalize_set(candidate, n);
  if (c.size() == p) return c;
  if (c.size() > p) {
    if (policy == ShrinkPolicy::Backward) return shrink_backward(oracle, c, p).selected;
    return grow_forward(oracle, {}, c, p).selected;
  }
  FeatureSet all(n);
  std::iota(all.begin(), all.end(), 0);
  return grow_forward(oracle, c, all, p).selected;
}

namespace {

struct RoundOutcome {
  FeatureSet raw;
  FeatureSet adjusted;
  double score = 0.0;
};

bool better(const RoundOutcome& a, const RoundOutcome& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.adjusted < b.adjusted;
}

}  // namespace

CobraResult cobra(const QMatrix<double>& q, const SubsetOracle& oracle, std::size_t p, const CobraOptions& options) {
  const std::size_t n = static_cast<std::size_t>(q.size());
  if (oracle.num_features() != n) throw ConfigError("oracle and Q matrix disagree on the feature count");
  if (options.rounds < 1) throw ConfigError("cobra needs rounds >= 1");
  if (p > n) throw ConfigError("p exceeds the number of features");

  CobraResult result;
  result.selection.strategy = "cobra";
  result.selection.seed = options.seed;
  if (p == n) {
    result.selection.selected.resize(n);
    std::iota(result.selection.selected.begin(), result.selection.selected.end(), 0);
    result.selection.score = oracle(result.selection.selected);
    return result;
  }
  if (p < 2) throw ConfigError("cobra requires p >= 2");
  if (static_cast<std::size_t>(q.p_target) != p) throw ConfigError("Q matrix was built for a different target cardinality");

  auto sol = solve_sdp(homogenize(q), options.sdp);
  if (sol.status != SdpStatus::Converged) {
    if (options.fail_on_nonconvergence)
      throw SolverError("SDP solver did not converge within " + std::to_string(options.sdp.max_iter) +
                        " iterations (max residual " + std::to_string(sol.residuals.max()) + ")");
    result.warnings.push_back("SDP solver stopped at max_iter; rounding the best iterate");
  }

  const GaussianRounder rounder(sol.y_mat);
  const auto rounds = static_cast<std::size_t>(options.rounds);
  std::vector<RoundOutcome> outcomes(rounds);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      auto rng = round_stream(options.seed, r);
      RoundOutcome& o = outcomes[r];
      o.raw = rounder.draw(rng);
      o.adjusted = size_adjust(o.raw, oracle, p, options.shrink);
      o.score = oracle(o.adjusted);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, rounds);
  if (workers == 1) {
    run_range(0, rounds);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          run_range(rounds * w / workers, rounds * (w + 1) / workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const RoundOutcome* best = &outcomes.front();
  for (std::size_t r = 0; r < rounds; ++r) {
    const auto& o = outcomes[r];
    result.selection.trajectory.push_back({r + 1, o.raw.size(), std::nullopt, o.score});
    if (better(o, *best)) best = &o;
  }
  result.selection.selected = best->adjusted;
  result.selection.score = best->score;
  result.sdp = std::move(sol);
  return result;
}

}  // namespace fsel
