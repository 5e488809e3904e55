#include "fsel/criteria.hpp"

#include <algorithm>

namespace fsel {

SubsetOracle::SubsetOracle(std::string descriptor, std::size_t num_features, Fn fn,
                           std::optional<std::size_t> cardinality_hint)
    : descriptor_(std::move(descriptor)),
      num_features_(num_features),
      fn_(std::move(fn)),
      cardinality_hint_(cardinality_hint),
      state_(std::make_shared<State>()) {
  if (!fn_) throw ConfigError("oracle needs a score function");
}

double SubsetOracle::operator()(FeatureSet s) const {
  s = normalize_set(std::move(s), num_features_);
  if (s.empty()) throw ConfigError("oracle is undefined on the empty set");
  {
    std::lock_guard lock(state_->mutex);
    ++state_->queries;
    if (auto it = state_->memo.find(s); it != state_->memo.end()) return it->second;
  }
  const double value = fn_(s);
  std::lock_guard lock(state_->mutex);
  if (state_->memo.emplace(s, value).second) ++state_->evaluations;
  return value;
}

std::size_t SubsetOracle::queries() const {
  std::lock_guard lock(state_->mutex);
  return state_->queries;
}

std::size_t SubsetOracle::evaluations() const {
  std::lock_guard lock(state_->mutex);
  return state_->evaluations;
}

void SubsetOracle::reset_counters() const {
  std::lock_guard lock(state_->mutex);
  state_->queries = 0;
  state_->evaluations = 0;
}

FeatureSet normalize_set(FeatureSet s, std::size_t num_features) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!s.empty() && s.back() >= num_features)
    throw ConfigError("feature index " + std::to_string(s.back()) + " out of range");
  return s;
}

namespace {

void check_set(const MiMatrix& mi, const FeatureSet& s) {
  if (s.empty()) throw ConfigError("score of the empty set is undefined");
  for (std::size_t i : s)
    if (static_cast<Eigen::Index>(i) >= mi.size()) throw ConfigError("feature index out of range");
}

void check_kind(const MiMatrix& mi, Redundancy expected, const char* name) {
  if (mi.kind != expected)
    throw ConfigError(std::string(name) + " needs the " +
                      (expected == Redundancy::Pairwise ? "pairwise" : "three-way") + " redundancy variant");
}

double relevance_sum(const MiMatrix& mi, const FeatureSet& s) {
  double total = 0.0;
  for (std::size_t i : s) total += mi.relevance(static_cast<Eigen::Index>(i));
  return total;
}

// Redundancy normalized by |s|-1; zero for singletons.
double averaged_redundancy(const MiMatrix& mi, const FeatureSet& s) {
  if (s.size() < 2) return 0.0;
  return pair_sum(mi.redundancy, s) / static_cast<double>(s.size() - 1);
}

}  // namespace

double score_max_relevance(const MiMatrix& mi, const FeatureSet& s) {
  check_set(mi, s);
  return relevance_sum(mi, s);
}

double score_mifs(const MiMatrix& mi, const FeatureSet& s) {
  check_set(mi, s);
  check_kind(mi, Redundancy::Pairwise, "MIFS");
  return relevance_sum(mi, s) - pair_sum(mi.redundancy, s);
}

double score_mrmr(const MiMatrix& mi, const FeatureSet& s) {
  check_set(mi, s);
  check_kind(mi, Redundancy::Pairwise, "mRMR");
  return relevance_sum(mi, s) - averaged_redundancy(mi, s);
}

double score_d1(const MiMatrix& mi, const FeatureSet& s) {
  check_set(mi, s);
  check_kind(mi, Redundancy::ThreeWay, "D1");
  return relevance_sum(mi, s) - pair_sum(mi.redundancy, s);
}

double score_d2(const MiMatrix& mi, const FeatureSet& s) {
  check_set(mi, s);
  check_kind(mi, Redundancy::ThreeWay, "D2");
  return relevance_sum(mi, s) - averaged_redundancy(mi, s);
}

double score_jmi(const MiTerms& terms, const FeatureSet& s) {
  if (s.size() < 2) throw ConfigError("JMI needs at least two features");
  for (std::size_t i : s)
    if (static_cast<Eigen::Index>(i) >= terms.relevance.size()) throw ConfigError("feature index out of range");
  return pair_sum(terms.joint_relevance, s);
}

double score_jmi(const JointPmf& p, const FeatureSet& s) {
  if (s.size() < 2) throw ConfigError("JMI needs at least two features");
  if (!p.class_index()) throw ConfigError("pmf has no designated class variable");
  const VarSet f = p.features();
  double total = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      total += mutual_information(p, {f.at(s[a]), f.at(s[b])}, {*p.class_index()});
  return total;
}

Criterion parse_criterion(const std::string& name) {
  if (name == "maxrel") return Criterion::MaxRelevance;
  if (name == "mifs") return Criterion::Mifs;
  if (name == "mrmr") return Criterion::Mrmr;
  if (name == "jmi") return Criterion::Jmi;
  if (name == "d1") return Criterion::D1;
  if (name == "d2") return Criterion::D2;
  throw ConfigError("unknown measure '" + name + "' (expected maxrel|mifs|mrmr|jmi|d1|d2)");
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::MaxRelevance: return "maxrel";
    case Criterion::Mifs: return "mifs";
    case Criterion::Mrmr: return "mrmr";
    case Criterion::Jmi: return "jmi";
    case Criterion::D1: return "d1";
    case Criterion::D2: return "d2";
  }
  return "unknown";
}

SubsetOracle make_oracle(Criterion c, const MiTerms& terms) {
  const auto n = static_cast<std::size_t>(terms.relevance.size());
  auto shared = std::make_shared<const MiTerms>(terms);
  auto three = std::make_shared<const MiMatrix>(terms.matrix(Redundancy::ThreeWay));
  auto pair = std::make_shared<const MiMatrix>(terms.matrix(Redundancy::Pairwise));
  SubsetOracle::Fn fn;
  switch (c) {
    case Criterion::MaxRelevance: fn = [three](const FeatureSet& s) { return score_max_relevance(*three, s); }; break;
    case Criterion::Mifs: fn = [pair](const FeatureSet& s) { return score_mifs(*pair, s); }; break;
    case Criterion::Mrmr: fn = [pair](const FeatureSet& s) { return score_mrmr(*pair, s); }; break;
    case Criterion::D1: fn = [three](const FeatureSet& s) { return score_d1(*three, s); }; break;
    case Criterion::D2: fn = [three](const FeatureSet& s) { return score_d2(*three, s); }; break;
    case Criterion::Jmi:
      // A singleton has no pairs, so its pairwise sum is empty.
      fn = [shared](const FeatureSet& s) {
        return s.size() < 2 ? 0.0 : score_jmi(*shared, s);
      };
      break;
  }
  return SubsetOracle(to_string(c), n, std::move(fn));
}

}  // namespace fsel
