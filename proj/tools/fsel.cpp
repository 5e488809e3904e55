// fsel: mutual-information feature selection from the command line.
//
//   fsel select   data.csv --measure mrmr --search cobra --p 5 --seed 7
//   fsel evaluate data.csv --features 0,3,4 --folds 10
//   fsel psearch  data.csv --grid 1:10
//   fsel verify   [pmf.json ...]
//   fsel solve-sdp problem.json
//
// Options are resolved as command line > --config file > FSEL_* environment.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsel/criteria.hpp"
#include "fsel/dataset.hpp"
#include "fsel/errors.hpp"
#include "fsel/eval.hpp"
#include "fsel/fixtures.hpp"
#include "fsel/infotheory.hpp"
#include "fsel/json_io.hpp"
#include "fsel/sdp.hpp"
#include "fsel/search.hpp"

namespace {

using namespace fsel;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string label;  // header name or 0-based index; empty means the last column
  int bins = 5;
  std::string bin_strategy = "equal-frequency";
  std::string missing = "drop";
  bool miller_madow = false;

  std::string measure = "mrmr";
  std::string search = "fs";
  std::size_t p = 0;
  std::string grid;
  int rounds = 100;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iter = 5000;
  std::optional<double> lambda;
  std::string shrink = "backward";
  bool fail_on_nonconvergence = false;
  std::uint64_t cap = kDefaultEnumerationCap;

  std::string features;
  std::size_t folds = 10;
  bool loo = false;
  std::string classifier = "nb";
  int k = 1;
  bool unstratified = false;

  unsigned threads = 1;
  std::string format = "json";
  std::string output;
  std::string curve_csv;
  bool include_matrix = false;
};

Json config_json(const RunConfig& c) {
  Json j;
  j["inputs"] = c.inputs;
  j["label"] = c.label.empty() ? Json(nullptr) : Json(c.label);
  j["bins"] = c.bins;
  j["bin_strategy"] = c.bin_strategy;
  j["missing"] = c.missing;
  j["miller_madow"] = c.miller_madow;
  j["measure"] = c.measure;
  j["search"] = c.search;
  j["p"] = c.p;
  j["grid"] = c.grid;
  j["rounds"] = c.rounds;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["lambda"] = c.lambda ? Json(*c.lambda) : Json(nullptr);
  j["shrink"] = c.shrink;
  j["fail_on_nonconvergence"] = c.fail_on_nonconvergence;
  j["cap"] = c.cap;
  j["features"] = c.features;
  j["folds"] = c.folds;
  j["loo"] = c.loo;
  j["classifier"] = c.classifier;
  j["k"] = c.k;
  j["stratified"] = !c.unstratified;
  j["threads"] = c.threads;
  j["format"] = c.format;
  return j;
}

Json reproducibility(const RunConfig& c) {
  Json j;
  j["version"] = FSEL_VERSION;
  j["command"] = c.command;
  j["config"] = config_json(c);
  j["seed"] = c.seed;
  return j;
}

// ---- option parsing helpers -------------------------------------------------

std::vector<std::size_t> parse_index_list(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + tok + "' is not a non-negative integer");
    }
    if (used != tok.size()) throw ConfigError(what + ": '" + tok + "' is not a non-negative integer");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// "a:b" (inclusive range), "a:b:step", or a comma list.
std::vector<std::size_t> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_index_list(text, "--grid");
  std::string spec = text;
  std::replace(spec.begin(), spec.end(), ':', ',');
  const auto parts = parse_index_list(spec, "--grid");
  if (parts.size() < 2 || parts.size() > 3) throw ConfigError("--grid expects a:b, a:b:step or a comma list");
  const std::size_t step = parts.size() == 3 ? parts[2] : 1;
  if (step == 0) throw ConfigError("--grid step must be positive");
  if (parts[0] > parts[1]) throw ConfigError("--grid range is empty");
  std::vector<std::size_t> out;
  for (std::size_t v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
  return out;
}

LabelSpec label_spec(const std::string& label) {
  if (label.empty()) return kLastColumn;
  if (std::all_of(label.begin(), label.end(), ::isdigit)) return static_cast<std::size_t>(std::stoull(label));
  return label;
}

DiscretizeOptions discretize_options(const RunConfig& c) {
  DiscretizeOptions o;
  o.bins = c.bins;
  o.strategy = c.bin_strategy == "equal-width" ? BinStrategy::EqualWidth : BinStrategy::EqualFrequency;
  o.missing = c.missing == "impute" ? MissingPolicy::ImputeMode : MissingPolicy::DropRow;
  return o;
}

CvConfig cv_config(const RunConfig& c) {
  CvConfig cv;
  cv.folds = c.folds;
  cv.leave_one_out = c.loo;
  cv.classifier = c.classifier == "knn" ? ClassifierKind::Knn : ClassifierKind::NaiveBayes;
  cv.k = c.k;
  cv.seed = c.seed;
  cv.stratified = !c.unstratified;
  cv.threads = c.threads;
  return cv;
}

CobraOptions cobra_options(const RunConfig& c) {
  CobraOptions o;
  o.rounds = c.rounds;
  o.seed = c.seed;
  o.sdp.tol = c.tol;
  o.sdp.max_iter = c.max_iter;
  o.shrink = c.shrink == "forward" ? ShrinkPolicy::Forward : ShrinkPolicy::Backward;
  o.fail_on_nonconvergence = c.fail_on_nonconvergence;
  o.threads = c.threads;
  return o;
}

// Flag combinations that can be rejected before touching the data.
void validate(const RunConfig& c) {
  if (c.bins < 2) throw ConfigError("--bins must be at least 2");
  if (c.rounds < 1) throw ConfigError("--rounds must be positive");
  if (!(c.tol > 0)) throw ConfigError("--tol must be positive");
  if (c.max_iter < 1) throw ConfigError("--max-iter must be positive");
  if (c.threads < 1) throw ConfigError("--threads must be positive");
  if (c.k < 1) throw ConfigError("--k must be positive");
  if (c.command == "select") {
    if (c.p == 0) throw ConfigError("select needs --p");
    if (c.search == "cobra" && c.p < 2) throw ConfigError("cobra requires p >= 2");
  }
  if (c.command == "evaluate" && c.features.empty()) throw ConfigError("evaluate needs --features");
  if (c.command == "psearch" && c.grid.empty()) throw ConfigError("psearch needs --grid");
  if (c.command != "verify" && c.inputs.size() != 1) throw ConfigError(c.command + " takes exactly one input file");
}

DiscreteDataset load(const RunConfig& c) {
  const RawDataset raw = load_csv(c.inputs.front(), label_spec(c.label));
  return discretize(raw, discretize_options(c));
}

// ---- selection --------------------------------------------------------------

QMatrix<double> cobra_q(Criterion crit, const MiTerms& terms, std::size_t p, const std::optional<double>& lambda) {
  std::optional<double> lam = lambda;
  Redundancy kind = Redundancy::ThreeWay;
  switch (crit) {
    case Criterion::MaxRelevance:
      if (!lam) lam = 0.0;
      break;
    case Criterion::Mifs:
      kind = Redundancy::Pairwise;
      if (!lam) lam = 1.0;
      break;
    case Criterion::Mrmr: kind = Redundancy::Pairwise; break;
    case Criterion::D1:
      if (!lam) lam = 1.0;
      break;
    case Criterion::D2:
    case Criterion::Jmi: break;
  }
  return build_q_matrix(terms.matrix(kind), static_cast<Eigen::Index>(p), lam);
}

struct Selection {
  SelectionResult result;
  std::optional<SdpSolution<double>> sdp;
  std::vector<std::string> warnings;
};

Selection run_search(const RunConfig& c, Criterion crit, const MiTerms& terms, const SubsetOracle& oracle,
                     std::size_t n, std::size_t p) {
  Selection out;
  if (c.search == "fs") {
    out.result = forward_selection(oracle, n, p);
  } else if (c.search == "be") {
    out.result = backward_elimination(oracle, n, p);
  } else if (c.search == "exhaustive") {
    out.result = exhaustive(oracle, n, p, c.cap);
  } else if (p < 2) {
    // A single feature is found exactly by one forward step.
    out.result = forward_selection(oracle, n, p);
  } else {
    auto r = cobra(cobra_q(crit, terms, p, c.lambda), oracle, p, cobra_options(c));
    out.result = std::move(r.selection);
    out.sdp = std::move(r.sdp);
    out.warnings = std::move(r.warnings);
  }
  return out;
}

std::string feature_label(const DiscreteDataset& d, std::size_t i) {
  return "X" + std::to_string(i + 1) + " (" + d.names().at(i) + ")";
}

struct Emitter {
  const RunConfig& cfg;

  void write(const std::string& text) const {
    if (cfg.output.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + cfg.output + "'");
    out << text;
  }

  void json(const Json& result) const {
    Json doc;
    doc["reproducibility"] = reproducibility(cfg);
    doc["result"] = result;
    write(doc.dump(2) + "\n");
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_select(const RunConfig& c) {
  const Criterion crit = parse_criterion(c.measure);
  const DiscreteDataset data = load(c);
  const std::size_t n = data.num_features();
  if (c.p > n) throw ConfigError("--p " + std::to_string(c.p) + " exceeds the " + std::to_string(n) + " usable features");
  if (c.search == "exhaustive" && binomial(n, c.p) > c.cap)
    throw ConfigError("exhaustive search over C(" + std::to_string(n) + "," + std::to_string(c.p) +
                      ") = " + std::to_string(binomial(n, c.p)) + " subsets exceeds the cap of " +
                      std::to_string(c.cap));

  const MiTerms terms = empirical_mi_terms(data, c.miller_madow);
  const SubsetOracle oracle = make_oracle(crit, terms);
  const Selection sel = run_search(c, crit, terms, oracle, n, c.p);
  print_warnings(sel.warnings);

  if (c.format == "table") {
    std::ostringstream out;
    out << c.measure << " + " << c.search << ", p = " << c.p << ", score = " << std::setprecision(6)
        << sel.result.score << "\n";
    for (std::size_t i : sel.result.selected)
      out << "  " << feature_label(data, i) << "  I(X;C) = " << std::setprecision(4) << terms.relevance(static_cast<Eigen::Index>(i))
          << "\n";
    if (!data.dropped().empty()) {
      out << "dropped constant columns:";
      for (const auto& d : data.dropped()) out << " " << d;
      out << "\n";
    }
    Emitter{c}.write(out.str());
    return 0;
  }

  Json r;
  r["features"] = data.names();
  r["dropped"] = data.dropped();
  r["encodings"] = to_json(data.encodings());
  r["rows"] = data.rows();
  r["selection"] = to_json(sel.result);
  r["selection"]["names"] = Json::array();
  for (std::size_t i : sel.result.selected) r["selection"]["names"].push_back(data.names().at(i));
  r["oracle"] = {{"queries", oracle.queries()}, {"evaluations", oracle.evaluations()}};
  if (sel.sdp) r["sdp"] = to_json(*sel.sdp, c.include_matrix);
  r["warnings"] = sel.warnings;
  Emitter{c}.json(r);
  return 0;
}

// ---- evaluation -------------------------------------------------------------

void write_curve(const RunConfig& c, const EvalReport& report) {
  if (c.curve_csv.empty()) return;
  std::ofstream out(c.curve_csv, std::ios::binary);
  if (!out) throw ConfigError("cannot open curve file '" + c.curve_csv + "'");
  out << curve_csv(report);
}

void emit_report(const RunConfig& c, const DiscreteDataset& data, const EvalReport& report) {
  write_curve(c, report);
  if (c.format == "table") {
    Emitter{c}.write(to_table(report));
    return;
  }
  Json r;
  r["features"] = data.names();
  r["dropped"] = data.dropped();
  r["rows"] = data.rows();
  r["report"] = to_json(report);
  Emitter{c}.json(r);
}

int cmd_evaluate(const RunConfig& c) {
  const FeatureSet wanted = parse_index_list(c.features, "--features");
  if (wanted.empty()) throw ConfigError("--features is empty");
  const DiscreteDataset data = load(c);
  const FeatureSet features = normalize_set(wanted, data.num_features());
  emit_report(c, data, cross_validate(data, features, cv_config(c)));
  return 0;
}

int cmd_psearch(const RunConfig& c) {
  const Criterion crit = parse_criterion(c.measure);
  const std::vector<std::size_t> grid = parse_grid(c.grid);
  const DiscreteDataset data = load(c);
  const std::size_t n = data.num_features();
  for (std::size_t p : grid) {
    if (p < 1 || p > n) throw ConfigError("grid value " + std::to_string(p) + " outside 1.." + std::to_string(n));
    if (c.search == "exhaustive" && binomial(n, p) > c.cap)
      throw ConfigError("exhaustive search over C(" + std::to_string(n) + "," + std::to_string(p) +
                        ") subsets exceeds the cap of " + std::to_string(c.cap));
  }
  const MiTerms terms = empirical_mi_terms(data, c.miller_madow);
  const SubsetOracle oracle = make_oracle(crit, terms);
  std::vector<std::string> warnings;
  const Selector select = [&](std::size_t p) {
    Selection s = run_search(c, crit, terms, oracle, n, p);
    warnings.insert(warnings.end(), s.warnings.begin(), s.warnings.end());
    return s.result.selected;
  };
  const EvalReport report = p_search(data, select, grid, cv_config(c));
  print_warnings(warnings);
  emit_report(c, data, report);
  return 0;
}

// ---- identity checks --------------------------------------------------------

struct Check {
  std::string pmf;
  std::string identity;
  double error = 0.0;
  double tolerance = 0.0;
  bool skipped = false;
  std::string note;

  bool passed() const { return skipped || error <= tolerance; }
};

Check measured(std::string pmf, std::string identity, double error, double tolerance) {
  Check c;
  c.pmf = std::move(pmf);
  c.identity = std::move(identity);
  c.error = error;
  c.tolerance = tolerance;
  return c;
}

std::vector<Check> check_pmf(const std::string& name, const JointPmf& p) {
  constexpr double kTol = 1e-8;
  std::vector<Check> out;
  if (!p.class_index()) throw DataError("pmf '" + name + "' has no class variable");
  const VarSet feats = p.features();
  const VarSet cls{*p.class_index()};
  const double joint = mutual_information(p, feats, cls);
  const double n = static_cast<double>(feats.size());

  out.push_back(measured(name, "first expansion total = I(X;C)", std::abs(expansion_first(p).total - joint), kTol));
  out.push_back(measured(name, "second expansion total = (N/2) I(X;C)", std::abs(expansion_second(p).total - n / 2.0 * joint), kTol));

  if (feats.size() <= 4) {
    std::vector<std::size_t> order(feats.size());
    std::iota(order.begin(), order.end(), 0);
    double worst = 0.0;
    do {
      double total = 0.0;
      VarSet given;
      for (std::size_t k : order) {
        total += conditional_mi(p, {feats[k]}, cls, given);
        given.push_back(feats[k]);
      }
      worst = std::max(worst, std::abs(total - joint));
    } while (std::next_permutation(order.begin(), order.end()));
    out.push_back(measured(name, "chain rule over every ordering", worst, kTol));
  } else {
    Check skip = measured(name, "chain rule over every ordering", 0.0, kTol);
    skip.skipped = true;
    skip.note = "more than 4 features";
    out.push_back(skip);
  }

  Check kirk = measured(name, "Kirkwood cross-entropy = sum H(Xi) - sum I(Xi;Xj)", 0.0, kTol);
  try {
    double rhs = 0.0;
    for (std::size_t i : feats) rhs += entropy(p, {i});
    for (std::size_t a = 0; a < feats.size(); ++a)
      for (std::size_t b = a + 1; b < feats.size(); ++b) rhs -= mutual_information(p, {feats[a]}, {feats[b]});
    kirk.error = std::abs(kirkwood_cross_entropy(p) - rhs);
  } catch (const DataError& e) {
    kirk.skipped = true;
    kirk.note = e.what();
  }
  out.push_back(kirk);

  const MiMatrix three = mi_terms(p).matrix(Redundancy::ThreeWay);
  double worst_d2 = 0.0;
  for (std::size_t size = 1; size <= feats.size(); ++size)
    for_each_subset(feats.size(), size, [&](const FeatureSet& s) {
      worst_d2 = std::max(worst_d2, -score_d2(three, s));
      return true;
    });
  out.push_back(measured(name, "D2 score is non-negative on every subset", worst_d2, 1e-10));
  return out;
}

int cmd_verify(const RunConfig& c) {
  std::vector<std::pair<std::string, JointPmf>> pmfs = fixtures::bundled_pmfs();
  for (const auto& path : c.inputs) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw DataError("'" + path + "' is not valid JSON: " + e.what());
    }
    pmfs.emplace_back(path, pmf_from_json(doc));
  }
  std::vector<Check> checks;
  for (const auto& [name, p] : pmfs) {
    auto more = check_pmf(name, p);
    checks.insert(checks.end(), more.begin(), more.end());
  }
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& k) { return k.passed(); });

  if (c.format == "table") {
    std::ostringstream out;
    for (const auto& k : checks) {
      out << (k.skipped ? "SKIP" : k.passed() ? "PASS" : "FAIL") << "  " << std::left << std::setw(16) << k.pmf
          << std::setw(52) << k.identity;
      if (k.skipped)
        out << k.note;
      else
        out << "err " << std::scientific << std::setprecision(2) << k.error << std::defaultfloat;
      out << "\n";
    }
    out << (ok ? "all identities hold\n" : "identity check failed\n");
    Emitter{c}.write(out.str());
  } else {
    Json r;
    r["passed"] = ok;
    r["checks"] = Json::array();
    for (const auto& k : checks) {
      Json j;
      j["pmf"] = k.pmf;
      j["identity"] = k.identity;
      j["status"] = k.skipped ? "skipped" : k.passed() ? "pass" : "fail";
      j["error"] = k.error;
      j["tolerance"] = k.tolerance;
      if (!k.note.empty()) j["note"] = k.note;
      r["checks"].push_back(j);
    }
    Emitter{c}.json(r);
  }
  return ok ? 0 : 1;
}

// ---- standalone solver ------------------------------------------------------

int cmd_solve_sdp(const RunConfig& c) {
  std::ifstream in(c.inputs.front());
  if (!in) throw DataError("cannot open '" + c.inputs.front() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError("'" + c.inputs.front() + "' is not valid JSON: " + e.what());
  }
  const QMatrix<double> q = problem_from_json(doc);
  SdpOptions opt;
  opt.tol = c.tol;
  opt.max_iter = c.max_iter;
  const auto sol = solve_sdp(homogenize(q), opt);
  if (sol.status != SdpStatus::Converged && c.fail_on_nonconvergence)
    throw SolverError("SDP solver stopped after " + std::to_string(sol.iterations) + " iterations without converging");

  Json r;
  r["n"] = q.size();
  r["p"] = q.p_target;
  r["sdp"] = to_json(sol, c.include_matrix);
  std::vector<std::string> warnings;
  if (sol.status != SdpStatus::Converged) warnings.push_back("SDP solver did not converge");
  if (q.p_target >= 2) {
    const auto res = cobra(q, make_quadratic_oracle(q), static_cast<std::size_t>(q.p_target), cobra_options(c));
    r["selection"] = to_json(res.selection);
  }
  r["warnings"] = warnings;
  print_warnings(warnings);
  if (c.format == "table") {
    std::ostringstream out;
    out << "status     " << (sol.status == SdpStatus::Converged ? "converged" : "max_iter") << "\n"
        << "objective  " << std::setprecision(10) << sol.objective << "\n"
        << "iterations " << sol.iterations << "\n"
        << "residual   " << std::scientific << std::setprecision(2) << sol.residuals.max() << std::defaultfloat << "\n";
    if (r.contains("selection")) {
      out << "selected  ";
      for (std::size_t i : r["selection"]["selected"]) out << " X" << i + 1;
      out << "  score " << std::setprecision(10) << r["selection"]["score"].get<double>() << "\n";
    }
    Emitter{c}.write(out.str());
  } else {
    Emitter{c}.json(r);
  }
  return 0;
}

void add_options(CLI::App& app, RunConfig& c) {
  auto env = [](CLI::Option* o, const char* name) { o->envname(std::string("FSEL_") + name); };

  env(app.add_option("--label", c.label, "label column: header name or 0-based index (default: last column)")
          ->group("Data"), "LABEL");
  env(app.add_option("--bins", c.bins, "bins for numeric columns")->group("Data")->capture_default_str(), "BINS");
  env(app.add_option("--bin-strategy", c.bin_strategy, "equal-frequency or equal-width")
          ->check(CLI::IsMember({"equal-frequency", "equal-width"}))->group("Data")->capture_default_str(),
      "BIN_STRATEGY");
  env(app.add_option("--missing", c.missing, "drop rows with missing cells or impute the column mode")
          ->check(CLI::IsMember({"drop", "impute"}))->group("Data")->capture_default_str(),
      "MISSING");
  env(app.add_flag("--miller-madow", c.miller_madow, "bias-correct plug-in MI estimates")->group("Data"), "MILLER_MADOW");

  env(app.add_option("--measure", c.measure, "maxrel, mifs, mrmr, jmi, d1 or d2")
          ->check(CLI::IsMember({"maxrel", "mifs", "mrmr", "jmi", "d1", "d2"}))->group("Selection")
          ->capture_default_str(),
      "MEASURE");
  env(app.add_option("--search", c.search, "fs, be, exhaustive or cobra")
          ->check(CLI::IsMember({"fs", "be", "exhaustive", "cobra"}))->group("Selection")->capture_default_str(),
      "SEARCH");
  env(app.add_option("--p", c.p, "number of features to select")->group("Selection"), "P");
  env(app.add_option("--grid", c.grid, "p values for psearch: a:b, a:b:step or a comma list")->group("Selection"), "GRID");
  env(app.add_option("--rounds", c.rounds, "cobra rounding rounds")->group("Selection")->capture_default_str(), "ROUNDS");
  env(app.add_option("--seed", c.seed, "seed for rounding and fold assignment")->group("Selection")->capture_default_str(),
      "SEED");
  env(app.add_option("--tol", c.tol, "SDP residual tolerance")->group("Selection")->capture_default_str(), "TOL");
  env(app.add_option("--max-iter", c.max_iter, "SDP iteration limit")->group("Selection")->capture_default_str(), "MAX_ITER");
  env(app.add_option("--lambda", c.lambda, "override the redundancy weight used to build Q for cobra")->group("Selection"),
      "LAMBDA");
  env(app.add_option("--shrink", c.shrink, "how cobra trims oversized candidates: backward or forward")
          ->check(CLI::IsMember({"backward", "forward"}))->group("Selection")->capture_default_str(),
      "SHRINK");
  env(app.add_flag("--fail-on-nonconvergence", c.fail_on_nonconvergence, "exit 4 if the SDP solver does not converge")
          ->group("Selection"),
      "FAIL_ON_NONCONVERGENCE");
  env(app.add_option("--cap", c.cap, "largest subset count exhaustive search may enumerate")->group("Selection")
          ->capture_default_str(),
      "CAP");

  env(app.add_option("--features", c.features, "0-based feature indices for evaluate, comma separated")
          ->group("Evaluation"),
      "FEATURES");
  env(app.add_option("--folds", c.folds, "cross-validation folds")->group("Evaluation")->capture_default_str(), "FOLDS");
  env(app.add_flag("--loo", c.loo, "leave-one-out instead of k folds")->group("Evaluation"), "LOO");
  env(app.add_option("--classifier", c.classifier, "nb (naive Bayes) or knn")
          ->check(CLI::IsMember({"nb", "knn"}))->group("Evaluation")->capture_default_str(),
      "CLASSIFIER");
  env(app.add_option("--k", c.k, "neighbours for knn")->group("Evaluation")->capture_default_str(), "K");
  env(app.add_flag("--unstratified", c.unstratified, "assign folds without class stratification")->group("Evaluation"),
      "UNSTRATIFIED");

  env(app.add_option("--threads", c.threads, "worker threads")->group("Output")->capture_default_str(), "THREADS");
  env(app.add_option("--format", c.format, "json or table")
          ->check(CLI::IsMember({"json", "table"}))->group("Output")->capture_default_str(),
      "FORMAT");
  env(app.add_option("--output,-o", c.output, "write the result here instead of stdout")->group("Output"), "OUTPUT");
  env(app.add_option("--curve-csv", c.curve_csv, "write the psearch curve as CSV")->group("Output"), "CURVE_CSV");
  env(app.add_flag("--include-matrix", c.include_matrix, "include the SDP matrix in JSON output")->group("Output"),
      "INCLUDE_MATRIX");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Mutual-information feature selection"};
  app.set_version_flag("--version", FSEL_VERSION);
  app.set_config("--config", "", "key = value file mirroring the long options");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  add_options(app, cfg);

  struct Sub {
    const char* name;
    const char* help;
    const char* input_help;
    bool input_required;
  };
  const Sub subs[] = {
      {"select", "select p features", "CSV file", true},
      {"evaluate", "cross-validate a fixed feature set", "CSV file", true},
      {"psearch", "choose p by cross-validated error", "CSV file", true},
      {"verify", "check information identities on bundled and given pmfs", "pmf JSON files", false},
      {"solve-sdp", "solve the SDP relaxation of a Q-matrix problem", "problem JSON file", true},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help)->fallthrough();
    auto* opt = sub->add_option("input", cfg.inputs, s.input_help);
    if (s.input_required) opt->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    validate(cfg);
    if (cfg.command == "select") return cmd_select(cfg);
    if (cfg.command == "evaluate") return cmd_evaluate(cfg);
    if (cfg.command == "psearch") return cmd_psearch(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    return cmd_solve_sdp(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "fsel " << cfg.command << ": config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "fsel " << cfg.command << ": data error: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "fsel " << cfg.command << ": solver error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "fsel " << cfg.command << ": " << e.what() << "\n";
    return 1;
  }
}
