#include "deplen/analysis.hpp"

#include <algorithm>
#include <variant>

#include "deplen/parallel.hpp"
#include "deplen/rng.hpp"

namespace deplen {

namespace {

constexpr std::uint64_t kVariantSalt = 1;
constexpr std::uint64_t kCvSalt = 2;
constexpr std::uint64_t kDrawSalt = 100;

double normalized(long dl, int tokens) { return static_cast<double>(dl) / static_cast<double>(tokens); }

}  // namespace

ZScoreMode parse_zscore_mode(const std::string& name) {
  if (name == "fold") return ZScoreMode::fold;
  if (name == "global") return ZScoreMode::global;
  throw ConfigError("unknown z-score mode '" + name + "' (expected fold or global)");
}

std::string zscore_mode_name(ZScoreMode mode) { return mode == ZScoreMode::fold ? "fold" : "global"; }

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::reference: return "reference";
    case Strategy::ascending: return "ascending";
    case Strategy::descending: return "descending";
    case Strategy::random: return "random";
    case Strategy::least_effort: return "least_effort";
  }
  return {};
}

Strategy parse_strategy(const std::string& name) {
  for (auto s : all_strategies()) {
    if (strategy_name(s) == name) return s;
  }
  if (name == "least-effort") return Strategy::least_effort;
  throw ConfigError("unknown strategy '" + name + "'");
}

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> all{Strategy::reference, Strategy::ascending, Strategy::descending,
                                         Strategy::random, Strategy::least_effort};
  return all;
}

void ExperimentConfig::validate() const {
  if (cap < 2) throw ConfigError("variant cap must be at least 2");
  if (k_min < 2 || k_max > 6 || k_min > k_max) throw ConfigError("k-range must lie within [2, 6]");
  if (folds < 2) throw ConfigError("folds must be at least 2");
  if (random_draws < 1) throw ConfigError("random draws must be at least 1");
  if (strategies.empty()) throw ConfigError("strategy list is empty");
}

PreparedCorpus prepare_corpus(const std::vector<DependencyTree>& trees, const ExperimentConfig& config) {
  using Slot = std::variant<std::monostate, PreparedSentence, std::string>;
  std::vector<Slot> slots(trees.size());
  parallel_for(trees.size(), config.jobs, [&](std::size_t i) {
    auto tree = std::make_shared<const DependencyTree>(config.exclude_punct ? strip_punctuation(trees[i]) : trees[i]);
    if (!tree->projective()) return;  // monostate marks non-projective
    auto result = decompose(tree);
    if (auto* why = std::get_if<Ineligible>(&result)) {
      slots[i] = why->reason;
      return;
    }
    auto& plan = std::get<SentencePlan>(result);
    const auto id = tree->id();
    auto variants = generate_variants(plan, config.cap, derive_seed(config.seed, id, kVariantSalt));
    slots[i] = PreparedSentence{id, std::move(plan), std::move(variants)};
  });

  PreparedCorpus corpus;
  corpus.counts.trees = trees.size();
  for (auto& slot : slots) {
    if (std::holds_alternative<std::monostate>(slot)) {
      ++corpus.counts.non_projective;
    } else if (auto* reason = std::get_if<std::string>(&slot)) {
      ++corpus.counts.ineligible[*reason];
    } else {
      auto& s = std::get<PreparedSentence>(slot);
      corpus.counts.variants += s.variants.sampled_variants.size();
      corpus.sentences.push_back(std::move(s));
    }
  }
  corpus.counts.eligible = corpus.sentences.size();
  return corpus;
}

CountHistogram constituent_count_histogram(const PreparedCorpus& corpus) {
  CountHistogram h;
  std::size_t refs = 0, vars = 0;
  for (const auto& s : corpus.sentences) {
    ++h.reference_counts[s.plan.k()];
    h.variant_counts[s.plan.k()] += s.variants.sampled_variants.size();
    ++refs;
    vars += s.variants.sampled_variants.size();
  }
  for (auto [k, c] : h.reference_counts) h.reference_pct[k] = 100.0 * static_cast<double>(c) / static_cast<double>(refs);
  for (auto [k, c] : h.variant_counts) {
    h.variant_pct[k] = vars ? 100.0 * static_cast<double>(c) / static_cast<double>(vars) : 0.0;
  }
  return h;
}

std::vector<double> position_length_profile(const PreparedCorpus& corpus, std::size_t k) {
  std::vector<double> sums(k, 0.0);
  std::size_t count = 0;
  for (const auto& s : corpus.sentences) {
    if (s.plan.k() != k) continue;
    ++count;
    for (std::size_t i = 0; i < k; ++i) sums[i] += s.plan.preverbal[i].length();
  }
  if (count == 0) throw InsufficientData("no reference sentences with " + std::to_string(k) + " constituents");
  for (auto& v : sums) v /= static_cast<double>(count);
  return sums;
}

double SentenceStrategyDl::get(Strategy s) const {
  switch (s) {
    case Strategy::reference: return reference;
    case Strategy::ascending: return ascending;
    case Strategy::descending: return descending;
    case Strategy::random: return random;
    case Strategy::least_effort: return least_effort;
  }
  return 0.0;
}

SentenceStrategyDl sentence_strategy_dl(const PreparedSentence& sentence, int draws, std::uint64_t seed,
                                        DistanceConvention conv) {
  const auto& plan = sentence.plan;
  const int n = plan.tree->size();
  SentenceStrategyDl out;
  out.k = plan.k();
  out.reference = normalized(total_dependency_length(plan, plan.identity(), conv), n);
  out.ascending = normalized(total_dependency_length(plan, order_ascending(plan), conv), n);
  out.descending = normalized(total_dependency_length(plan, order_descending(plan), conv), n);
  double random = 0, least = 0;
  for (int d = 0; d < draws; ++d) {
    const auto start = order_random(plan, derive_seed(seed, sentence.id, kDrawSalt + static_cast<std::uint64_t>(d)));
    random += static_cast<double>(total_dependency_length(plan, start, conv));
    least += static_cast<double>(total_dependency_length(plan, apply_least_effort(plan, start), conv));
  }
  out.random = random / draws / n;
  out.least_effort = least / draws / n;
  return out;
}

std::vector<StrategyCurvePoint> strategy_curves(const PreparedCorpus& corpus, int draws, std::uint64_t seed,
                                                DistanceConvention conv, unsigned jobs) {
  std::vector<SentenceStrategyDl> per(corpus.sentences.size());
  parallel_for(per.size(), jobs,
               [&](std::size_t i) { per[i] = sentence_strategy_dl(corpus.sentences[i], draws, seed, conv); });
  std::map<std::size_t, StrategyCurvePoint> by_k;
  for (const auto& s : per) {
    auto& p = by_k[s.k];
    p.k = s.k;
    ++p.sentences;
    p.mean.k = s.k;
    p.mean.reference += s.reference;
    p.mean.ascending += s.ascending;
    p.mean.descending += s.descending;
    p.mean.random += s.random;
    p.mean.least_effort += s.least_effort;
  }
  std::vector<StrategyCurvePoint> out;
  for (auto& [k, p] : by_k) {
    const auto n = static_cast<double>(p.sentences);
    p.mean.reference /= n;
    p.mean.ascending /= n;
    p.mean.descending /= n;
    p.mean.random /= n;
    p.mean.least_effort /= n;
    out.push_back(p);
  }
  return out;
}

PairwiseDataset build_pairwise_dataset(const PreparedCorpus& corpus, DistanceConvention conv) {
  std::vector<FeaturePair> pairs;
  pairs.reserve(corpus.counts.variants);
  for (const auto& s : corpus.sentences) {
    const auto ref = extract_features(s.plan, s.variants.reference_order, conv);
    for (const auto& v : s.variants.sampled_variants) {
      pairs.push_back({ref, extract_features(s.plan, v, conv), s.id});
    }
  }
  auto t = joachims_transform(pairs);
  return {std::move(t.examples), std::move(t.diagnostics)};
}

ClassificationSuite run_classification_suite(const PairwiseDataset& data, const ExperimentConfig& config) {
  const auto n = data.examples.size();
  if (n < static_cast<std::size_t>(std::max(config.folds, 2))) {
    throw InsufficientData("insufficient data: " + std::to_string(n) + " pairwise examples for " +
                           std::to_string(config.folds) + "-fold cross-validation");
  }
  using R = FeatureRef;
  struct RowSpec {
    std::string table;
    std::string label;
    std::vector<FeatureRef> cols;
  };
  const std::vector<RowSpec> specs{
      {"dl", "total dependency length", {R::total()}},
      {"dl", "2nd-last constituent dl", {R::dl_from_end(2)}},
      {"dl", "last constituent dl", {R::dl_from_end(1)}},
      {"dl", "last + 2nd-last constituent dl", {R::dl_from_end(1), R::dl_from_end(2)}},
      {"length", "2nd-last constituent length", {R::len_from_end(2)}},
      {"length", "last constituent length", {R::len_from_end(1)}},
      {"length", "last + 2nd-last constituent length", {R::len_from_end(1), R::len_from_end(2)}},
  };
  const Eigen::VectorXd y = label_vector(data.examples);
  std::vector<int> truth(n);
  for (std::size_t i = 0; i < n; ++i) truth[i] = data.examples[i].label;

  CvOptions cv;
  cv.folds = config.folds;
  cv.seed = derive_seed(config.seed, "classification", kCvSalt);
  cv.fold_zscore = config.zscore == ZScoreMode::fold;
  cv.jobs = config.jobs;

  ClassificationSuite suite;
  suite.examples = n;
  for (const auto& spec : specs) {
    Eigen::MatrixXd x = design_matrix(data.examples, spec.cols);
    if (config.zscore == ZScoreMode::global) x = zscore(x).matrix;
    auto report = crossval_accuracy(x, y, cv);
    SuiteRow row{spec.table, spec.label, spec.cols, report.mean_accuracy, std::nullopt, std::move(report.predictions)};
    if (!suite.rows.empty() && suite.rows.back().table == row.table) {
      row.vs_previous = mcnemar(row.predictions, suite.rows.back().predictions, truth);
    }
    suite.rows.push_back(std::move(row));
  }
  return suite;
}

RegressionTable run_regression_table(const PairwiseDataset& data, FeatureRef::Kind kind,
                                     const ExperimentConfig& config) {
  RegressionTable table;
  table.kind = kind;
  for (int k = config.k_min; k <= config.k_max; ++k) {
    RegressionCell cell;
    cell.k = static_cast<std::size_t>(k);
    std::vector<PairwiseExample> subset;
    for (const auto& ex : data.examples) {
      if (ex.k() == cell.k) subset.push_back(ex);
    }
    cell.pairs = subset.size();
    std::vector<FeatureRef> cols;
    for (int p = 1; p <= k; ++p) {
      cols.push_back(kind == FeatureRef::Kind::dl ? FeatureRef::dl_at(p) : FeatureRef::len_at(p));
      cell.candidates.push_back(cols.back().name());
    }
    cell.sufficient = cell.pairs >= config.min_regression_pairs && cell.pairs >= static_cast<std::size_t>(config.folds);
    if (!cell.sufficient) {
      table.cells.push_back(std::move(cell));
      continue;
    }
    const Eigen::MatrixXd x = design_matrix(subset, cols);
    const Eigen::VectorXd y = label_vector(subset);
    CvOptions cv;
    cv.folds = config.folds;
    cv.seed = derive_seed(config.seed, "rfecv-k" + std::to_string(k), kCvSalt);
    cv.fold_zscore = config.zscore == ZScoreMode::fold;
    cv.jobs = config.jobs;
    cell.selection = rfecv(config.zscore == ZScoreMode::global ? zscore(x).matrix : x, y, cv);
    auto selected = cell.selection.selected;
    std::sort(selected.begin(), selected.end());
    const auto z = zscore(x(Eigen::all, selected));
    LogisticOptions lo;
    for (auto c : z.stats.kept) {
      lo.names.push_back(cell.candidates[static_cast<std::size_t>(selected[static_cast<std::size_t>(c)])]);
    }
    cell.selected = lo.names;
    cell.fit = fit_logistic_robust(z.matrix, y, lo);
    table.cells.push_back(std::move(cell));
  }
  return table;
}

double length_constituent_correlation(const PreparedCorpus& corpus) {
  std::vector<double> len, k;
  for (const auto& s : corpus.sentences) {
    len.push_back(s.plan.tree->size());
    k.push_back(static_cast<double>(s.plan.k()));
  }
  return pearson(len, k);
}

}  // namespace deplen
