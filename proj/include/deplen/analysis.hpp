#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deplen/constituency.hpp"
#include "deplen/features.hpp"
#include "deplen/stats.hpp"
#include "deplen/treebank.hpp"
#include "deplen/variants.hpp"

namespace deplen {

/// Not enough data to run a requested experiment.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ZScoreMode { fold, global };

ZScoreMode parse_zscore_mode(const std::string& name);
std::string zscore_mode_name(ZScoreMode mode);

enum class Strategy { reference, ascending, descending, random, least_effort };

std::string strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);
const std::vector<Strategy>& all_strategies();

struct ExperimentConfig {
  std::string corpus_path;
  CorpusFormat format = CorpusFormat::conllu;
  std::size_t cap = kDefaultVariantCap;
  std::uint64_t seed = 0;
  int k_min = 2;
  int k_max = 6;
  std::vector<Strategy> strategies = all_strategies();
  ZScoreMode zscore = ZScoreMode::fold;
  int folds = 10;
  int random_draws = 10;
  unsigned jobs = 1;
  std::string out_dir;
  bool exclude_punct = false;
  DistanceConvention distance = DistanceConvention::intervening;
  std::size_t min_regression_pairs = 500;

  /// Throws ConfigError on cap < 2, k-range outside [2, 6], folds < 2,
  /// random_draws < 1.
  void validate() const;
};

struct PreparedSentence {
  std::string id;
  SentencePlan plan;
  VariantSet variants;
};

struct CorpusCounts {
  std::size_t trees = 0;
  std::size_t non_projective = 0;
  std::map<std::string, std::size_t> ineligible;  // by reason
  std::size_t eligible = 0;
  std::size_t variants = 0;
};

struct PreparedCorpus {
  std::vector<PreparedSentence> sentences;
  CorpusCounts counts;
};

/// Decomposes every tree and draws its variants. Non-projective and
/// ineligible sentences are counted and skipped. Each sentence samples from
/// its own stream derived from (seed, sentence id).
PreparedCorpus prepare_corpus(const std::vector<DependencyTree>& trees, const ExperimentConfig& config);

struct CountHistogram {
  std::map<std::size_t, std::size_t> reference_counts;
  std::map<std::size_t, std::size_t> variant_counts;
  std::map<std::size_t, double> reference_pct;
  std::map<std::size_t, double> variant_pct;
};

CountHistogram constituent_count_histogram(const PreparedCorpus& corpus);

/// Mean length per slot over reference sentences with exactly k
/// constituents. Throws InsufficientData when there are none.
std::vector<double> position_length_profile(const PreparedCorpus& corpus, std::size_t k);

/// Total DL divided by token count for each strategy on one sentence.
/// Random and least-effort are means over `draws` seeded random starts;
/// least-effort draw i starts from random draw i.
struct SentenceStrategyDl {
  std::size_t k = 0;
  double reference = 0;
  double ascending = 0;
  double descending = 0;
  double random = 0;
  double least_effort = 0;

  [[nodiscard]] double get(Strategy s) const;
};

SentenceStrategyDl sentence_strategy_dl(const PreparedSentence& sentence, int draws, std::uint64_t seed,
                                        DistanceConvention conv = DistanceConvention::intervening);

struct StrategyCurvePoint {
  std::size_t k = 0;
  std::size_t sentences = 0;
  SentenceStrategyDl mean;
};

/// Per-k means of sentence_strategy_dl, ascending k.
std::vector<StrategyCurvePoint> strategy_curves(const PreparedCorpus& corpus, int draws, std::uint64_t seed,
                                                DistanceConvention conv = DistanceConvention::intervening,
                                                unsigned jobs = 1);

struct PairwiseDataset {
  std::vector<PairwiseExample> examples;
  std::vector<std::string> diagnostics;
};

/// One (reference, variant) pair per sampled variant, in corpus order,
/// passed through joachims_transform.
PairwiseDataset build_pairwise_dataset(const PreparedCorpus& corpus,
                                       DistanceConvention conv = DistanceConvention::intervening);

struct SuiteRow {
  std::string table;  // "dl" or "length"
  std::string label;
  std::vector<FeatureRef> predictors;
  double accuracy = 0;  // mean fold accuracy in [0, 1]
  std::optional<McNemarResult> vs_previous;
  std::vector<int> predictions;
};

struct ClassificationSuite {
  std::size_t examples = 0;
  std::vector<SuiteRow> rows;
};

/// Dependency-length rows (total, 2nd-last, last, last + 2nd-last) then
/// constituent-length rows (2nd-last, last, last + 2nd-last), each scored by
/// cross-validation on the same folds, with McNemar against the previous row
/// of the same table. Throws InsufficientData with fewer examples than folds.
ClassificationSuite run_classification_suite(const PairwiseDataset& data, const ExperimentConfig& config);

struct RegressionCell {
  std::size_t k = 0;
  std::size_t pairs = 0;
  bool sufficient = false;
  std::vector<std::string> candidates;
  RfecvResult selection;
  std::vector<std::string> selected;
  RegressionFit fit;
};

struct RegressionTable {
  FeatureRef::Kind kind = FeatureRef::Kind::dl;
  std::vector<RegressionCell> cells;
};

/// Per-k positional regression: RFECV over the k slot features, then a
/// logistic fit on the selected z-scored features. Cells with fewer than
/// config.min_regression_pairs pairs are marked insufficient and not fit.
RegressionTable run_regression_table(const PairwiseDataset& data, FeatureRef::Kind kind,
                                     const ExperimentConfig& config);

/// Pearson correlation between token count and constituent count over
/// eligible references.
double length_constituent_correlation(const PreparedCorpus& corpus);

struct SyntheticSpec {
  std::size_t sentences = 2000;
  /// Probability of each constituent count; index is k.
  std::vector<double> k_weights{0.0, 0.05, 0.2, 0.3, 0.25, 0.12, 0.08};
  double mean_length = 2.5;  // geometric on 1, 2, ...
  int max_length = 12;
  double p_least_effort = 1.0;
  /// 0 moves exactly the shortest constituent; larger values pick the moved
  /// constituent with probability proportional to exp(-length / temperature).
  double noise_temperature = 0.0;
  double p_aux = 0.2;
  double p_final_punct = 0.5;

  void validate() const;
};

/// Random projective trees: k preverbal constituents with random internal
/// structure, then the root verb, an optional auxiliary and optional final
/// punctuation. The reference order is a uniform draw, rearranged by the
/// least-effort move with probability p_least_effort.
std::vector<DependencyTree> generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace deplen
