#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "deplen/constituency.hpp"

namespace deplen {

/// Predictors for one linearization. Positions run left to right; the last
/// entry is the constituent adjacent to the verb.
struct FeatureVector {
  long total_dl = 0;
  std::vector<int> constituent_dl;
  std::vector<int> constituent_length;

  [[nodiscard]] std::size_t k() const { return constituent_dl.size(); }
};

FeatureVector extract_features(const SentencePlan& plan, const Order& order,
                               DistanceConvention conv = DistanceConvention::intervening);

/// Feature difference for one reference/variant pair. Layout of `delta`:
/// [total_dl, dl_pos1..dl_posk, len_pos1..len_posk].
struct PairwiseExample {
  std::vector<double> delta;
  int label = 0;
  std::string pair_id;

  [[nodiscard]] std::size_t k() const { return (delta.size() - 1) / 2; }
};

struct FeaturePair {
  FeatureVector reference;
  FeatureVector variant;
  std::string pair_id;
};

struct TransformResult {
  std::vector<PairwiseExample> examples;
  std::vector<std::string> diagnostics;
};

/// Difference vector a - b in the PairwiseExample layout.
std::vector<double> feature_delta(const FeatureVector& a, const FeatureVector& b);

/// One example per pair. The n-th emitted example is reference - variant
/// with label 1 when n is even and variant - reference with label 0 when n
/// is odd. Pairs with mismatched k are skipped with a diagnostic and do not
/// advance the ordinal.
TransformResult joachims_transform(std::span<const FeaturePair> pairs);

/// Addresses one column of a PairwiseExample independent of k.
struct FeatureRef {
  enum class Kind { total_dl, dl, length };
  Kind kind = Kind::total_dl;
  int position = 0;       // 1-based
  bool from_end = false;  // position 1 from the end is the verb-adjacent slot

  static FeatureRef total() { return {Kind::total_dl, 0, false}; }
  static FeatureRef dl_at(int pos) { return {Kind::dl, pos, false}; }
  static FeatureRef len_at(int pos) { return {Kind::length, pos, false}; }
  static FeatureRef dl_from_end(int pos) { return {Kind::dl, pos, true}; }
  static FeatureRef len_from_end(int pos) { return {Kind::length, pos, true}; }

  [[nodiscard]] std::string name() const;
  /// Throws std::out_of_range when the example has too few constituents.
  [[nodiscard]] double read(const PairwiseExample& ex) const;
};

Eigen::MatrixXd design_matrix(std::span<const PairwiseExample> examples, std::span<const FeatureRef> columns);
Eigen::VectorXd label_vector(std::span<const PairwiseExample> examples);

struct ZScoreStats {
  std::vector<Eigen::Index> kept;  // source columns retained, in order
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
};

struct ZScoreResult {
  Eigen::MatrixXd matrix;
  ZScoreStats stats;
  std::vector<Eigen::Index> dropped;
  std::vector<std::string> diagnostics;
};

/// Centers each column and divides by its sample (n-1) standard deviation.
/// Zero-variance columns are dropped. With `fit_stats`, the stored columns,
/// means and deviations are applied instead of being estimated.
ZScoreResult zscore(const Eigen::MatrixXd& x, const std::optional<ZScoreStats>& fit_stats = std::nullopt);

/// CSV with header total_dl,dl_pos1..k,len_pos1..k,label,pair_id. All
/// examples must share k.
void write_feature_csv(std::ostream& out, std::span<const PairwiseExample> examples);

}  // namespace deplen
