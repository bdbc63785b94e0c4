#include "deplen/features.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace deplen {

FeatureVector extract_features(const SentencePlan& plan, const Order& order, DistanceConvention conv) {
  FeatureVector fv;
  fv.total_dl = total_dependency_length(plan, order, conv);
  fv.constituent_dl = main_verb_arcs(plan, order, conv);
  fv.constituent_length.reserve(order.size());
  for (auto c : order) fv.constituent_length.push_back(plan.preverbal[c].length());
  return fv;
}

std::vector<double> feature_delta(const FeatureVector& a, const FeatureVector& b) {
  if (a.k() != b.k()) throw std::invalid_argument("feature vectors differ in constituent count");
  const auto k = a.k();
  std::vector<double> d(2 * k + 1);
  d[0] = static_cast<double>(a.total_dl - b.total_dl);
  for (std::size_t i = 0; i < k; ++i) {
    d[1 + i] = a.constituent_dl[i] - b.constituent_dl[i];
    d[1 + k + i] = a.constituent_length[i] - b.constituent_length[i];
  }
  return d;
}

TransformResult joachims_transform(std::span<const FeaturePair> pairs) {
  TransformResult out;
  out.examples.reserve(pairs.size());
  std::size_t ordinal = 0;
  for (const auto& pair : pairs) {
    if (pair.reference.k() != pair.variant.k()) {
      out.diagnostics.push_back("pair " + pair.pair_id + ": reference has k=" + std::to_string(pair.reference.k()) +
                                ", variant has k=" + std::to_string(pair.variant.k()) + "; skipped");
      continue;
    }
    PairwiseExample ex;
    ex.pair_id = pair.pair_id;
    if (ordinal % 2 == 0) {
      ex.delta = feature_delta(pair.reference, pair.variant);
      ex.label = 1;
    } else {
      ex.delta = feature_delta(pair.variant, pair.reference);
      ex.label = 0;
    }
    out.examples.push_back(std::move(ex));
    ++ordinal;
  }
  return out;
}

std::string FeatureRef::name() const {
  switch (kind) {
    case Kind::total_dl:
      return "total_dl";
    case Kind::dl:
      return from_end ? "dl_from_end" + std::to_string(position) : "dl_pos" + std::to_string(position);
    case Kind::length:
      return from_end ? "len_from_end" + std::to_string(position) : "len_pos" + std::to_string(position);
  }
  return {};
}

double FeatureRef::read(const PairwiseExample& ex) const {
  if (kind == Kind::total_dl) return ex.delta.at(0);
  const auto k = static_cast<int>(ex.k());
  if (position < 1 || position > k) throw std::out_of_range(name() + " needs at least " + std::to_string(position) + " constituents");
  const int slot = from_end ? k - position + 1 : position;
  const int base = kind == Kind::dl ? 0 : k;
  return ex.delta[static_cast<std::size_t>(base + slot)];
}

Eigen::MatrixXd design_matrix(std::span<const PairwiseExample> examples, std::span<const FeatureRef> columns) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(examples.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t r = 0; r < examples.size(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c].read(examples[r]);
    }
  }
  return x;
}

Eigen::VectorXd label_vector(std::span<const PairwiseExample> examples) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(examples.size()));
  for (std::size_t r = 0; r < examples.size(); ++r) y(static_cast<Eigen::Index>(r)) = examples[r].label;
  return y;
}

ZScoreResult zscore(const Eigen::MatrixXd& x, const std::optional<ZScoreStats>& fit_stats) {
  ZScoreResult out;
  if (fit_stats) {
    out.stats = *fit_stats;
  } else {
    const auto n = x.rows();
    std::vector<double> means, sds;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double mean = n > 0 ? x.col(c).mean() : 0.0;
      const double ss = (x.col(c).array() - mean).square().sum();
      const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
      if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
        out.dropped.push_back(c);
        out.diagnostics.push_back("column " + std::to_string(c) + " has zero variance; dropped");
        continue;
      }
      out.stats.kept.push_back(c);
      means.push_back(mean);
      sds.push_back(sd);
    }
    out.stats.mean = Eigen::Map<Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
    out.stats.sd = Eigen::Map<Eigen::VectorXd>(sds.data(), static_cast<Eigen::Index>(sds.size()));
  }
  const auto kept = static_cast<Eigen::Index>(out.stats.kept.size());
  out.matrix.resize(x.rows(), kept);
  for (Eigen::Index j = 0; j < kept; ++j) {
    const auto src = out.stats.kept[static_cast<std::size_t>(j)];
    if (src >= x.cols()) throw std::invalid_argument("stored z-score statistics reference a missing column");
    out.matrix.col(j) = (x.col(src).array() - out.stats.mean(j)) / out.stats.sd(j);
  }
  return out;
}

void write_feature_csv(std::ostream& out, std::span<const PairwiseExample> examples) {
  if (examples.empty()) return;
  const auto k = examples.front().k();
  out << "total_dl";
  for (std::size_t i = 1; i <= k; ++i) out << ",dl_pos" << i;
  for (std::size_t i = 1; i <= k; ++i) out << ",len_pos" << i;
  out << ",label,pair_id\n";
  for (const auto& ex : examples) {
    if (ex.k() != k) throw std::invalid_argument("feature CSV rows must share the constituent count");
    for (std::size_t i = 0; i < ex.delta.size(); ++i) {
      if (i) out << ',';
      out << static_cast<long>(std::llround(ex.delta[i]));
    }
    out << ',' << ex.label << ',' << ex.pair_id << '\n';
  }
}

}  // namespace deplen
