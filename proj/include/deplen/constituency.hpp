#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "deplen/treebank.hpp"

namespace deplen {

/// How the distance between a head and its dependent is counted.
/// `intervening` (the default everywhere) counts the words strictly between
/// them, so adjacent words are at distance 0. `positional` is |i - j|.
enum class DistanceConvention { intervening, positional };

DistanceConvention parse_distance(const std::string& name);

/// Contiguous yield of one child of the root verb.
struct Constituent {
  int head_index = 0;
  Span span;
  std::string deprel;

  [[nodiscard]] int length() const { return span.size(); }
  /// Tokens of the span strictly after the head.
  [[nodiscard]] int head_right_offset() const { return span.last - head_index; }
};

/// Position -> index into SentencePlan::preverbal. order[0] is the leftmost.
using Order = std::vector<std::size_t>;

/// Sequence of original token positions.
using TokenSequence = std::vector<int>;

/// A sentence split into permutable preverbal constituents and the frozen
/// material from the verb onward.
struct SentencePlan {
  std::shared_ptr<const DependencyTree> tree;
  std::vector<Constituent> preverbal;  // original left-to-right order
  int verb_index = 0;
  TokenSequence postverbal_suffix;

  [[nodiscard]] std::size_t k() const { return preverbal.size(); }
  [[nodiscard]] Order identity() const;
  [[nodiscard]] std::vector<int> lengths() const;
};

struct Ineligible {
  std::string reason;
};

using Decomposition = std::variant<SentencePlan, Ineligible>;

/// Splits a projective tree at its root. Root children whose yield ends
/// before the root become preverbal constituents; everything from the root
/// onward is frozen. Fewer than two preverbal constituents is Ineligible.
/// Throws ContractViolation on a non-projective tree.
Decomposition decompose(const DependencyTree& tree);
Decomposition decompose(std::shared_ptr<const DependencyTree> tree);

/// Sum over all arcs of the head-dependent distance.
long total_dependency_length(const DependencyTree& tree,
                             DistanceConvention conv = DistanceConvention::intervening);

/// Total dependency length of the sentence linearized in `order`, computed
/// on the permuted positions.
long total_dependency_length(const SentencePlan& plan, const Order& order,
                             DistanceConvention conv = DistanceConvention::intervening);

/// Distance from each constituent's head to the verb, by position in `order`.
/// Computed by placing tokens, not by formula.
std::vector<int> main_verb_arcs(const SentencePlan& plan, const Order& order,
                                DistanceConvention conv = DistanceConvention::intervening);

/// Sum of the verb arcs, via sum_j length(C_j) * (j - 1) + sum of head
/// offsets (+ k under the positional convention).
long main_verb_dl(const SentencePlan& plan, const Order& order,
                  DistanceConvention conv = DistanceConvention::intervening);

/// Distance from constituent `which` (index into plan.preverbal) to the verb.
int constituent_dl(const SentencePlan& plan, const Order& order, std::size_t which,
                   DistanceConvention conv = DistanceConvention::intervening);

/// Throws std::invalid_argument unless `order` is a permutation of 0..k-1.
void check_order(const SentencePlan& plan, const Order& order);

}  // namespace deplen
