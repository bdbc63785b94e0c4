#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "deplen/constituency.hpp"

namespace deplen {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultVariantCap = 100;

/// Counterfactual orders for one reference sentence. Permutations are the
/// unit: identical constituents in different slots are distinct variants.
struct VariantSet {
  Order reference_order;
  std::vector<Order> sampled_variants;
  std::size_t cap = kDefaultVariantCap;
  std::uint64_t seed = 0;
};

/// k! if it does not exceed `limit`, otherwise limit + 1.
std::uint64_t factorial_capped(std::size_t k, std::uint64_t limit);

/// All k!-1 non-reference orders (lexicographic) when k! <= cap, else
/// cap-1 distinct non-reference orders drawn uniformly without replacement.
/// Throws ConfigError when cap < 2, std::invalid_argument when k < 2.
VariantSet generate_variants(const SentencePlan& plan, std::size_t cap, std::uint64_t seed);

/// Constituents sorted by increasing length; ties keep their original order.
Order order_ascending(const SentencePlan& plan);
/// Constituents sorted by decreasing length; ties keep their original order.
Order order_descending(const SentencePlan& plan);
/// Uniformly random order from a seeded stream.
Order order_random(const SentencePlan& plan, std::uint64_t seed);

/// Moves the shortest constituent to the slot next to the verb, keeping the
/// relative order of the rest. Among equally short constituents the one
/// already closest to the verb is moved.
Order apply_least_effort(const SentencePlan& plan, const Order& start);
/// apply_least_effort on order_random(plan, seed).
Order order_least_effort(const SentencePlan& plan, std::uint64_t seed);

/// Constituent spans in `order`, then the frozen suffix.
TokenSequence linearize(const SentencePlan& plan, const Order& order);

std::vector<std::string> forms(const SentencePlan& plan, const TokenSequence& sequence);

/// The tree re-indexed to follow `order`.
DependencyTree linearized_tree(const SentencePlan& plan, const Order& order);

}  // namespace deplen
