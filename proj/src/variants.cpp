#include "deplen/variants.hpp"

#include <algorithm>
#include <set>

#include "deplen/rng.hpp"

namespace deplen {

namespace {

Order stable_by_length(const SentencePlan& plan, bool ascending) {
  Order order = plan.identity();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int la = plan.preverbal[a].length();
    const int lb = plan.preverbal[b].length();
    return ascending ? la < lb : la > lb;
  });
  return order;
}

}  // namespace

std::uint64_t factorial_capped(std::size_t k, std::uint64_t limit) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) {
    f *= i;
    if (f > limit) return limit + 1;
  }
  return f;
}

VariantSet generate_variants(const SentencePlan& plan, std::size_t cap, std::uint64_t seed) {
  if (cap < 2) throw ConfigError("variant cap must be at least 2");
  if (plan.k() < 2) throw std::invalid_argument("variant generation needs at least 2 constituents");
  VariantSet set;
  set.reference_order = plan.identity();
  set.cap = cap;
  set.seed = seed;

  if (factorial_capped(plan.k(), cap) <= cap) {
    Order perm = set.reference_order;
    while (std::next_permutation(perm.begin(), perm.end())) set.sampled_variants.push_back(perm);
    return set;
  }

  Rng rng(seed);
  std::set<Order> seen{set.reference_order};
  while (set.sampled_variants.size() < cap - 1) {
    Order perm = set.reference_order;
    rng.shuffle(std::span<std::size_t>(perm));
    if (seen.insert(perm).second) set.sampled_variants.push_back(std::move(perm));
  }
  return set;
}

Order order_ascending(const SentencePlan& plan) { return stable_by_length(plan, true); }

Order order_descending(const SentencePlan& plan) { return stable_by_length(plan, false); }

Order order_random(const SentencePlan& plan, std::uint64_t seed) {
  Order order = plan.identity();
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  return order;
}

Order apply_least_effort(const SentencePlan& plan, const Order& start) {
  check_order(plan, start);
  if (start.empty()) return start;
  std::size_t pick = 0;
  for (std::size_t i = 1; i < start.size(); ++i) {
    if (plan.preverbal[start[i]].length() <= plan.preverbal[start[pick]].length()) pick = i;
  }
  Order out = start;
  std::rotate(out.begin() + static_cast<std::ptrdiff_t>(pick), out.begin() + static_cast<std::ptrdiff_t>(pick) + 1, out.end());
  return out;
}

Order order_least_effort(const SentencePlan& plan, std::uint64_t seed) {
  return apply_least_effort(plan, order_random(plan, seed));
}

TokenSequence linearize(const SentencePlan& plan, const Order& order) {
  check_order(plan, order);
  TokenSequence seq;
  seq.reserve(static_cast<std::size_t>(plan.tree->size()));
  for (auto c : order) {
    for (int p = plan.preverbal[c].span.first; p <= plan.preverbal[c].span.last; ++p) seq.push_back(p);
  }
  seq.insert(seq.end(), plan.postverbal_suffix.begin(), plan.postverbal_suffix.end());
  return seq;
}

std::vector<std::string> forms(const SentencePlan& plan, const TokenSequence& sequence) {
  std::vector<std::string> out;
  out.reserve(sequence.size());
  for (int p : sequence) out.push_back(plan.tree->token(p).form);
  return out;
}

DependencyTree linearized_tree(const SentencePlan& plan, const Order& order) {
  const auto seq = linearize(plan, order);
  std::vector<int> new_pos(seq.size() + 1, 0);
  for (std::size_t i = 0; i < seq.size(); ++i) new_pos[static_cast<std::size_t>(seq[i])] = static_cast<int>(i) + 1;
  std::vector<Token> tokens;
  tokens.reserve(seq.size());
  for (int p : seq) {
    const auto& t = plan.tree->token(p);
    tokens.push_back({new_pos[static_cast<std::size_t>(p)], t.form, new_pos[static_cast<std::size_t>(t.head)], t.deprel});
  }
  return DependencyTree(std::move(tokens), plan.tree->id());
}

}  // namespace deplen
