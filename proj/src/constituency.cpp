#include "deplen/constituency.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace deplen {

namespace {

// new_pos[original position] under `order`; suffix tokens follow the
// preverbal block unchanged.
std::vector<int> permuted_positions(const SentencePlan& plan, const Order& order) {
  const auto& tree = *plan.tree;
  std::vector<int> new_pos(static_cast<std::size_t>(tree.size()) + 1, 0);
  int next = 1;
  for (auto c : order) {
    const auto& span = plan.preverbal[c].span;
    for (int p = span.first; p <= span.last; ++p) new_pos[static_cast<std::size_t>(p)] = next++;
  }
  for (int p : plan.postverbal_suffix) new_pos[static_cast<std::size_t>(p)] = next++;
  return new_pos;
}

int distance(int a, int b, DistanceConvention conv) {
  const int d = std::abs(a - b);
  return conv == DistanceConvention::intervening ? d - 1 : d;
}

}  // namespace

DistanceConvention parse_distance(const std::string& name) {
  if (name == "intervening") return DistanceConvention::intervening;
  if (name == "positional") return DistanceConvention::positional;
  throw std::invalid_argument("unknown distance convention '" + name + "'");
}

Order SentencePlan::identity() const {
  Order o(preverbal.size());
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = i;
  return o;
}

std::vector<int> SentencePlan::lengths() const {
  std::vector<int> out;
  out.reserve(preverbal.size());
  for (const auto& c : preverbal) out.push_back(c.length());
  return out;
}

Decomposition decompose(const DependencyTree& tree) {
  return decompose(std::make_shared<const DependencyTree>(tree));
}

Decomposition decompose(std::shared_ptr<const DependencyTree> tree) {
  if (!tree->projective()) throw ContractViolation("decompose requires a projective tree");
  const int verb = tree->root_index();
  SentencePlan plan;
  plan.verb_index = verb;
  for (int child : tree->children(verb)) {
    const Span span = subtree_yield(*tree, child);
    if (span.last < verb) {
      plan.preverbal.push_back({child, span, tree->token(child).deprel});
    } else if (span.first < verb) {
      return Ineligible{"constituent straddles the verb"};
    }
  }
  if (plan.preverbal.empty()) return Ineligible{"no preverbal constituents"};
  if (plan.preverbal.size() < 2) return Ineligible{"fewer than 2 constituents"};
  std::sort(plan.preverbal.begin(), plan.preverbal.end(),
            [](const Constituent& a, const Constituent& b) { return a.span.first < b.span.first; });
  int expect = 1;
  for (const auto& c : plan.preverbal) {
    if (c.span.first != expect) return Ineligible{"preverbal region not tiled by root children"};
    expect = c.span.last + 1;
  }
  if (expect != verb) return Ineligible{"preverbal region not tiled by root children"};
  for (int p = verb; p <= tree->size(); ++p) plan.postverbal_suffix.push_back(p);
  plan.tree = std::move(tree);
  return plan;
}

long total_dependency_length(const DependencyTree& tree, DistanceConvention conv) {
  long sum = 0;
  for (const auto& t : tree.tokens()) {
    if (t.head != 0) sum += distance(t.index, t.head, conv);
  }
  return sum;
}

long total_dependency_length(const SentencePlan& plan, const Order& order, DistanceConvention conv) {
  check_order(plan, order);
  const auto pos = permuted_positions(plan, order);
  long sum = 0;
  for (const auto& t : plan.tree->tokens()) {
    if (t.head != 0) {
      sum += distance(pos[static_cast<std::size_t>(t.index)], pos[static_cast<std::size_t>(t.head)], conv);
    }
  }
  return sum;
}

std::vector<int> main_verb_arcs(const SentencePlan& plan, const Order& order, DistanceConvention conv) {
  check_order(plan, order);
  const auto pos = permuted_positions(plan, order);
  const int verb = pos[static_cast<std::size_t>(plan.verb_index)];
  std::vector<int> arcs;
  arcs.reserve(order.size());
  for (auto c : order) {
    arcs.push_back(distance(pos[static_cast<std::size_t>(plan.preverbal[c].head_index)], verb, conv));
  }
  return arcs;
}

long main_verb_dl(const SentencePlan& plan, const Order& order, DistanceConvention conv) {
  check_order(plan, order);
  long sum = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& c = plan.preverbal[order[i]];
    sum += static_cast<long>(c.length()) * static_cast<long>(i) + c.head_right_offset();
  }
  if (conv == DistanceConvention::positional) sum += static_cast<long>(order.size());
  return sum;
}

int constituent_dl(const SentencePlan& plan, const Order& order, std::size_t which, DistanceConvention conv) {
  check_order(plan, order);
  if (which >= plan.k()) throw std::invalid_argument("constituent index out of range");
  int after = 0;
  bool seen = false;
  for (auto c : order) {
    if (seen) after += plan.preverbal[c].length();
    if (c == which) seen = true;
  }
  const int d = after + plan.preverbal[which].head_right_offset();
  return conv == DistanceConvention::intervening ? d : d + 1;
}

void check_order(const SentencePlan& plan, const Order& order) {
  if (order.size() != plan.k()) throw std::invalid_argument("order size does not match constituent count");
  std::vector<bool> seen(order.size(), false);
  for (auto c : order) {
    if (c >= order.size() || seen[c]) throw std::invalid_argument("order is not a permutation");
    seen[c] = true;
  }
}

}  // namespace deplen
