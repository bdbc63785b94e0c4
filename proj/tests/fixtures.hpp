#pragma once

// Shared test data and brute-force oracles. Nothing here calls into the
// code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "deplen/constituency.hpp"
#include "deplen/treebank.hpp"

namespace deplen::testing {

// Worked example sentence in ascending order of constituent length:
// toffee | maa ne | baajaar jaate samaye | rote hue bacche ko | di
inline DependencyTree figure3_tree() {
  std::vector<Token> t{
      {1, "toffee", 11, "k2"},  {2, "maa", 11, "k1"},    {3, "ne", 2, "lwg__psp"}, {4, "baajaar", 5, "k2p"},
      {5, "jaate", 11, "vmod"}, {6, "samaye", 5, "lwg"}, {7, "rote", 9, "nmod"},   {8, "hue", 7, "lwg"},
      {9, "bacche", 11, "k4"},  {10, "ko", 9, "lwg__psp"}, {11, "di", 0, "main"},
  };
  return DependencyTree(std::move(t), "fig3");
}

inline std::string figure3_conllu() {
  std::string s = "# sent_id = fig3\n# text = toffee maa ne baajaar jaate samaye rote hue bacche ko di\n";
  const auto tree = figure3_tree();
  for (const auto& t : tree.tokens()) {
    s += std::to_string(t.index) + "\t" + t.form + "\t_\tNN\t_\t_\t" + std::to_string(t.head) + "\t" + t.deprel +
         "\t_\t_\n";
  }
  return s + "\n";
}

// Arbitrary (possibly non-projective) tree: random recursive tree over a
// random relabeling of 1..n.
inline DependencyTree random_tree(std::mt19937_64& gen, int n) {
  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 1);
  std::shuffle(label.begin(), label.end(), gen);
  std::vector<Token> tokens(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int pos = label[static_cast<std::size_t>(i)];
    int head = 0;
    if (i > 0) head = label[std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(i - 1))(gen)];
    tokens[static_cast<std::size_t>(pos - 1)] = {pos, "w" + std::to_string(pos), head, "dep"};
  }
  return DependencyTree(std::move(tokens));
}

// Arcs, including the root arc from artificial position 0, cross.
inline bool has_crossing_arcs(const DependencyTree& tree) {
  std::vector<std::pair<int, int>> arcs;
  for (const auto& t : tree.tokens()) arcs.emplace_back(std::min(t.index, t.head), std::max(t.index, t.head));
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    for (std::size_t j = 0; j < arcs.size(); ++j) {
      const auto [a, b] = arcs[i];
      const auto [c, d] = arcs[j];
      if (a < c && c < b && b < d) return true;
    }
  }
  return false;
}

// True if `ancestor` lies on the head path from `pos` to the root
// (a token is its own ancestor).
inline bool dominates(const DependencyTree& tree, int ancestor, int pos) {
  for (int cur = pos; cur != 0; cur = tree.head(cur)) {
    if (cur == ancestor) return true;
  }
  return false;
}

// Grows a projective subtree over local positions [lo, hi] under `parent`.
inline void grow_projective(std::mt19937_64& gen, int lo, int hi, int parent, std::vector<int>& heads) {
  if (lo > hi) return;
  const int h = std::uniform_int_distribution<int>(lo, hi)(gen);
  heads[static_cast<std::size_t>(h)] = parent;
  grow_projective(gen, lo, h - 1, h, heads);
  grow_projective(gen, h + 1, hi, h, heads);
}

// Projective verb-final-ish sentence with k preverbal constituents of the
// given lengths, a verb, and `post` postverbal tokens (a postverbal root
// child with its own dependents).
inline DependencyTree plan_tree(std::mt19937_64& gen, const std::vector<int>& lengths, int post) {
  std::vector<Token> tokens;
  const int preverbal = std::accumulate(lengths.begin(), lengths.end(), 0);
  const int verb = preverbal + 1;
  int base = 0;
  for (std::size_t c = 0; c < lengths.size(); ++c) {
    std::vector<int> local(static_cast<std::size_t>(lengths[c]), -1);
    grow_projective(gen, 0, lengths[c] - 1, -1, local);
    for (int j = 0; j < lengths[c]; ++j) {
      const int l = local[static_cast<std::size_t>(j)];
      tokens.push_back({base + j + 1, "c" + std::to_string(c) + "_" + std::to_string(j), l < 0 ? verb : base + l + 1,
                        l < 0 ? "arg" : "dep"});
    }
    base += lengths[c];
  }
  tokens.push_back({verb, "V", 0, "root"});
  if (post > 0) {
    std::vector<int> local(static_cast<std::size_t>(post), -1);
    grow_projective(gen, 0, post - 1, -1, local);
    for (int j = 0; j < post; ++j) {
      const int l = local[static_cast<std::size_t>(j)];
      tokens.push_back({verb + j + 1, "p" + std::to_string(j), l < 0 ? verb : verb + l + 1, l < 0 ? "ccomp" : "dep"});
    }
  }
  return DependencyTree(std::move(tokens));
}

inline std::vector<int> random_lengths(std::mt19937_64& gen, int k, int max_len = 6) {
  std::vector<int> out(static_cast<std::size_t>(k));
  for (auto& l : out) l = std::uniform_int_distribution<int>(1, max_len)(gen);
  return out;
}

inline SentencePlan random_plan(std::mt19937_64& gen, int k_min, int k_max) {
  const int k = std::uniform_int_distribution<int>(k_min, k_max)(gen);
  const int post = std::uniform_int_distribution<int>(0, 3)(gen);
  auto result = decompose(plan_tree(gen, random_lengths(gen, k), post));
  return std::get<SentencePlan>(result);
}

// Verb arcs read off a re-indexed tree: for every root child left of the
// root, |position difference| - 1.
inline long arc_by_arc_main_verb_dl(const DependencyTree& linear) {
  long sum = 0;
  const int root = linear.root_index();
  for (const auto& t : linear.tokens()) {
    if (t.head == root && t.index < root) sum += root - t.index - 1;
  }
  return sum;
}

// Two-sided exact binomial(n, 1/2) tail for the smaller count, summed in
// log space.
inline double binomial_two_tailed(long a, long b) {
  const long n = a + b;
  if (n == 0) return 1.0;
  const long m = std::min(a, b);
  double sum = 0.0;
  for (long i = 0; i <= m; ++i) {
    sum += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0));
  }
  return std::min(1.0, 2.0 * sum);
}

}  // namespace deplen::testing
