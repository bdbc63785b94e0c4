#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "deplen/analysis.hpp"
#include "deplen/rng.hpp"

namespace deplen {

namespace {

const char* const kHeadRelations[] = {"nsubj", "obj", "obl", "iobj", "advmod", "obl:tmod"};

int geometric_length(Rng& rng, double mean, int max_length) {
  const double stop = 1.0 / mean;
  int len = 1;
  while (len < max_length && !rng.bernoulli(stop)) ++len;
  return len;
}

std::size_t sample_index(Rng& rng, const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Rounding fallback: last index with positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return i;
  }
  return 0;
}

// Attaches positions [lo, hi] (0-based within a constituent) as a random
// projective subtree under `parent`. heads[i] receives the local parent
// index, -1 for the constituent head.
void grow(Rng& rng, int lo, int hi, int parent, std::vector<int>& heads) {
  if (lo > hi) return;
  const int h = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  heads[static_cast<std::size_t>(h)] = parent;
  grow(rng, lo, h - 1, h, heads);
  grow(rng, h + 1, hi, h, heads);
}

// Position (in `order`) of the constituent to move next to the verb.
std::size_t pick_mover(Rng& rng, const std::vector<int>& lengths, const std::vector<std::size_t>& order,
                       double temperature) {
  if (temperature <= 0.0) {
    std::size_t pick = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (lengths[order[i]] <= lengths[order[pick]]) pick = i;
    }
    return pick;
  }
  const int shortest = *std::min_element(lengths.begin(), lengths.end());
  std::vector<double> w(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) w[i] = std::exp(-(lengths[order[i]] - shortest) / temperature);
  return sample_index(rng, w);
}

}  // namespace

void SyntheticSpec::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(p_least_effort) || !prob(p_aux) || !prob(p_final_punct)) {
    throw ConfigError("synthetic probabilities must lie in [0, 1]");
  }
  if (k_weights.empty()) throw ConfigError("constituent-count distribution is empty");
  double total = 0.0;
  for (double w : k_weights) {
    if (w < 0.0) throw ConfigError("constituent-count weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("constituent-count distribution must sum to 1");
  if (mean_length < 1.0) throw ConfigError("mean constituent length must be at least 1");
  if (max_length < 1) throw ConfigError("max constituent length must be at least 1");
  if (noise_temperature < 0.0) throw ConfigError("noise temperature must be non-negative");
}

std::vector<DependencyTree> generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<DependencyTree> corpus;
  corpus.reserve(spec.sentences);
  for (std::size_t s = 0; s < spec.sentences; ++s) {
    const std::string id = "syn-" + std::to_string(s + 1);
    Rng rng(derive_seed(seed, id));
    const std::size_t k = sample_index(rng, spec.k_weights);

    std::vector<int> lengths(k);
    std::vector<std::vector<int>> local_heads(k);
    for (std::size_t c = 0; c < k; ++c) {
      lengths[c] = geometric_length(rng, spec.mean_length, spec.max_length);
      local_heads[c].assign(static_cast<std::size_t>(lengths[c]), -1);
      grow(rng, 0, lengths[c] - 1, -1, local_heads[c]);
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<std::size_t>(order));
    if (k > 1 && rng.bernoulli(spec.p_least_effort)) {
      const auto pick = pick_mover(rng, lengths, order, spec.noise_temperature);
      std::rotate(order.begin() + static_cast<std::ptrdiff_t>(pick),
                  order.begin() + static_cast<std::ptrdiff_t>(pick) + 1, order.end());
    }
    const bool aux = rng.bernoulli(spec.p_aux);
    const bool punct = rng.bernoulli(spec.p_final_punct);

    const int preverbal = std::accumulate(lengths.begin(), lengths.end(), 0);
    const int verb = preverbal + 1;
    std::vector<Token> tokens;
    tokens.reserve(static_cast<std::size_t>(verb + 2));
    int base = 0;
    for (std::size_t slot = 0; slot < k; ++slot) {
      const auto c = order[slot];
      for (int j = 0; j < lengths[c]; ++j) {
        const int local = local_heads[c][static_cast<std::size_t>(j)];
        Token t;
        t.index = base + j + 1;
        t.form = "c" + std::to_string(c + 1) + "w" + std::to_string(j + 1);
        t.head = local < 0 ? verb : base + local + 1;
        t.deprel = local < 0 ? kHeadRelations[c % std::size(kHeadRelations)] : "dep";
        tokens.push_back(std::move(t));
      }
      base += lengths[c];
    }
    tokens.push_back({verb, "VERB", 0, "root"});
    if (aux) tokens.push_back({verb + 1, "AUX", verb, "aux"});
    if (punct) tokens.push_back({static_cast<int>(tokens.size()) + 1, ".", verb, "punct"});
    corpus.emplace_back(std::move(tokens), id);
  }
  return corpus;
}

}  // namespace deplen
