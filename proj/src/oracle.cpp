#include "maxinf/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "maxinf/error.hpp"

namespace maxinf {

namespace {

// Realization index bit j <-> stochastic edge j present. Probabilities come
// from two half tables so every realization's mass is an independent product.
class Realizations {
 public:
  explicit Realizations(const WeightedDigraph& g) : slot_(g.m(), kDeterministic) {
    for (EdgeId e = 0; e < g.m(); ++e) {
      double p = g.edges()[e].p;
      if (p > 0.0 && p < 1.0) {
        slot_[e] = static_cast<std::int32_t>(probs_.size());
        probs_.push_back(p);
      }
    }
    if (probs_.size() > kMaxStochasticEdges) {
      throw CapacityError("exact enumeration supports at most " + std::to_string(kMaxStochasticEdges) +
                          " edges with 0 < p < 1; graph has " + std::to_string(probs_.size()));
    }
    low_bits_ = probs_.size() / 2;
    low_ = half_table(0, low_bits_);
    high_ = half_table(low_bits_, probs_.size());
  }

  std::uint64_t count() const { return std::uint64_t{1} << probs_.size(); }

  double probability(std::uint64_t mask) const {
    return low_[mask & ((std::uint64_t{1} << low_bits_) - 1)] * high_[mask >> low_bits_];
  }

  bool present(const Arc& a, std::uint64_t mask) const {
    std::int32_t s = slot_[a.edge];
    if (s == kDeterministic) return a.p >= 1.0;
    return (mask >> s) & 1u;
  }

 private:
  static constexpr std::int32_t kDeterministic = -1;

  std::vector<double> half_table(std::size_t from, std::size_t to) const {
    const std::size_t bits = to - from;
    std::vector<double> t(std::size_t{1} << bits, 1.0);
    for (std::size_t m = 0; m < t.size(); ++m) {
      for (std::size_t j = 0; j < bits; ++j) {
        t[m] *= (m >> j & 1u) ? probs_[from + j] : 1.0 - probs_[from + j];
      }
    }
    return t;
  }

  std::vector<std::int32_t> slot_;
  std::vector<double> probs_;
  std::size_t low_bits_ = 0;
  std::vector<double> low_;
  std::vector<double> high_;
};

void check_ids(const WeightedDigraph& g, std::span<const NodeId> S) {
  for (NodeId v : S) {
    if (v >= g.n()) throw BoundsError("node " + std::to_string(v) + " out of range for n=" + std::to_string(g.n()));
  }
}

// Marks everything reachable from `sources` in the realization; returns the count.
std::size_t reach(const WeightedDigraph& g, const Realizations& rz, std::uint64_t mask,
                  std::span<const NodeId> sources, std::vector<char>& seen, std::vector<NodeId>& stack) {
  std::fill(seen.begin(), seen.end(), 0);
  stack.clear();
  std::size_t count = 0;
  for (NodeId s : sources) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
      ++count;
    }
  }
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    for (const Arc& a : g.out_arcs(x)) {
      if (!seen[a.node] && rz.present(a, mask)) {
        seen[a.node] = 1;
        stack.push_back(a.node);
        ++count;
      }
    }
  }
  return count;
}

// Reach bitsets of every single node in one realization.
void reach_bitsets(const WeightedDigraph& g, const Realizations& rz, std::uint64_t mask,
                   std::size_t words, std::uint64_t* out, std::vector<char>& seen,
                   std::vector<NodeId>& stack) {
  std::fill(out, out + g.n() * words, 0);
  for (NodeId v = 0; v < g.n(); ++v) {
    reach(g, rz, mask, std::span<const NodeId>(&v, 1), seen, stack);
    std::uint64_t* row = out + static_cast<std::size_t>(v) * words;
    for (NodeId u = 0; u < g.n(); ++u) {
      if (seen[u]) row[u / 64] |= std::uint64_t{1} << (u % 64);
    }
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > kMaxSubsets) return kMaxSubsets + 1;
  }
  return c;
}

}  // namespace

ExactInfluence exact_influence(const WeightedDigraph& g, std::span<const NodeId> S) {
  check_ids(g, S);
  Realizations rz(g);
  std::vector<char> seen(g.n());
  std::vector<NodeId> stack;
  // Accumulate the probability mass of unreached nodes, so S = V gives n exactly.
  double missing = 0.0;
  const double n = static_cast<double>(g.n());
  for (std::uint64_t mask = 0; mask < rz.count(); ++mask) {
    std::size_t hit = reach(g, rz, mask, S, seen, stack);
    missing += rz.probability(mask) * static_cast<double>(g.n() - hit);
  }
  return {n - missing, rz.count()};
}

ExactOpt exact_opt(const WeightedDigraph& g, std::size_t k) {
  if (k < 1) throw DomainError("k must be at least 1");
  k = std::min(k, g.n());
  if (k == 0) return {};
  const std::uint64_t subsets = binomial(g.n(), k);
  if (subsets > kMaxSubsets) {
    throw CapacityError("exhaustive search supports at most " + std::to_string(kMaxSubsets) +
                        " subsets; C(" + std::to_string(g.n()) + "," + std::to_string(k) + ") is larger");
  }
  Realizations rz(g);
  const std::size_t words = (g.n() + 63) / 64;
  std::vector<std::uint64_t> bits(g.n() * words);
  std::vector<std::uint64_t> acc(words);
  std::vector<double> missing(subsets, 0.0);
  std::vector<char> seen(g.n());
  std::vector<NodeId> stack;
  std::vector<NodeId> combo(k);

  for (std::uint64_t mask = 0; mask < rz.count(); ++mask) {
    reach_bitsets(g, rz, mask, words, bits.data(), seen, stack);
    const double pr = rz.probability(mask);
    for (std::size_t i = 0; i < k; ++i) combo[i] = static_cast<NodeId>(i);
    for (std::uint64_t s = 0; s < subsets; ++s) {
      std::fill(acc.begin(), acc.end(), 0);
      for (NodeId v : combo) {
        const std::uint64_t* row = bits.data() + static_cast<std::size_t>(v) * words;
        for (std::size_t w = 0; w < words; ++w) acc[w] |= row[w];
      }
      std::size_t hit = 0;
      for (std::uint64_t w : acc) hit += static_cast<std::size_t>(std::popcount(w));
      missing[s] += pr * static_cast<double>(g.n() - hit);
      // Next combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && combo[i - 1] == g.n() - k + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }

  const double n = static_cast<double>(g.n());
  const double tol = 1e-12 * std::max(1.0, n);
  std::uint64_t best = 0;
  for (std::uint64_t s = 1; s < subsets; ++s) {
    if (missing[s] < missing[best] - tol) best = s;
  }
  ExactOpt out;
  out.value = n - missing[best];
  out.realizations = rz.count();
  // Unrank the winning combination.
  for (std::size_t i = 0; i < k; ++i) combo[i] = static_cast<NodeId>(i);
  for (std::uint64_t s = 0; s < best; ++s) {
    std::size_t i = k;
    while (i > 0 && combo[i - 1] == g.n() - k + i - 1) --i;
    ++combo[i - 1];
    for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }
  out.argmax = combo;
  return out;
}

InfluenceTable::InfluenceTable(const WeightedDigraph& g) : n_(g.n()), words_((g.n() + 63) / 64) {
  Realizations rz(g);
  const std::uint64_t cells = rz.count() * n_ * words_;
  if (cells > (std::uint64_t{1} << 25)) {
    throw CapacityError("influence table would need " + std::to_string(cells) + " words");
  }
  probs_.resize(rz.count());
  reach_.resize(cells);
  std::vector<char> seen(n_);
  std::vector<NodeId> stack;
  for (std::uint64_t mask = 0; mask < rz.count(); ++mask) {
    probs_[mask] = rz.probability(mask);
    reach_bitsets(g, rz, mask, words_, reach_.data() + mask * n_ * words_, seen, stack);
  }
}

double InfluenceTable::influence(std::span<const NodeId> S) const {
  for (NodeId v : S) {
    if (v >= n_) throw BoundsError("node " + std::to_string(v) + " out of range");
  }
  std::vector<std::uint64_t> acc(words_);
  double missing = 0.0;
  for (std::uint64_t r = 0; r < probs_.size(); ++r) {
    std::fill(acc.begin(), acc.end(), 0);
    const std::uint64_t* base = reach_.data() + r * n_ * words_;
    for (NodeId v : S) {
      for (std::size_t w = 0; w < words_; ++w) acc[w] |= base[static_cast<std::size_t>(v) * words_ + w];
    }
    std::size_t hit = 0;
    for (std::uint64_t w : acc) hit += static_cast<std::size_t>(std::popcount(w));
    missing += probs_[r] * static_cast<double>(n_ - hit);
  }
  return static_cast<double>(n_) - missing;
}

double chernoff_tail(std::uint64_t trials, double lambda) {
  return 2.0 * std::exp(-static_cast<double>(trials) * lambda * lambda / 4.0);
}

ChernoffPlan chernoff_trials(double lambda, double confidence) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0,1)");
  const double delta = 1.0 - confidence;
  auto n = static_cast<std::uint64_t>(std::ceil(4.0 * std::log(2.0 / delta) / (lambda * lambda)));
  n = std::max<std::uint64_t>(n, 1);
  while (n > 1 && chernoff_tail(n - 1, lambda) <= delta) --n;
  while (chernoff_tail(n, lambda) > delta) ++n;
  return {lambda, confidence, n};
}

}  // namespace maxinf
