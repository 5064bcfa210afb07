#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxinf/graph.hpp"

namespace maxinf {

// Enumeration guards. Edges with p in {0,1} are deterministic and do not
// count toward the stochastic limit.
inline constexpr std::size_t kMaxStochasticEdges = 22;
inline constexpr std::uint64_t kMaxSubsets = 100000;

struct ExactInfluence {
  double value = 0.0;
  std::uint64_t realizations = 0;  // 2^(stochastic edge count)
};

struct ExactOpt {
  double value = 0.0;
  std::vector<NodeId> argmax;  // lexicographically smallest maximizer
  std::uint64_t realizations = 0;
};

// E[I(S)] by enumerating every realization of the stochastic edges and
// taking the probability-weighted size of the reachable set. Throws
// CapacityError above kMaxStochasticEdges, BoundsError for ids >= n.
ExactInfluence exact_influence(const WeightedDigraph& g, std::span<const NodeId> S);

// max over |S| = k of E[I(S)]. k is clamped to n. Throws CapacityError when
// C(n,k) > kMaxSubsets or the stochastic edge guard is exceeded.
ExactOpt exact_opt(const WeightedDigraph& g, std::size_t k);

// Per-realization single-source reachability, precomputed once so that many
// seed sets over the same small graph can be scored cheaply.
class InfluenceTable {
 public:
  explicit InfluenceTable(const WeightedDigraph& g);

  double influence(std::span<const NodeId> S) const;
  std::uint64_t realizations() const { return probs_.size(); }
  std::size_t n() const { return n_; }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<double> probs_;
  std::vector<std::uint64_t> reach_;  // [realization][node][word]
};

struct ChernoffPlan {
  double lambda = 0.0;
  double confidence = 0.0;
  std::uint64_t trials = 0;
};

// 2 exp(-N lambda^2 / 4): the two-sided tail bound with mu = 1.
double chernoff_tail(std::uint64_t trials, double lambda);

// Smallest N with chernoff_tail(N, lambda) <= 1 - confidence. Throws
// DomainError unless 0 < lambda < 1 and 0 < confidence < 1.
ChernoffPlan chernoff_trials(double lambda, double confidence);

}  // namespace maxinf
