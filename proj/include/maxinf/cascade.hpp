#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxinf/graph.hpp"
#include "maxinf/rng.hpp"

namespace maxinf {

struct CascadeOutcome {
  std::vector<NodeId> influenced;  // sorted ascending
  std::uint64_t steps = 0;         // edge coins flipped
};

// Reusable scratch space for repeated traversals over graphs with at most
// `n` nodes. Visited marks are epoch-stamped so a traversal costs time
// proportional to what it touches, not to n.
class CascadeWorkspace {
 public:
  explicit CascadeWorkspace(std::size_t n) : mark_(n, 0) {}

  // Coin-flipping DFS from `seeds` along `dir`. Every arc leaving an
  // influenced node is examined exactly once and its coin flipped through
  // `coin(const Arc&) -> bool`; the arc is followed only if the coin lands
  // and the far endpoint is new. Appends influenced nodes to `influenced`
  // in discovery order and returns the number of coins flipped. Seeds must
  // be valid ids; duplicates are ignored.
  template <typename Coin>
  std::uint64_t run(const WeightedDigraph& g, std::span<const NodeId> seeds, Direction dir,
                    Coin&& coin, std::vector<NodeId>& influenced) {
    next_epoch();
    stack_.clear();
    for (NodeId s : seeds) {
      if (mark_[s] != epoch_) {
        mark_[s] = epoch_;
        stack_.push_back(s);
        influenced.push_back(s);
      }
    }
    std::uint64_t steps = 0;
    while (!stack_.empty()) {
      NodeId x = stack_.back();
      stack_.pop_back();
      for (const Arc& a : g.arcs(x, dir)) {
        ++steps;
        if (coin(a) && mark_[a.node] != epoch_) {
          mark_[a.node] = epoch_;
          stack_.push_back(a.node);
          influenced.push_back(a.node);
        }
      }
    }
    return steps;
  }

  // Single-root variant used by the sketch builder.
  template <typename Coin>
  std::uint64_t run_from(const WeightedDigraph& g, NodeId root, Direction dir, Coin&& coin,
                         std::vector<NodeId>& influenced) {
    return run(g, std::span<const NodeId>(&root, 1), dir, std::forward<Coin>(coin), influenced);
  }

 private:
  void next_epoch() {
    if (++epoch_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      epoch_ = 1;
    }
  }

  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> stack_;
};

// One realization of the influenced set C_g(seeds) under the independent
// cascade model, drawing coins from `rng`. Throws DomainError on an empty
// seed set and BoundsError on an id >= n.
CascadeOutcome simulate(const WeightedDigraph& g, std::span<const NodeId> seeds, Direction dir,
                        RngStream& rng);

// Same traversal with caller-supplied coins, e.g. a fixed realization keyed
// by edge id.
template <typename Coin>
CascadeOutcome simulate_with(const WeightedDigraph& g, std::span<const NodeId> seeds,
                             Direction dir, Coin&& coin);

struct McEstimate {
  double mean = 0.0;
  std::uint64_t steps_total = 0;
};

// Mean influenced-set size over `trials` independent forward cascades.
McEstimate estimate_influence_mc(const WeightedDigraph& g, std::span<const NodeId> seeds,
                                 std::uint64_t trials, RngStream& rng);

void validate_seeds(const WeightedDigraph& g, std::span<const NodeId> seeds);

template <typename Coin>
CascadeOutcome simulate_with(const WeightedDigraph& g, std::span<const NodeId> seeds,
                             Direction dir, Coin&& coin) {
  validate_seeds(g, seeds);
  CascadeWorkspace ws(g.n());
  CascadeOutcome out;
  out.steps = ws.run(g, seeds, dir, std::forward<Coin>(coin), out.influenced);
  std::sort(out.influenced.begin(), out.influenced.end());
  return out;
}

}  // namespace maxinf
