#include "maxinf/cascade.hpp"

#include <string>

#include "maxinf/error.hpp"

namespace maxinf {

void validate_seeds(const WeightedDigraph& g, std::span<const NodeId> seeds) {
  if (seeds.empty()) throw DomainError("seed set must be nonempty");
  for (NodeId s : seeds) {
    if (s >= g.n()) {
      throw BoundsError("seed " + std::to_string(s) + " out of range for n=" + std::to_string(g.n()));
    }
  }
}

CascadeOutcome simulate(const WeightedDigraph& g, std::span<const NodeId> seeds, Direction dir,
                        RngStream& rng) {
  return simulate_with(g, seeds, dir, [&rng](const Arc& a) { return rng.coin(a.p); });
}

McEstimate estimate_influence_mc(const WeightedDigraph& g, std::span<const NodeId> seeds,
                                 std::uint64_t trials, RngStream& rng) {
  if (trials == 0) throw DomainError("num_trials must be at least 1");
  validate_seeds(g, seeds);
  CascadeWorkspace ws(g.n());
  std::vector<NodeId> influenced;
  McEstimate est;
  std::uint64_t total = 0;
  auto coin = [&rng](const Arc& a) { return rng.coin(a.p); };
  for (std::uint64_t t = 0; t < trials; ++t) {
    influenced.clear();
    est.steps_total += ws.run(g, seeds, Direction::kForward, coin, influenced);
    total += influenced.size();
  }
  est.mean = static_cast<double>(total) / static_cast<double>(trials);
  return est;
}

}  // namespace maxinf
