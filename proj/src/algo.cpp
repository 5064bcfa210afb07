#include "maxinf/algo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxinf/error.hpp"

namespace maxinf {

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::kGreedy:
      return "greedy";
    case Branch::kDegreeSample:
      return "degree-sample";
    case Branch::kUnion:
      return "union";
  }
  return "greedy";
}

namespace {

std::uint64_t to_budget(double r) {
  if (!(r < 1.8e19)) throw DomainError("step budget overflows 64 bits");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(r)));
}

MaximizeResult trivial_result(const WeightedDigraph& g, std::size_t k) {
  MaximizeResult r;
  r.trivial = true;
  r.seeds.clamped = k > g.n();
  for (NodeId v = 0; v < g.n(); ++v) r.seeds.seeds.push_back(v);
  r.seeds.estimate = static_cast<double>(g.n());
  return r;
}

}  // namespace

std::uint64_t greedy_budget(std::size_t n, std::size_t m, double epsilon, std::uint64_t ell) {
  const double nm = static_cast<double>(n) + static_cast<double>(m);
  return to_budget(static_cast<double>(ell) * 144.0 * nm / (epsilon * epsilon * epsilon) *
                   std::log(static_cast<double>(n)));
}

std::uint64_t sublinear_budget(std::size_t n, std::size_t m, double beta) {
  const double nm = static_cast<double>(n) + static_cast<double>(m);
  return to_budget(beta * 144.0 * static_cast<double>(kSublinearC) * nm *
                   std::log(static_cast<double>(n)));
}

double sublinear_degree_threshold(std::size_t n) {
  return 2.0 * static_cast<double>(kSublinearC) * std::log(static_cast<double>(n));
}

MaximizeResult maximize(const WeightedDigraph& g, const MaximizeParams& params) {
  if (!(params.epsilon > 0.0 && params.epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (params.k < 1) throw DomainError("k must be at least 1");
  if (params.repetitions < 1) throw DomainError("repetitions must be at least 1");
  if (params.ell_boost < 1) throw DomainError("ell must be at least 1");
  if (g.n() < 2 || params.k >= g.n()) return trivial_result(g, params.k);

  MaximizeResult r;
  r.budget_R = greedy_budget(g.n(), g.m(), params.epsilon, params.ell_boost);
  std::optional<RRSketch> best;
  for (std::size_t rep = 0; rep < params.repetitions; ++rep) {
    RRSketch sk = build_hypergraph_parallel(g, StepBudget(r.budget_R), params.seed, rep, params.workers);
    r.steps += sk.steps_used();
    r.sketches.push_back({sk.num_sets(), sk.steps_used(), sk.last_set_steps()});
    if (!best || sk.num_sets() > best->num_sets()) best = std::move(sk);
  }
  r.seeds = build_seed_set(*best, params.k);
  r.m_H = best->num_sets();
  r.max_degree = max_degree(*best).second;
  return r;
}

MaximizeResult sublinear_decision(const RRSketch& sk, std::size_t k, RngStream& rng) {
  if (k < 1) throw DomainError("k must be at least 1");
  MaximizeResult r;
  r.m_H = sk.num_sets();
  r.steps = sk.steps_used();
  r.budget_R = sk.budget();
  r.max_degree = max_degree(sk).second;
  const NodeId v = sample_degree_proportional(sk, rng);
  if (k == 1) {
    // A single greedy pick is the max-degree vertex, so no sets are needed.
    const bool trust = static_cast<double>(r.max_degree) > sublinear_degree_threshold(sk.n());
    const NodeId pick = trust ? max_degree(sk).first : v;
    r.seeds.seeds = {pick};
    r.seeds.covered_edges = sk.degrees()[pick];
    r.seeds.estimate = static_cast<double>(sk.n()) * static_cast<double>(r.seeds.covered_edges) /
                       static_cast<double>(sk.num_sets());
    r.branch = trust ? Branch::kGreedy : Branch::kDegreeSample;
    return r;
  }
  // Greedy picks k-1 vertices; one more only when v is among them.
  GreedyCoverage greedy(sk);
  std::vector<NodeId> seeds;
  bool v_taken = false;
  for (std::size_t i = 0; i + 1 < k && i < sk.n(); ++i) {
    NodeId u = *greedy.peek();
    seeds.push_back(u);
    v_taken = v_taken || u == v;
    const bool last = i + 2 == k || i + 1 == sk.n();
    greedy.commit(!last || v_taken);
  }
  if (!v_taken) {
    seeds.push_back(v);
  } else if (auto u = greedy.peek()) {
    seeds.push_back(*u);
    greedy.commit(false);
  }
  r.seeds.seeds = std::move(seeds);
  r.seeds.clamped = k > sk.n();
  r.seeds.covered_edges = coverage(sk, r.seeds.seeds);
  r.seeds.estimate = static_cast<double>(sk.n()) * static_cast<double>(r.seeds.covered_edges) /
                     static_cast<double>(sk.num_sets());
  r.branch = Branch::kUnion;
  return r;
}

MaximizeResult maximize_sublinear(const WeightedDigraph& g, const SublinearParams& params) {
  if (!(params.beta > 0.0 && params.beta <= 1.0)) throw DomainError("beta must lie in (0,1]");
  if (params.k < 1) throw DomainError("k must be at least 1");
  if (g.n() < 2 || params.k >= g.n()) return trivial_result(g, params.k);

  const std::uint64_t R = sublinear_budget(g.n(), g.m(), params.beta);
  const SketchMode mode = params.k == 1 ? SketchMode::kDegreesOnly : SketchMode::kFull;
  RRSketch sk = build_hypergraph_parallel(g, StepBudget(R), params.seed, 0, params.workers, mode);
  RngStream rng(params.seed, stream_id(StreamPurpose::kDegreeSample, 0));
  MaximizeResult r = sublinear_decision(sk, params.k, rng);
  r.sketches.push_back({sk.num_sets(), sk.steps_used(), sk.last_set_steps()});
  return r;
}

AnytimeSolution maximize_anytime(const WeightedDigraph& g, std::size_t k, std::uint64_t seed,
                                 const AnytimeOptions& options) {
  if (k < 1) throw DomainError("k must be at least 1");
  AnytimeSolution out;
  if (g.n() < 2 || k >= g.n()) {
    out.result = trivial_result(g, k);
    out.complete = true;
    return out;
  }
  const std::uint64_t R = sublinear_budget(g.n(), g.m(), 1.0);
  HypergraphBuilder builder(g, RngStream(seed, stream_id(StreamPurpose::kSketch, 0)),
                            k == 1 ? SketchMode::kDegreesOnly : SketchMode::kFull);
  bool have_snapshot = false;

  auto checkpoint = [&](unsigned i, const RRSketch& sk) {
    RngStream rng(seed, stream_id(StreamPurpose::kDegreeSample, std::uint64_t{i} + 1));
    out.result = sublinear_decision(sk, k, rng);
    out.result.budget_R = R;
    out.steps_at_snapshot = sk.steps_used();
    out.snapshot_index = i;
    out.history.push_back({i, sk.steps_used(), sk.num_sets()});
    have_snapshot = true;
  };
  auto stop = [&] {
    if (options.step_limit && builder.sketch().steps_used() >= *options.step_limit) return true;
    return options.stop && options.stop();
  };
  builder.grow(R, checkpoint, stop);

  const RRSketch& sk = builder.sketch();
  out.steps_total = sk.steps_used();
  if (sk.steps_used() >= R) {
    RngStream rng(seed, stream_id(StreamPurpose::kDegreeSample, 0));
    out.result = sublinear_decision(sk, k, rng);
    out.result.budget_R = R;
    out.steps_at_snapshot = sk.steps_used();
    out.complete = true;
  } else if (!have_snapshot) {
    checkpoint(0, sk);
  }
  out.result.sketches = {{sk.num_sets(), sk.steps_used(), sk.last_set_steps()}};
  return out;
}

}  // namespace maxinf
