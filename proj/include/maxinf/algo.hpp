#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "maxinf/graph.hpp"
#include "maxinf/select.hpp"
#include "maxinf/sketch.hpp"

namespace maxinf {

// C = 48 * 6^3 in the sublinear variant.
inline constexpr std::uint64_t kSublinearC = 48 * 6 * 6 * 6;

struct MaximizeParams {
  double epsilon = 0.2;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;  // independent sketches; the one with most hyperedges wins
  std::uint64_t ell_boost = 1;  // multiplies R
  unsigned workers = 1;
};

struct SublinearParams {
  double beta = 1.0;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

enum class Branch { kGreedy, kDegreeSample, kUnion };

std::string_view branch_name(Branch b);

struct SketchStats {
  std::uint64_t m_H = 0;
  std::uint64_t steps_used = 0;
  std::uint64_t last_set_steps = 0;
};

struct MaximizeResult {
  SeedSet seeds;
  Branch branch = Branch::kGreedy;
  std::uint64_t budget_R = 0;
  std::uint64_t m_H = 0;          // hyperedges in the sketch the seeds came from
  std::uint64_t steps = 0;        // simulation steps summed over all sketches built
  std::uint32_t max_degree = 0;   // max vertex degree in that sketch
  bool trivial = false;           // n < 2 or k >= n: every node returned, no sketch built
  std::vector<SketchStats> sketches;
};

// R = ceil(ell * 144 (m+n) eps^-3 ln n).
std::uint64_t greedy_budget(std::size_t n, std::size_t m, double epsilon, std::uint64_t ell = 1);
// R = ceil(beta * 144 C (n+m) ln n).
std::uint64_t sublinear_budget(std::size_t n, std::size_t m, double beta);
// Sketch degree a vertex must exceed for the k = 1 rule to trust the greedy pick: 2 C ln n.
double sublinear_degree_threshold(std::size_t n);

// Quasilinear (1 - 1/e - eps) approximation: build `repetitions` sketches of
// budget R from streams (kSketch, rep), keep the one with the most
// hyperedges and run greedy max coverage on it.
MaximizeResult maximize(const WeightedDigraph& g, const MaximizeParams& params);

// Budget-beta variant. Builds one sketch from stream (kSketch, 0) and draws a
// degree-proportional vertex v from stream (kDegreeSample, 0). For k > 1 the
// result is the greedy (k-1)-set plus v, topped up with the next greedy pick
// when v is already present. For k = 1 the greedy pick is returned when the
// maximum sketch degree exceeds 2 C ln n, otherwise v.
MaximizeResult maximize_sublinear(const WeightedDigraph& g, const SublinearParams& params);

// The decision rule above applied to an existing sketch.
MaximizeResult sublinear_decision(const RRSketch& sk, std::size_t k, RngStream& rng);

struct AnytimeOptions {
  std::function<bool()> stop;                // polled between RR-sets
  std::optional<std::uint64_t> step_limit;   // stop once this many steps were taken
};

struct SnapshotRecord {
  unsigned index = 0;
  std::uint64_t steps = 0;
  std::uint64_t m_H = 0;
};

struct AnytimeSolution {
  MaximizeResult result;
  std::uint64_t steps_at_snapshot = 0;
  unsigned snapshot_index = 0;
  bool complete = false;                // the beta = 1 budget was exhausted
  std::uint64_t steps_total = 0;        // steps taken when the run ended
  std::vector<SnapshotRecord> history;  // every checkpoint, in order
};

// Sublinear variant with beta = 1, pausing whenever the step count first
// reaches 2^i to compute and store a full solution from the current sketch.
// On stop the latest stored solution is returned; when the budget runs out
// the result equals maximize_sublinear with beta = 1 and the same seed.
AnytimeSolution maximize_anytime(const WeightedDigraph& g, std::size_t k, std::uint64_t seed,
                                 const AnytimeOptions& options = {});

}  // namespace maxinf
