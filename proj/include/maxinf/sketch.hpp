#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "maxinf/cascade.hpp"
#include "maxinf/graph.hpp"
#include "maxinf/rng.hpp"

namespace maxinf {

using SetId = std::uint32_t;

struct StepBudget {
  std::uint64_t R;

  explicit StepBudget(std::uint64_t r);
};

// Per-vertex incidence lists over a prefix of a sketch's hyperedges, in CSR form.
struct Incidence {
  std::vector<std::uint64_t> offset;
  std::vector<SetId> sets;

  std::span<const SetId> of(NodeId v) const {
    return {sets.data() + offset[v], sets.data() + offset[v + 1]};
  }
};

// kDegreesOnly keeps the counts (m(H), degrees, steps) but drops the sets
// themselves, which is all the k = 1 decision rule needs. On sparse graphs
// m(H) approaches R, so this saves most of the memory.
enum class SketchMode { kFull, kDegreesOnly };

// The hypergraph H: a bag of RR-sets stored as sorted vertex arrays in one
// flat buffer, with per-vertex degrees and the step ledger of the build.
class RRSketch {
 public:
  RRSketch() = default;
  explicit RRSketch(std::size_t n, SketchMode mode = SketchMode::kFull)
      : n_(n), mode_(mode), degrees_(n, 0) {}

  // Builds a sketch from explicit vertex sets (sorted and deduplicated here).
  // Throws DomainError on an empty set and BoundsError on an id >= n.
  static RRSketch from_sets(std::size_t n, const std::vector<std::vector<NodeId>>& sets);

  std::size_t n() const noexcept { return n_; }
  std::size_t num_sets() const noexcept { return num_sets_; }
  bool empty() const noexcept { return num_sets_ == 0; }
  SketchMode mode() const noexcept { return mode_; }
  // Throws StateError for a degrees-only sketch.
  void require_sets() const;

  std::span<const NodeId> set(SetId i) const {
    return {members_.data() + offsets_[i], members_.data() + offsets_[i + 1]};
  }
  std::span<const NodeId> members() const noexcept { return members_; }
  std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> roots() const noexcept { return roots_; }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
  std::uint64_t total_incidence() const noexcept { return total_incidence_; }

  std::uint64_t steps_used() const noexcept { return steps_used_; }
  std::uint64_t budget() const noexcept { return budget_; }
  // Steps charged to the most recent RR-set (root draw included) and the largest such cost.
  std::uint64_t last_set_steps() const noexcept { return last_set_steps_; }
  std::uint64_t max_set_steps() const noexcept { return max_set_steps_; }

  void set_budget(std::uint64_t r) noexcept { budget_ = r; }
  // Used when loading a dump, which records only the step total.
  void set_steps_used(std::uint64_t steps) noexcept { steps_used_ = steps; }

  void reserve(std::uint64_t sets, std::uint64_t members);

  // Appends one hyperedge. `members` is sorted in place.
  void add_set(NodeId root, std::span<NodeId> members, std::uint64_t steps);

  // Appends all hyperedges of `other` (same n) after this sketch's own.
  void append(const RRSketch& other);

  // Incidence lists restricted to the first `prefix` hyperedges, each list ascending.
  Incidence incidence() const { return incidence(num_sets()); }
  Incidence incidence(std::size_t prefix) const;

 private:
  friend class HypergraphBuilder;

  // Seals members_[start, end) as a new hyperedge.
  void close_set(std::size_t start, NodeId root, std::uint64_t steps);

  std::size_t n_ = 0;
  SketchMode mode_ = SketchMode::kFull;
  std::size_t num_sets_ = 0;
  std::uint64_t total_incidence_ = 0;
  std::vector<NodeId> members_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<NodeId> roots_;
  std::vector<std::uint32_t> degrees_;
  std::uint64_t steps_used_ = 0;
  std::uint64_t budget_ = 0;
  std::uint64_t last_set_steps_ = 0;
  std::uint64_t max_set_steps_ = 0;
};

// Called with the exponent i whenever the cumulative step count first reaches
// 2^i; fires after the RR-set that crossed the threshold is complete.
using CheckpointFn = std::function<void(unsigned, const RRSketch&)>;
using StopFn = std::function<bool()>;

// Incremental BuildHypergraph: draws a uniform root (1 step), runs a
// transpose cascade from it (1 step per coin) and records the influenced
// set, repeatedly. The budget is checked only between RR-sets.
class HypergraphBuilder {
 public:
  HypergraphBuilder(const WeightedDigraph& g, RngStream rng, SketchMode mode = SketchMode::kFull);

  // Adds RR-sets until steps_used >= target or `stop` returns true. `stop` is
  // polled between RR-sets; at least one RR-set exists when this returns.
  void grow(std::uint64_t target, const CheckpointFn& checkpoint = {}, const StopFn& stop = {});

  // Preallocates for a run of about `steps` steps.
  void reserve_for(std::uint64_t steps);

  // Adds exactly one RR-set; returns its step cost.
  std::uint64_t add_one();

  const RRSketch& sketch() const noexcept { return sketch_; }
  RRSketch take() && { return std::move(sketch_); }

 private:
  const WeightedDigraph* g_;
  RngStream rng_;
  RRSketch sketch_;
  CascadeWorkspace ws_;
  unsigned next_checkpoint_ = 0;
};

RRSketch build_hypergraph(const WeightedDigraph& g, StepBudget budget, RngStream& rng,
                          const CheckpointFn& checkpoint = {}, SketchMode mode = SketchMode::kFull);

// Sharded construction over `workers` threads. Each worker draws from stream
// (kSketchWorker, (repetition << 16) | worker) and stops once a shared step
// counter reaches R; shards are concatenated in worker order. Reproducible
// only for workers == 1, which delegates to build_hypergraph with stream
// (kSketch, repetition).
RRSketch build_hypergraph_parallel(const WeightedDigraph& g, StepBudget budget,
                                   std::uint64_t seed, std::uint64_t repetition,
                                   unsigned workers, SketchMode mode = SketchMode::kFull);

// n * |{e in H : e ∩ S ≠ ∅}| / m(H). Throws StateError on an empty sketch.
double estimate_set_influence(const RRSketch& sk, std::span<const NodeId> S);

// Number of hyperedges meeting S (deg_H(S)). Needs a full sketch.
std::uint64_t coverage(const RRSketch& sk, std::span<const NodeId> S);

// Draws v with probability degree(v) / total incidence: a uniform slot in
// [0, total) located on the cumulative degrees in id order. Throws
// StateError on an empty sketch.
NodeId sample_degree_proportional(const RRSketch& sk, RngStream& rng);

// (argmax degree, degree); ties go to the smallest id. Throws StateError when n == 0.
std::pair<NodeId, std::uint32_t> max_degree(const RRSketch& sk);

// Text dump: `rrsketch n=<n> m=<m(H)> steps=<steps>` then one line per
// hyperedge with space-separated ascending ids.
void write_sketch(std::ostream& out, const RRSketch& sk);
RRSketch read_sketch(std::istream& in);

}  // namespace maxinf
