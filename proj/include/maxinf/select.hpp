#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maxinf/graph.hpp"
#include "maxinf/sketch.hpp"

namespace maxinf {

struct SeedSet {
  std::vector<NodeId> seeds;
  std::uint64_t covered_edges = 0;  // hyperedges meeting the seeds
  double estimate = 0.0;            // n * covered_edges / m(H)
  bool clamped = false;             // requested k exceeded n
};

// Vertices grouped by residual degree: a doubly linked list of nonempty
// groups in descending degree order, each group a doubly linked list of its
// vertices. Moving a vertex down one degree is O(1).
//
// Ties among the maximum-degree group are resolved to the smallest id. The
// top group can only shrink while it is on top (nothing has a larger degree
// to fall into it), so its members are sorted once when it reaches the top
// and scanned with a cursor.
class DegreeBuckets {
 public:
  explicit DegreeBuckets(std::span<const std::uint32_t> degrees);

  bool contains(NodeId v) const { return group_of_[v] != kNone; }
  std::uint32_t degree(NodeId v) const { return groups_[group_of_[v]].degree; }
  bool empty() const { return top_ == kNone; }
  std::uint32_t top_degree() const { return groups_[top_].degree; }

  // Smallest id among the vertices of maximum residual degree; nullopt when empty.
  std::optional<NodeId> peek_max();

  void decrement(NodeId v);
  void remove(NodeId v);

  // Elementary operations performed so far (list splices, elements sorted or scanned).
  std::uint64_t work() const { return work_; }

  // Full structural check; intended for tests.
  bool check_invariants(std::span<const std::uint32_t> expected_degrees) const;

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  struct Group {
    std::uint32_t degree;
    std::uint32_t head;
    std::uint32_t size;
    std::uint32_t higher;
    std::uint32_t lower;
  };

  std::uint32_t new_group(std::uint32_t degree, std::uint32_t higher, std::uint32_t lower);
  void unlink_vertex(NodeId v);
  void link_vertex(NodeId v, std::uint32_t g);

  std::vector<Group> groups_;
  std::vector<std::uint32_t> free_groups_;
  std::vector<std::uint32_t> group_of_;
  std::vector<NodeId> prev_;
  std::vector<NodeId> next_;
  std::uint32_t top_ = kNone;

  std::optional<std::uint32_t> phase_degree_;
  std::vector<NodeId> phase_order_;
  std::size_t phase_cursor_ = 0;

  std::uint64_t work_ = 0;
};

struct SelectStats {
  std::uint64_t work = 0;
};

// Step-by-step greedy max coverage over the first `prefix` hyperedges.
// `peek()` names the next pick; `commit(update)` takes it, kills its live
// hyperedges and, when `update` is set, lowers the residual degrees of their
// other members. A commit without update must be the last one. The
// incidence lists and buckets are only built once an update is requested,
// so a single pick costs O(n).
class GreedyCoverage {
 public:
  GreedyCoverage(const RRSketch& sk, std::size_t prefix);
  explicit GreedyCoverage(const RRSketch& sk) : GreedyCoverage(sk, sk.num_sets()) {}

  // nullopt once every vertex has been picked.
  std::optional<NodeId> peek();
  void commit(bool update = true);

  std::uint64_t covered() const { return covered_; }
  std::size_t picks() const { return picks_; }
  std::uint64_t work() const { return work_ + (buckets_ ? buckets_->work() : 0); }

 private:
  void build_structures();

  const RRSketch* sk_;
  std::size_t prefix_;
  std::vector<std::uint32_t> initial_degree_;
  std::optional<Incidence> inc_;
  std::optional<DegreeBuckets> buckets_;
  std::vector<char> alive_;
  std::optional<NodeId> pending_;
  std::uint64_t covered_ = 0;
  std::size_t picks_ = 0;
  bool finished_ = false;
  std::uint64_t work_ = 0;
};

// Greedy max coverage over the first `prefix` hyperedges (all by default):
// k rounds of picking the vertex of maximum residual degree (ties to the
// smallest id), then killing every live hyperedge containing it. Once all
// residual degrees are zero the remaining picks are the smallest unchosen
// ids. k > n is clamped. Throws DomainError for k < 1 and StateError for an
// empty sketch.
SeedSet build_seed_set(const RRSketch& sk, std::size_t k, SelectStats* stats = nullptr);
SeedSet build_seed_set(const RRSketch& sk, std::size_t k, std::size_t prefix,
                       SelectStats* stats = nullptr);

// Reference implementation of the same contract that recounts every
// residual degree each round.
SeedSet naive_greedy(const RRSketch& sk, std::size_t k);

}  // namespace maxinf
