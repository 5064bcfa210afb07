#include "maxinf/select.hpp"

#include <algorithm>

#include "maxinf/error.hpp"

namespace maxinf {

DegreeBuckets::DegreeBuckets(std::span<const std::uint32_t> degrees)
    : group_of_(degrees.size(), kNone), prev_(degrees.size(), kNone), next_(degrees.size(), kNone) {
  if (degrees.empty()) return;
  // Counting sort by degree.
  const std::uint32_t max_deg = *std::max_element(degrees.begin(), degrees.end());
  std::vector<std::uint32_t> bucket_head(static_cast<std::size_t>(max_deg) + 1, kNone);
  for (std::size_t i = degrees.size(); i-- > 0;) {
    NodeId v = static_cast<NodeId>(i);
    next_[v] = bucket_head[degrees[v]];
    bucket_head[degrees[v]] = v;
  }
  work_ += degrees.size() + bucket_head.size();
  std::uint32_t last = kNone;
  for (std::size_t d = bucket_head.size(); d-- > 0;) {
    if (bucket_head[d] == kNone) continue;
    std::uint32_t g = new_group(static_cast<std::uint32_t>(d), last, kNone);
    if (last == kNone) {
      top_ = g;
    } else {
      groups_[last].lower = g;
    }
    groups_[g].head = bucket_head[d];
    for (NodeId v = bucket_head[d], p = kNone; v != kNone; p = v, v = next_[v]) {
      prev_[v] = p;
      group_of_[v] = g;
      ++groups_[g].size;
    }
    last = g;
  }
}

std::uint32_t DegreeBuckets::new_group(std::uint32_t degree, std::uint32_t higher,
                                       std::uint32_t lower) {
  Group grp{degree, kNone, 0, higher, lower};
  if (!free_groups_.empty()) {
    std::uint32_t g = free_groups_.back();
    free_groups_.pop_back();
    groups_[g] = grp;
    return g;
  }
  groups_.push_back(grp);
  return static_cast<std::uint32_t>(groups_.size() - 1);
}

void DegreeBuckets::unlink_vertex(NodeId v) {
  std::uint32_t g = group_of_[v];
  Group& grp = groups_[g];
  if (prev_[v] != kNone) {
    next_[prev_[v]] = next_[v];
  } else {
    grp.head = next_[v];
  }
  if (next_[v] != kNone) prev_[next_[v]] = prev_[v];
  prev_[v] = next_[v] = kNone;
  group_of_[v] = kNone;
  ++work_;
  if (--grp.size == 0) {
    if (grp.higher != kNone) {
      groups_[grp.higher].lower = grp.lower;
    } else {
      top_ = grp.lower;
    }
    if (grp.lower != kNone) groups_[grp.lower].higher = grp.higher;
    free_groups_.push_back(g);
  }
}

void DegreeBuckets::link_vertex(NodeId v, std::uint32_t g) {
  Group& grp = groups_[g];
  prev_[v] = kNone;
  next_[v] = grp.head;
  if (grp.head != kNone) prev_[grp.head] = v;
  grp.head = v;
  ++grp.size;
  group_of_[v] = g;
  ++work_;
}

void DegreeBuckets::decrement(NodeId v) {
  std::uint32_t g = group_of_[v];
  const std::uint32_t d = groups_[g].degree;
  if (d == 0) throw StateError("residual degree would become negative");
  std::uint32_t lower = groups_[g].lower;
  std::uint32_t target;
  if (lower != kNone && groups_[lower].degree == d - 1) {
    target = lower;
  } else {
    target = new_group(d - 1, g, lower);
    groups_[g].lower = target;
    if (lower != kNone) groups_[lower].higher = target;
  }
  unlink_vertex(v);
  link_vertex(v, target);
}

void DegreeBuckets::remove(NodeId v) { unlink_vertex(v); }

std::optional<NodeId> DegreeBuckets::peek_max() {
  if (top_ == kNone) return std::nullopt;
  const Group& top = groups_[top_];
  if (phase_degree_ != top.degree) {
    phase_degree_ = top.degree;
    phase_order_.clear();
    for (NodeId v = top.head; v != kNone; v = next_[v]) phase_order_.push_back(v);
    std::sort(phase_order_.begin(), phase_order_.end());
    phase_cursor_ = 0;
    work_ += phase_order_.size();
  }
  while (phase_cursor_ < phase_order_.size()) {
    NodeId v = phase_order_[phase_cursor_];
    if (group_of_[v] == top_) return v;
    ++phase_cursor_;
    ++work_;
  }
  throw StateError("degree buckets: top group exhausted while nonempty");
}

bool DegreeBuckets::check_invariants(std::span<const std::uint32_t> expected_degrees) const {
  std::vector<char> seen(group_of_.size(), 0);
  std::uint32_t prev_group = kNone;
  std::size_t count = 0;
  for (std::uint32_t g = top_; g != kNone; prev_group = g, g = groups_[g].lower) {
    const Group& grp = groups_[g];
    if (grp.higher != prev_group || grp.size == 0) return false;
    if (prev_group != kNone && groups_[prev_group].degree <= grp.degree) return false;
    std::uint32_t walked = 0;
    for (NodeId v = grp.head, p = kNone; v != kNone; p = v, v = next_[v]) {
      if (group_of_[v] != g || prev_[v] != p || seen[v]) return false;
      if (v < expected_degrees.size() && expected_degrees[v] != grp.degree) return false;
      seen[v] = 1;
      ++walked;
    }
    if (walked != grp.size) return false;
    count += walked;
  }
  for (std::size_t v = 0; v < group_of_.size(); ++v) {
    if ((group_of_[v] != kNone) != static_cast<bool>(seen[v])) return false;
  }
  return true;
}

namespace {

std::size_t checked_k(const RRSketch& sk, std::size_t k, bool& clamped) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (sk.empty()) throw StateError("seed selection on an empty sketch");
  clamped = k > sk.n();
  return std::min(k, sk.n());
}

SeedSet finish(const RRSketch& sk, SeedSet out, std::size_t m) {
  out.estimate = static_cast<double>(sk.n()) * static_cast<double>(out.covered_edges) /
                 static_cast<double>(m);
  return out;
}

}  // namespace

SeedSet build_seed_set(const RRSketch& sk, std::size_t k, SelectStats* stats) {
  return build_seed_set(sk, k, sk.num_sets(), stats);
}

GreedyCoverage::GreedyCoverage(const RRSketch& sk, std::size_t prefix)
    : sk_(&sk), prefix_(std::min(prefix, sk.num_sets())) {
  if (prefix_ == sk.num_sets()) {
    initial_degree_.assign(sk.degrees().begin(), sk.degrees().end());
  } else {
    initial_degree_.assign(sk.n(), 0);
    for (std::uint64_t i = 0; i < sk.offsets()[prefix_]; ++i) ++initial_degree_[sk.members()[i]];
    work_ += sk.offsets()[prefix_];
  }
  work_ += sk.n();
}

void GreedyCoverage::build_structures() {
  inc_ = sk_->incidence(prefix_);
  buckets_.emplace(initial_degree_);
  alive_.assign(prefix_, 1);
  work_ += inc_->sets.size() + sk_->n();
}

std::optional<NodeId> GreedyCoverage::peek() {
  if (pending_) return pending_;
  if (finished_ || picks_ >= sk_->n()) return std::nullopt;
  if (buckets_) {
    pending_ = buckets_->peek_max();
  } else {
    auto it = std::max_element(initial_degree_.begin(), initial_degree_.end());
    pending_ = static_cast<NodeId>(it - initial_degree_.begin());
  }
  return pending_;
}

void GreedyCoverage::commit(bool update) {
  if (!peek()) throw StateError("no vertex left to pick");
  const NodeId v = *pending_;
  pending_.reset();
  ++picks_;
  if (!update) finished_ = true;
  if (!buckets_) {
    if (!update) {
      // First and final pick: every hyperedge is alive and holds v at most once.
      covered_ += initial_degree_[v];
      return;
    }
    build_structures();
  }
  buckets_->remove(v);
  for (SetId e : inc_->of(v)) {
    ++work_;
    if (!alive_[e]) continue;
    alive_[e] = 0;
    ++covered_;
    if (!update) continue;
    for (NodeId u : sk_->set(e)) {
      ++work_;
      if (u != v) buckets_->decrement(u);
    }
  }
}

SeedSet build_seed_set(const RRSketch& sk, std::size_t k, std::size_t prefix, SelectStats* stats) {
  SeedSet out;
  k = checked_k(sk, k, out.clamped);
  prefix = std::min(prefix, sk.num_sets());
  if (prefix == 0) throw StateError("seed selection on an empty sketch prefix");

  GreedyCoverage greedy(sk, prefix);
  out.seeds.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.seeds.push_back(*greedy.peek());
    greedy.commit(i + 1 < k);
  }
  out.covered_edges = greedy.covered();
  if (stats) stats->work = greedy.work();
  return finish(sk, std::move(out), prefix);
}

SeedSet naive_greedy(const RRSketch& sk, std::size_t k) {
  SeedSet out;
  k = checked_k(sk, k, out.clamped);
  const Incidence inc = sk.incidence();
  std::vector<char> alive(sk.num_sets(), 1);
  std::vector<char> chosen(sk.n(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    NodeId best = 0;
    std::int64_t best_deg = -1;
    for (NodeId v = 0; v < sk.n(); ++v) {
      if (chosen[v]) continue;
      std::int64_t d = 0;
      for (SetId e : inc.of(v)) d += alive[e];
      if (d > best_deg) {
        best_deg = d;
        best = v;
      }
    }
    chosen[best] = 1;
    out.seeds.push_back(best);
    for (SetId e : inc.of(best)) {
      if (alive[e]) {
        alive[e] = 0;
        ++out.covered_edges;
      }
    }
  }
  return finish(sk, std::move(out), sk.num_sets());
}

}  // namespace maxinf
