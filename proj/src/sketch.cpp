#include "maxinf/sketch.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <thread>

#include "maxinf/error.hpp"

namespace maxinf {

StepBudget::StepBudget(std::uint64_t r) : R(r) {
  if (r < 1) throw DomainError("step budget R must be at least 1");
}

RRSketch RRSketch::from_sets(std::size_t n, const std::vector<std::vector<NodeId>>& sets) {
  RRSketch sk(n);
  std::vector<NodeId> buf;
  for (const auto& s : sets) {
    if (s.empty()) throw DomainError("RR-sets must be nonempty");
    buf.assign(s.begin(), s.end());
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    if (buf.back() >= n) {
      throw BoundsError("RR-set member " + std::to_string(buf.back()) + " out of range for n=" +
                        std::to_string(n));
    }
    sk.add_set(s.front(), buf, 0);
  }
  return sk;
}

void RRSketch::require_sets() const {
  if (mode_ != SketchMode::kFull) throw StateError("sketch was built without its hyperedges");
}

void RRSketch::reserve(std::uint64_t sets, std::uint64_t members) {
  members_.reserve(members);
  offsets_.reserve(sets + 1);
  roots_.reserve(sets);
}

void RRSketch::add_set(NodeId root, std::span<NodeId> members, std::uint64_t steps) {
  const std::size_t start = members_.size();
  members_.insert(members_.end(), members.begin(), members.end());
  close_set(start, root, steps);
}

void RRSketch::close_set(std::size_t start, NodeId root, std::uint64_t steps) {
  for (std::size_t i = start; i < members_.size(); ++i) ++degrees_[members_[i]];
  total_incidence_ += members_.size() - start;
  ++num_sets_;
  if (mode_ == SketchMode::kFull) {
    if (members_.size() - start > 1) std::sort(members_.begin() + start, members_.end());
    offsets_.push_back(members_.size());
    roots_.push_back(root);
  } else {
    members_.resize(start);
  }
  steps_used_ += steps;
  last_set_steps_ = steps;
  max_set_steps_ = std::max(max_set_steps_, steps);
}

void RRSketch::append(const RRSketch& other) {
  if (other.n_ != n_) throw DomainError("cannot merge sketches over different node counts");
  if (other.mode_ != mode_) throw DomainError("cannot merge sketches of different modes");
  if (mode_ == SketchMode::kFull) {
    std::uint64_t base = members_.size();
    members_.insert(members_.end(), other.members_.begin(), other.members_.end());
    for (std::size_t i = 1; i < other.offsets_.size(); ++i) offsets_.push_back(base + other.offsets_[i]);
    roots_.insert(roots_.end(), other.roots_.begin(), other.roots_.end());
  }
  num_sets_ += other.num_sets_;
  total_incidence_ += other.total_incidence_;
  for (std::size_t v = 0; v < n_; ++v) degrees_[v] += other.degrees_[v];
  steps_used_ += other.steps_used_;
  if (!other.empty()) last_set_steps_ = other.last_set_steps_;
  max_set_steps_ = std::max(max_set_steps_, other.max_set_steps_);
}

Incidence RRSketch::incidence(std::size_t prefix) const {
  require_sets();
  prefix = std::min(prefix, num_sets());
  Incidence inc;
  inc.offset.assign(n_ + 1, 0);
  const std::uint64_t end = offsets_[prefix];
  for (std::uint64_t i = 0; i < end; ++i) ++inc.offset[members_[i] + 1];
  for (std::size_t v = 0; v < n_; ++v) inc.offset[v + 1] += inc.offset[v];
  inc.sets.resize(end);
  std::vector<std::uint64_t> fill(inc.offset.begin(), inc.offset.end() - 1);
  for (SetId e = 0; e < prefix; ++e) {
    for (NodeId v : set(e)) inc.sets[fill[v]++] = e;
  }
  return inc;
}

HypergraphBuilder::HypergraphBuilder(const WeightedDigraph& g, RngStream rng, SketchMode mode)
    : g_(&g), rng_(std::move(rng)), sketch_(g.n(), mode), ws_(g.n()) {
  if (g.n() == 0) throw DomainError("cannot sketch a graph with no nodes");
}

void HypergraphBuilder::reserve_for(std::uint64_t steps) {
  // Every RR-set costs at least one step and holds at most one member per
  // step, so `steps` bounds both counts. Untouched capacity is never paged in.
  constexpr std::uint64_t kCap = std::uint64_t{1} << 28;
  const std::uint64_t bound = std::min(steps + 1, kCap);
  if (sketch_.mode() == SketchMode::kFull) sketch_.reserve(bound, bound);
}

std::uint64_t HypergraphBuilder::add_one() {
  NodeId root = static_cast<NodeId>(rng_.below(g_->n()));
  const std::size_t start = sketch_.members_.size();
  std::uint64_t steps =
      1 + ws_.run_from(*g_, root, Direction::kTranspose,
                       [this](const Arc& a) { return rng_.coin(a.p); }, sketch_.members_);
  sketch_.close_set(start, root, steps);
  return steps;
}

void HypergraphBuilder::grow(std::uint64_t target, const CheckpointFn& checkpoint,
                             const StopFn& stop) {
  while (sketch_.empty() || (sketch_.steps_used() < target && !(stop && stop()))) {
    add_one();
    while (next_checkpoint_ < 64 && sketch_.steps_used() >= (std::uint64_t{1} << next_checkpoint_)) {
      if (checkpoint) checkpoint(next_checkpoint_, sketch_);
      ++next_checkpoint_;
    }
  }
}

RRSketch build_hypergraph(const WeightedDigraph& g, StepBudget budget, RngStream& rng,
                          const CheckpointFn& checkpoint, SketchMode mode) {
  HypergraphBuilder b(g, rng, mode);
  b.reserve_for(budget.R);
  b.grow(budget.R, checkpoint);
  RRSketch sk = std::move(b).take();
  sk.set_budget(budget.R);
  return sk;
}

RRSketch build_hypergraph_parallel(const WeightedDigraph& g, StepBudget budget,
                                   std::uint64_t seed, std::uint64_t repetition,
                                   unsigned workers, SketchMode mode) {
  if (workers <= 1) {
    RngStream rng(seed, stream_id(StreamPurpose::kSketch, repetition));
    return build_hypergraph(g, budget, rng, {}, mode);
  }
  if (g.n() == 0) throw DomainError("cannot sketch a graph with no nodes");
  std::atomic<std::uint64_t> shared{0};
  std::vector<RRSketch> shards(workers, RRSketch(g.n(), mode));
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        HypergraphBuilder b(
            g, RngStream(seed, stream_id(StreamPurpose::kSketchWorker, (repetition << 16) | w)), mode);
        while (shared.load(std::memory_order_relaxed) < budget.R) {
          shared.fetch_add(b.add_one(), std::memory_order_relaxed);
        }
        shards[w] = std::move(b).take();
      });
    }
  }
  RRSketch sk(g.n(), mode);
  for (const RRSketch& s : shards) sk.append(s);
  if (sk.empty()) {
    HypergraphBuilder b(g, RngStream(seed, stream_id(StreamPurpose::kSketchWorker, repetition << 16)), mode);
    b.add_one();
    sk.append(b.sketch());
  }
  sk.set_budget(budget.R);
  return sk;
}

std::uint64_t coverage(const RRSketch& sk, std::span<const NodeId> S) {
  sk.require_sets();
  std::vector<char> in_s(sk.n(), 0);
  for (NodeId v : S) {
    if (v >= sk.n()) throw BoundsError("node " + std::to_string(v) + " out of range");
    in_s[v] = 1;
  }
  std::uint64_t touched = 0;
  for (SetId e = 0; e < sk.num_sets(); ++e) {
    for (NodeId v : sk.set(e)) {
      if (in_s[v]) {
        ++touched;
        break;
      }
    }
  }
  return touched;
}

double estimate_set_influence(const RRSketch& sk, std::span<const NodeId> S) {
  if (sk.empty()) throw StateError("influence estimate requested from an empty sketch");
  return static_cast<double>(sk.n()) * static_cast<double>(coverage(sk, S)) /
         static_cast<double>(sk.num_sets());
}

NodeId sample_degree_proportional(const RRSketch& sk, RngStream& rng) {
  if (sk.total_incidence() == 0) throw StateError("degree-proportional draw from an empty sketch");
  std::uint64_t slot = rng.below(sk.total_incidence());
  auto deg = sk.degrees();
  for (NodeId v = 0;; ++v) {
    if (slot < deg[v]) return v;
    slot -= deg[v];
  }
}

std::pair<NodeId, std::uint32_t> max_degree(const RRSketch& sk) {
  if (sk.n() == 0) throw StateError("max_degree on a sketch with no nodes");
  auto deg = sk.degrees();
  auto it = std::max_element(deg.begin(), deg.end());  // first maximum = smallest id
  return {static_cast<NodeId>(it - deg.begin()), *it};
}

void write_sketch(std::ostream& out, const RRSketch& sk) {
  sk.require_sets();
  out << "rrsketch n=" << sk.n() << " m=" << sk.num_sets() << " steps=" << sk.steps_used() << '\n';
  for (SetId e = 0; e < sk.num_sets(); ++e) {
    const char* sep = "";
    for (NodeId v : sk.set(e)) {
      out << sep << v;
      sep = " ";
    }
    out << '\n';
  }
}

namespace {

std::uint64_t header_field(std::string_view header, std::string_view key) {
  auto pos = header.find(key);
  if (pos == std::string_view::npos) throw ParseError("sketch header lacks " + std::string(key), 1);
  std::string_view rest = header.substr(pos + key.size());
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr == rest.data()) {
    throw ParseError("malformed sketch header field " + std::string(key), 1);
  }
  return value;
}

}  // namespace

RRSketch read_sketch(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("rrsketch ")) {
    throw ParseError("missing `rrsketch` header", 1);
  }
  const std::size_t n = header_field(line, " n=");
  const std::uint64_t m = header_field(line, " m=");
  const std::uint64_t steps = header_field(line, " steps=");
  RRSketch sk(n);
  std::vector<NodeId> buf;
  std::size_t lineno = 1;
  while (sk.num_sets() < m && std::getline(in, line)) {
    ++lineno;
    buf.clear();
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      if (*p == ' ') {
        ++p;
        continue;
      }
      NodeId v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw ParseError("malformed node id", lineno);
      if (v >= n) throw BoundsError("line " + std::to_string(lineno) + ": node id out of range");
      buf.push_back(v);
      p = next;
    }
    if (buf.empty()) throw ParseError("empty hyperedge", lineno);
    sk.add_set(buf.front(), buf, 0);
  }
  if (sk.num_sets() != m) throw ParseError("sketch truncated: expected " + std::to_string(m) + " hyperedges");
  sk.set_steps_used(steps);
  return sk;
}

}  // namespace maxinf
