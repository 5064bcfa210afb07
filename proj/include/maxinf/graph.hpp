#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace maxinf {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  NodeId source;
  NodeId target;
  double p;

  bool operator==(const Edge&) const = default;
};

// One adjacency record. `node` is the other endpoint: the target in the
// forward lists, the source in the transpose lists. `edge` indexes the
// graph's edge list in input order, so both views share edge identity.
struct Arc {
  NodeId node;
  EdgeId edge;
  double p;
};

enum class Direction { kForward, kTranspose };

// Immutable weighted digraph in CSR form with both the forward and the
// transpose adjacency materialized. Parallel edges and self-loops are kept;
// each edge record is an independent coin under the cascade model.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;

  // Throws DomainError for p outside [0,1] or an endpoint >= n.
  WeightedDigraph(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }

  // Unchecked views, stored in input order.
  std::span<const Arc> out_arcs(NodeId v) const noexcept {
    return {out_.data() + out_offset_[v], out_.data() + out_offset_[v + 1]};
  }
  std::span<const Arc> in_arcs(NodeId v) const noexcept {
    return {in_.data() + in_offset_[v], in_.data() + in_offset_[v + 1]};
  }
  std::span<const Arc> arcs(NodeId v, Direction dir) const noexcept {
    return dir == Direction::kForward ? out_arcs(v) : in_arcs(v);
  }

  // Bounds-checked in-neighbour list of v; throws BoundsError when v >= n.
  std::span<const Arc> transpose_neighbors(NodeId v) const;

  std::size_t out_degree(NodeId v) const noexcept { return out_offset_[v + 1] - out_offset_[v]; }
  std::size_t in_degree(NodeId v) const noexcept { return in_offset_[v + 1] - in_offset_[v]; }

  // The graph with every edge reversed, keeping edge order.
  WeightedDigraph transposed() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offset_{0};
  std::vector<std::size_t> in_offset_{0};
  std::vector<Arc> out_;
  std::vector<Arc> in_;
};

// Edge-list text format: `u<TAB>v<TAB>p` per line, optional leading
// `nodes<TAB>N` header, `#` comment lines. Throws ParseError (with line
// number) or DomainError.
WeightedDigraph load_edge_list(std::istream& in);
WeightedDigraph load_edge_list(const std::filesystem::path& path);

// Writes the header line followed by every edge in stored order. Probabilities
// use the shortest representation that parses back to the same double.
void write_edge_list(std::ostream& out, const WeightedDigraph& g);

}  // namespace maxinf
