#include "maxinf/graph.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "maxinf/error.hpp"

namespace maxinf {

WeightedDigraph::WeightedDigraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (edges_.size() > std::numeric_limits<EdgeId>::max()) {
    throw DomainError("edge count exceeds EdgeId range");
  }
  out_offset_.assign(n_ + 1, 0);
  in_offset_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    if (e.source >= n_ || e.target >= n_) {
      throw DomainError("edge (" + std::to_string(e.source) + "," + std::to_string(e.target) +
                        ") references a node outside [0," + std::to_string(n_) + ")");
    }
    if (!(e.p >= 0.0 && e.p <= 1.0)) {
      throw DomainError("edge probability " + std::to_string(e.p) + " outside [0,1]");
    }
    ++out_offset_[e.source + 1];
    ++in_offset_[e.target + 1];
  }
  for (std::size_t v = 0; v < n_; ++v) {
    out_offset_[v + 1] += out_offset_[v];
    in_offset_[v + 1] += in_offset_[v];
  }
  out_.resize(edges_.size());
  in_.resize(edges_.size());
  std::vector<std::size_t> out_fill(out_offset_.begin(), out_offset_.end() - 1);
  std::vector<std::size_t> in_fill(in_offset_.begin(), in_offset_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    out_[out_fill[e.source]++] = Arc{e.target, id, e.p};
    in_[in_fill[e.target]++] = Arc{e.source, id, e.p};
  }
}

std::span<const Arc> WeightedDigraph::transpose_neighbors(NodeId v) const {
  if (v >= n_) {
    throw BoundsError("node " + std::to_string(v) + " out of range for n=" + std::to_string(n_));
  }
  return in_arcs(v);
}

WeightedDigraph WeightedDigraph::transposed() const {
  std::vector<Edge> rev;
  rev.reserve(edges_.size());
  for (const Edge& e : edges_) rev.push_back(Edge{e.target, e.source, e.p});
  return WeightedDigraph(n_, std::move(rev));
}

namespace {

template <typename T>
bool parse_field(std::string_view field, T& value) {
  if (field.empty()) return false;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size();
}

// Splits on single TABs; returns false if the field count differs.
bool split_tabs(std::string_view line, std::span<std::string_view> fields) {
  std::size_t i = 0;
  while (true) {
    auto tab = line.find('\t');
    if (i == fields.size()) return false;
    fields[i++] = line.substr(0, tab);
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return i == fields.size();
}

}  // namespace

WeightedDigraph load_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t declared_n = 0;
  bool have_header = false;
  bool seen_record = false;
  std::size_t n = 0;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    if (line.starts_with("nodes\t")) {
      if (have_header || seen_record) throw ParseError("`nodes` header must precede all edges", lineno);
      std::uint64_t count = 0;
      if (!parse_field(line.substr(6), count) || count > std::numeric_limits<NodeId>::max()) {
        throw ParseError("malformed node count in header", lineno);
      }
      declared_n = static_cast<std::size_t>(count);
      have_header = true;
      continue;
    }

    std::string_view fields[3];
    if (!split_tabs(line, fields)) throw ParseError("expected `u<TAB>v<TAB>p`", lineno);
    std::uint64_t u = 0, v = 0;
    double p = 0.0;
    if (!parse_field(fields[0], u) || !parse_field(fields[1], v)) {
      throw ParseError("node ids must be nonnegative integers", lineno);
    }
    if (!parse_field(fields[2], p)) throw ParseError("malformed probability", lineno);
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("line " + std::to_string(lineno) + ": probability " + std::string(fields[2]) +
                        " outside [0,1]");
    }
    if (u >= std::numeric_limits<NodeId>::max() || v >= std::numeric_limits<NodeId>::max()) {
      throw DomainError("line " + std::to_string(lineno) + ": node id exceeds 32-bit range");
    }
    if (have_header && (u >= declared_n || v >= declared_n)) {
      throw DomainError("line " + std::to_string(lineno) + ": node id not below declared count " +
                        std::to_string(declared_n));
    }
    seen_record = true;
    n = std::max<std::size_t>(n, std::max(u, v) + 1);
    edges.push_back(Edge{static_cast<NodeId>(u), static_cast<NodeId>(v), p});
  }
  if (in.bad()) throw ParseError("read failure");
  return WeightedDigraph(have_header ? declared_n : n, std::move(edges));
}

WeightedDigraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const WeightedDigraph& g) {
  out << "nodes\t" << g.n() << '\n';
  char buf[64];
  for (const Edge& e : g.edges()) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.p);
    out << e.source << '\t' << e.target << '\t' << std::string_view(buf, end - buf) << '\n';
  }
}

}  // namespace maxinf
