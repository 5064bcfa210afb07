#include <doctest.h>

#include <queue>
#include <random>

#include "maxinf/cascade.hpp"
#include "maxinf/error.hpp"

using namespace maxinf;

namespace {

WeightedDigraph random_graph(std::mt19937_64& gen, std::size_t n, std::size_t m, bool certain = false) {
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i) edges.push_back({node(gen), node(gen), certain ? 1.0 : prob(gen)});
  return WeightedDigraph(n, std::move(edges));
}

std::vector<NodeId> bfs(const WeightedDigraph& g, std::vector<NodeId> seeds) {
  std::vector<char> seen(g.n(), 0);
  std::queue<NodeId> q;
  for (NodeId s : seeds) {
    if (!seen[s]) q.push(s);
    seen[s] = 1;
  }
  while (!q.empty()) {
    NodeId x = q.front();
    q.pop();
    for (const Arc& a : g.out_arcs(x)) {
      if (!seen[a.node]) {
        seen[a.node] = 1;
        q.push(a.node);
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.n(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("simulate on single-edge graphs") {
  RngStream rng(1, 0);
  const std::vector<NodeId> s0{0};
  auto sure = WeightedDigraph(2, {{0, 1, 1.0}});
  auto out = simulate(sure, s0, Direction::kForward, rng);
  CHECK(out.influenced == std::vector<NodeId>{0, 1});
  CHECK(out.steps == 1);

  auto never = WeightedDigraph(2, {{0, 1, 0.0}});
  out = simulate(never, s0, Direction::kForward, rng);
  CHECK(out.influenced == std::vector<NodeId>{0});
  CHECK(out.steps == 1);

  out = simulate(sure, s0, Direction::kTranspose, rng);
  CHECK(out.influenced == std::vector<NodeId>{0});
  CHECK(out.steps == 0);
}

TEST_CASE("simulate rejects bad seeds") {
  RngStream rng(1, 0);
  auto g = WeightedDigraph(2, {{0, 1, 1.0}});
  CHECK_THROWS_AS(simulate(g, std::vector<NodeId>{}, Direction::kForward, rng), DomainError);
  CHECK_THROWS_AS(simulate(g, std::vector<NodeId>{2}, Direction::kForward, rng), BoundsError);
}

TEST_CASE("Monte-Carlo mean") {
  RngStream rng(3, 0);
  auto sure = WeightedDigraph(2, {{0, 1, 1.0}});
  CHECK(estimate_influence_mc(sure, std::vector<NodeId>{0}, 100, rng).mean == 2.0);
  auto edgeless = WeightedDigraph(5, {});
  CHECK(estimate_influence_mc(edgeless, std::vector<NodeId>{3}, 37, rng).mean == 1.0);
  // Exact value 1.5 (edge present: 2 nodes, absent: 1). The standard error at
  // 1e5 trials is 0.0016, so 0.01 is a > 6 sigma band.
  auto half = WeightedDigraph(2, {{0, 1, 0.5}});
  auto est = estimate_influence_mc(half, std::vector<NodeId>{0}, 100000, rng);
  CHECK(std::abs(est.mean - 1.5) <= 0.01);
  CHECK(est.steps_total == 100000);
  CHECK_THROWS_AS(estimate_influence_mc(half, std::vector<NodeId>{0}, 0, rng), DomainError);
}

TEST_CASE("identical streams give identical outcomes") {
  std::mt19937_64 gen(9);
  for (int t = 0; t < 20; ++t) {
    auto g = random_graph(gen, 30, 120);
    std::vector<NodeId> seeds{static_cast<NodeId>(gen() % 30), static_cast<NodeId>(gen() % 30)};
    for (Direction dir : {Direction::kForward, Direction::kTranspose}) {
      RngStream a(77, t), b(77, t);
      auto x = simulate(g, seeds, dir, a);
      auto y = simulate(g, seeds, dir, b);
      CHECK(x.influenced == y.influenced);
      CHECK(x.steps == y.steps);
    }
  }
}

TEST_CASE("influence is monotone in the seed set under shared edge coins") {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 50; ++t) {
    auto g = random_graph(gen, 25, 70);
    std::vector<char> realized(g.m());
    for (EdgeId e = 0; e < g.m(); ++e) {
      realized[e] = std::uniform_real_distribution<double>(0, 1)(gen) < g.edges()[e].p;
    }
    auto coin = [&](const Arc& a) { return realized[a.edge] != 0; };
    std::vector<NodeId> s1{static_cast<NodeId>(gen() % 25)};
    std::vector<NodeId> s12 = s1;
    s12.push_back(static_cast<NodeId>(gen() % 25));
    s12.push_back(static_cast<NodeId>(gen() % 25));
    auto a = simulate_with(g, s1, Direction::kForward, coin);
    auto b = simulate_with(g, s12, Direction::kForward, coin);
    CHECK(std::includes(b.influenced.begin(), b.influenced.end(), a.influenced.begin(), a.influenced.end()));
  }
}

TEST_CASE("steps equal the summed degree of influenced nodes") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 100; ++t) {
    auto g = random_graph(gen, 20, 50);
    std::vector<NodeId> seeds{static_cast<NodeId>(gen() % 20)};
    for (Direction dir : {Direction::kForward, Direction::kTranspose}) {
      RngStream rng(5, t);
      auto out = simulate(g, seeds, dir, rng);
      std::uint64_t deg = 0;
      for (NodeId v : out.influenced) deg += dir == Direction::kForward ? g.out_degree(v) : g.in_degree(v);
      CHECK(out.steps == deg);
      CHECK(std::binary_search(out.influenced.begin(), out.influenced.end(), seeds[0]));
    }
  }
}

TEST_CASE("certain edges give plain reachability") {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 50; ++t) {
    auto g = random_graph(gen, 40, 60, true);
    std::vector<NodeId> seeds{static_cast<NodeId>(gen() % 40), static_cast<NodeId>(gen() % 40)};
    RngStream rng(1, t);
    CHECK(simulate(g, seeds, Direction::kForward, rng).influenced == bfs(g, seeds));
    CHECK(simulate(g, seeds, Direction::kTranspose, rng).influenced == bfs(g.transposed(), seeds));
  }
}

TEST_CASE("long paths do not exhaust the call stack") {
  const std::size_t n = 200000;
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  WeightedDigraph path(n, std::move(edges));
  RngStream rng(1, 1);
  auto out = simulate(path, std::vector<NodeId>{0}, Direction::kForward, rng);
  CHECK(out.influenced.size() == n);
  CHECK(out.steps == n - 1);
}
