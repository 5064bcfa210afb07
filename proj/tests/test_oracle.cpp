#include <doctest.h>

#include <chrono>
#include <cmath>
#include <queue>
#include <random>

#include "maxinf/bench.hpp"
#include "maxinf/cascade.hpp"
#include "maxinf/error.hpp"
#include "maxinf/oracle.hpp"

using namespace maxinf;

namespace {

// Reference: every edge, deterministic or not, gets its own bit.
double brute_influence(const WeightedDigraph& g, const std::vector<NodeId>& S) {
  const auto& edges = g.edges();
  double total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
    double prob = 1;
    std::vector<std::vector<NodeId>> adj(g.n());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      bool live = (mask >> i) & 1;
      prob *= live ? edges[i].p : 1 - edges[i].p;
      if (live) adj[edges[i].source].push_back(edges[i].target);
    }
    if (prob == 0) continue;
    std::vector<char> seen(g.n(), 0);
    std::queue<NodeId> q;
    for (NodeId s : S)
      if (!seen[s]) seen[s] = 1, q.push(s);
    std::size_t reached = 0;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      ++reached;
      for (NodeId u : adj[v])
        if (!seen[u]) seen[u] = 1, q.push(u);
    }
    total += prob * reached;
  }
  return total;
}

std::size_t bfs_reach(const WeightedDigraph& g, const std::vector<NodeId>& S) {
  std::vector<char> seen(g.n(), 0);
  std::vector<NodeId> stack;
  for (NodeId s : S)
    if (!seen[s]) seen[s] = 1, stack.push_back(s);
  std::size_t count = 0;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    ++count;
    for (const Arc& a : g.out_arcs(v))
      if (a.p > 0 && !seen[a.node]) seen[a.node] = 1, stack.push_back(a.node);
  }
  return count;
}

std::vector<NodeId> subset_of(std::uint32_t mask) {
  std::vector<NodeId> s;
  for (NodeId v = 0; mask; ++v, mask >>= 1)
    if (mask & 1) s.push_back(v);
  return s;
}

}  // namespace

TEST_CASE("exact influence examples") {
  auto half = exact_influence(WeightedDigraph(2, {{0, 1, 0.5}}), std::vector<NodeId>{0});
  CHECK(std::abs(half.value - 1.5) <= 1e-12);
  CHECK(half.realizations == 2);

  auto tri = exact_influence(WeightedDigraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}), std::vector<NodeId>{1});
  CHECK(tri.value == 3.0);
  CHECK(tri.realizations == 1);

  WeightedDigraph g = gen_random(8, 14, ProbabilityDist::choice({0.3, 0.5, 1.0}), 3);
  CHECK(exact_influence(g, std::vector<NodeId>{0, 1, 2, 3, 4, 5, 6, 7}).value == 8.0);
  CHECK_THROWS_AS(exact_influence(g, std::vector<NodeId>{8}), BoundsError);
}

TEST_CASE("exact influence equals independent enumeration") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + gen() % 6;
    auto g = gen_random(n, gen() % 11, ProbabilityDist::choice({0.0, 0.2, 0.5, 1.0}), t, true);
    std::vector<NodeId> S{static_cast<NodeId>(gen() % n), static_cast<NodeId>(gen() % n)};
    CHECK(exact_influence(g, S).value == doctest::Approx(brute_influence(g, S)).epsilon(1e-12));
  }
}

TEST_CASE("deterministic graphs reduce to reachability") {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + gen() % 40;
    auto g = gen_random(n, gen() % (n * 2), ProbabilityDist::fixed(1.0), t, true);
    std::vector<NodeId> S{static_cast<NodeId>(gen() % n)};
    auto r = exact_influence(g, S);
    CHECK(r.value == double(bfs_reach(g, S)));
    CHECK(r.realizations == 1);
  }
}

TEST_CASE("twenty stochastic edges enumerate within a second") {
  auto g = gen_random(12, 20, ProbabilityDist::fixed(0.5), 1);
  auto start = std::chrono::steady_clock::now();
  auto r = exact_influence(g, std::vector<NodeId>{0, 5});
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(r.realizations == (1u << 20));
  CHECK(secs < 1.0);
}

TEST_CASE("capacity guards") {
  auto big = gen_random(10, 23, ProbabilityDist::fixed(0.5), 1);
  CHECK_THROWS_AS(exact_influence(big, std::vector<NodeId>{0}), CapacityError);
  CHECK_THROWS_AS(exact_opt(big, 1), CapacityError);
  // 23 deterministic edges are fine.
  auto det = gen_random(10, 23, ProbabilityDist::fixed(1.0), 1);
  CHECK(exact_influence(det, std::vector<NodeId>{0}).realizations == 1);
  // C(40, 5) > 1e5 subsets.
  CHECK_THROWS_AS(exact_opt(WeightedDigraph(40, {}), 5), CapacityError);
}

TEST_CASE("exact OPT examples") {
  std::vector<Edge> star;
  for (NodeId i = 1; i <= 5; ++i) star.push_back({0, i, 1.0});
  auto s = exact_opt(WeightedDigraph(6, star), 1);
  CHECK(s.value == 6.0);
  CHECK(s.argmax == std::vector<NodeId>{0});

  auto e = exact_opt(WeightedDigraph(5, {}), 2);
  CHECK(e.value == 2.0);
  CHECK(e.argmax == std::vector<NodeId>{0, 1});

  auto pairs = exact_opt(WeightedDigraph(5, {{0, 1, 1.0}, {2, 3, 1.0}}), 2);
  CHECK(pairs.value == 4.0);
  CHECK(pairs.argmax == std::vector<NodeId>{0, 2});

  auto all = exact_opt(WeightedDigraph(3, {}), 7);
  CHECK(all.value == 3.0);
  CHECK(all.argmax == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("exact OPT equals the best subset by brute force") {
  std::mt19937_64 gen(10);
  for (int t = 0; t < 15; ++t) {
    const std::size_t n = 3 + gen() % 5;
    const std::size_t k = 1 + gen() % 3;
    auto g = gen_random(n, gen() % 9, ProbabilityDist::choice({0.3, 0.5, 1.0}), 100 + t, true);
    double best = -1;
    std::vector<NodeId> arg;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != static_cast<int>(std::min(k, n))) continue;
      auto S = subset_of(mask);
      double v = brute_influence(g, S);
      if (v > best + 1e-9 || (std::abs(v - best) <= 1e-9 && S < arg)) best = v, arg = S;
    }
    auto opt = exact_opt(g, k);
    CHECK(opt.value == doctest::Approx(best).epsilon(1e-12));
    CHECK(opt.argmax == arg);
  }
}

TEST_CASE("influence table agrees with exact influence") {
  auto g = gen_random(7, 12, ProbabilityDist::choice({0.3, 0.5, 1.0}), 5);
  InfluenceTable table(g);
  for (std::uint32_t mask = 1; mask < (1u << 7); mask += 5) {
    auto S = subset_of(mask);
    CHECK(table.influence(S) == doctest::Approx(exact_influence(g, S).value).epsilon(1e-12));
  }
}

TEST_CASE("exact influence is monotone and submodular") {
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 3 + t % 4;
    auto g = gen_random(n, std::min<std::size_t>(n * 2, 12), ProbabilityDist::choice({0.3, 0.5, 1.0}), 50 + t);
    std::vector<double> f(1u << n);
    for (std::uint32_t mask = 0; mask < f.size(); ++mask) f[mask] = mask ? exact_influence(g, subset_of(mask)).value : 0.0;
    for (std::uint32_t A = 0; A < f.size(); ++A) {
      for (std::uint32_t B = A;; B = (B + 1) | A) {  // supersets of A
        for (NodeId x = 0; x < n; ++x) {
          if (B & (1u << x)) continue;
          CHECK(f[A | (1u << x)] - f[A] >= f[B | (1u << x)] - f[B] - 1e-9);
        }
        CHECK(f[B] >= f[A] - 1e-9);
        if (B == f.size() - 1) break;
      }
    }
  }
}

TEST_CASE("chernoff sample sizes") {
  CHECK(chernoff_trials(0.1, 0.99).trials == 2120);
  CHECK(chernoff_trials(0.5, 0.9).trials == 48);
  CHECK(chernoff_tail(2120, 0.1) <= 0.01);
  CHECK(chernoff_tail(2119, 0.1) > 0.01);
  CHECK(chernoff_tail(1, 1.0) > 1.0);
  for (std::uint64_t N = 1; N < 500; ++N) CHECK(chernoff_tail(N + 1, 0.3) < chernoff_tail(N, 0.3));
  CHECK_THROWS_AS(chernoff_trials(0.0, 0.9), DomainError);
  CHECK_THROWS_AS(chernoff_trials(0.1, 1.0), DomainError);
}

TEST_CASE("Monte Carlo estimates land within lambda n at the planned rate") {
  auto g = gen_random(8, 12, ProbabilityDist::choice({0.3, 0.5}), 9);
  std::vector<NodeId> S{0, 3};
  const double exact = exact_influence(g, S).value;
  auto plan = chernoff_trials(0.1, 0.9);
  int hits = 0;
  const int reps = 60;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(r, stream_id(StreamPurpose::kEstimate));
    auto est = estimate_influence_mc(g, S, plan.trials, rng);
    hits += std::abs(est.mean - exact) <= 0.1 * g.n();
  }
  CHECK(hits >= 0.9 * reps);
}
