#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "maxinf/bench.hpp"
#include "maxinf/error.hpp"
#include "maxinf/oracle.hpp"

using namespace maxinf;

namespace {

WeightedDigraph star6() {
  std::vector<Edge> e;
  for (NodeId i = 1; i <= 5; ++i) e.push_back({0, i, 1.0});
  return WeightedDigraph(6, e);
}

}  // namespace

TEST_CASE("lower-bound family layout") {
  auto g = gen_lower_bound(8, 2, 1);
  CHECK(g.m() == 4);
  for (NodeId v = 0; v < 4; ++v) {
    REQUIRE(g.out_degree(v) == 1);
    CHECK(g.out_arcs(v)[0].node == (v + 1) % 4);
    CHECK(g.out_arcs(v)[0].p == 1.0);
  }
  for (NodeId v = 4; v < 8; ++v) CHECK(g.out_degree(v) + g.in_degree(v) == 0);
  CHECK(exact_influence(g, std::vector<NodeId>{0}).value == 4.0);

  auto two = gen_lower_bound(8, 2, 2);
  CHECK(two.m() == 8);
  CHECK(exact_opt(two, 2).value == 8.0);
  CHECK(LowerBoundShape{8, 2, 2}.opt(2) == 8.0);

  CHECK_THROWS_AS(gen_lower_bound(8, 2, 3), DomainError);
}

TEST_CASE("closed-form influence matches the oracle") {
  LowerBoundShape shape{12, 2, 2};
  auto g = gen_lower_bound(12, 2, 2);
  for (std::vector<NodeId> S : {std::vector<NodeId>{0}, {0, 1}, {0, 5}, {9, 10}, {3, 11}, {8, 9, 10, 11}}) {
    CHECK(shape.influence(S) == exact_influence(g, S).value);
  }
  CHECK(shape.opt(1) == 4.0);
  CHECK(shape.opt(3) == 9.0);
  CHECK(LowerBoundShape{64, 4, 2}.opt(2) == 16.0);
}

TEST_CASE("overlay edges barely move the influence") {
  auto plain = gen_lower_bound(16, 2, 2);
  auto over = gen_lower_bound(16, 2, 2, 1);
  CHECK(over.m() == plain.m() + 16);
  // Only the 16 overlay edges are stochastic, so enumeration is exact.
  for (std::vector<NodeId> S : {std::vector<NodeId>{0}, {0, 4}, {8, 12}}) {
    CHECK(std::abs(exact_influence(over, S).value - exact_influence(plain, S).value) <= 1e-6 * 16);
  }
}

TEST_CASE("random generator") {
  CHECK(gen_random(5, 0, ProbabilityDist::fixed(0.5), 1).m() == 0);

  auto full = gen_random(5, 20, ProbabilityDist::fixed(0.5), 1);
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const Edge& e : full.edges()) {
    CHECK(e.source != e.target);
    pairs.insert({e.source, e.target});
  }
  CHECK(pairs.size() == 20);
  CHECK_THROWS_AS(gen_random(5, 21, ProbabilityDist::fixed(0.5), 1), DomainError);

  auto a = gen_random(30, 80, ProbabilityDist::uniform(0.1, 0.9), 77);
  auto b = gen_random(30, 80, ProbabilityDist::uniform(0.1, 0.9), 77);
  auto c = gen_random(30, 80, ProbabilityDist::uniform(0.1, 0.9), 78);
  auto vec = [](const WeightedDigraph& g) { return std::vector<Edge>(g.edges().begin(), g.edges().end()); };
  CHECK(vec(a) == vec(b));
  CHECK(vec(a) != vec(c));
  for (const Edge& e : a.edges()) CHECK((e.p >= 0.1 && e.p <= 0.9));

  auto ch = gen_random(10, 40, ProbabilityDist::choice({0.3, 0.5, 1.0}), 2);
  for (const Edge& e : ch.edges()) CHECK((e.p == 0.3 || e.p == 0.5 || e.p == 1.0));

  auto inv = gen_random(10, 40, ProbabilityDist::inverse_indegree(), 2);
  for (const Edge& e : inv.edges()) CHECK(e.p == doctest::Approx(1.0 / inv.in_degree(e.target)));
}

TEST_CASE("star corpus passes with the quasilinear algorithm") {
  auto report = run_bench({{"star", star6(), std::nullopt}}, {{BenchAlgo::kGreedy, 1, 0.5, 1}},
                          {100, 1, false, 1});
  REQUIRE(report.aggregates.size() == 1);
  const auto& agg = report.aggregates[0];
  CHECK(agg.trials == 100);
  CHECK(agg.pass);
  CHECK(agg.success_rate >= 0.6);
  CHECK(report.rows.size() == 100);
  for (const auto& row : report.rows) CHECK(row.opt == 6.0);
}

TEST_CASE("lower-bound instance scores by closed form") {
  BenchInstance inst{"lb", gen_lower_bound(16, 2, 2), LowerBoundShape{16, 2, 2}};
  auto report = run_bench({inst}, {{BenchAlgo::kSublinear, 2, 0.25, 1}}, {3, 5, false, 1});
  REQUIRE(report.aggregates.size() == 1);
  CHECK(report.aggregates[0].threshold == 0.25);
  for (const auto& row : report.rows) {
    CHECK(row.opt == 8.0);
    CHECK(row.ratio >= 0.0);
    CHECK(row.ratio <= 1.0);
  }
}

TEST_CASE("empty corpus gives an empty report") {
  auto report = run_bench({}, {{BenchAlgo::kGreedy, 1, 0.2, 1}}, {});
  CHECK(report.rows.empty());
  CHECK(report.aggregates.empty());
  std::ostringstream out;
  write_csv(out, report);
  CHECK(out.str() == std::string(kBenchCsvHeader) + "\n");
}

TEST_CASE("oversized instances are skipped with a reason") {
  BenchInstance big{"big", gen_random(12, 30, ProbabilityDist::fixed(0.5), 1), std::nullopt};
  auto report = run_bench({big, {"star", star6(), std::nullopt}}, {{BenchAlgo::kGreedy, 1, 0.5, 1}}, {2, 1, false, 1});
  REQUIRE(report.skips.size() == 1);
  CHECK(report.skips[0].instance == "big");
  CHECK(!report.skips[0].reason.empty());
  CHECK(report.aggregates.size() == 1);
  std::ostringstream out;
  write_csv(out, report);
  CHECK(out.str().find("#skip,big,maximize,") != std::string::npos);
  CHECK(out.str().find("#agg,star,maximize,1,0.5,trials=2,") != std::string::npos);
}

TEST_CASE("reports are byte-identical without timing") {
  std::vector<BenchInstance> corpus{{"star", star6(), std::nullopt},
                                    {"r", gen_random(6, 8, ProbabilityDist::choice({0.3, 0.5, 1.0}), 4), std::nullopt}};
  std::vector<BenchAlgorithm> algs{{BenchAlgo::kGreedy, 2, 0.5, 1}};
  std::ostringstream a, b, j;
  write_csv(a, run_bench(corpus, algs, {4, 11, false, 1}));
  write_csv(b, run_bench(corpus, algs, {4, 11, false, 1}));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind(kBenchCsvHeader, 0) == 0);
  write_json(j, run_bench(corpus, algs, {1, 11, false, 1}));
  CHECK(j.str().rfind("{\"instance\":\"star\",\"algo\":\"maximize\",\"k\":2,", 0) == 0);
}

TEST_CASE("thresholds") {
  CHECK(success_threshold({BenchAlgo::kGreedy, 1, 0.2, 1}) == doctest::Approx(1 - 1 / std::exp(1.0) - 0.2));
  CHECK(success_threshold({BenchAlgo::kSublinear, 1, 0.125, 1}) == 0.125);
  CHECK(success_threshold({BenchAlgo::kSublinear, 1, 1.0, 1}) == 0.25);
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
}
