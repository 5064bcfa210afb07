#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxinf/graph.hpp"

namespace maxinf {

inline constexpr double kOverlayWeight = 1e-12;

// Shape of a hard instance: `components` directed p=1 cycles of length 2T
// on ids [2Tj, 2T(j+1)), the remaining n - 2kT ids isolated.
struct LowerBoundShape {
  std::size_t n = 0;
  std::size_t T = 0;
  std::size_t components = 0;

  // Closed-form E[I(S)]: 2T per distinct cycle hit plus one per isolated seed.
  double influence(std::span<const NodeId> S) const;
  // Best value reachable with `budget` seeds.
  double opt(std::size_t budget) const;
};

// Throws DomainError when 2kT > n. With `overlay_degree` d, every node also
// gets edges to its d successors mod n with probability `overlay_weight`.
WeightedDigraph gen_lower_bound(std::size_t n, std::size_t T, std::size_t k,
                                std::optional<std::size_t> overlay_degree = std::nullopt,
                                double overlay_weight = kOverlayWeight);

struct ProbabilityDist {
  enum class Kind { kFixed, kUniform, kChoice, kInverseInDegree };
  Kind kind = Kind::kFixed;
  double lo = 0.1;
  double hi = 0.1;
  std::vector<double> values;

  static ProbabilityDist fixed(double p) { return {Kind::kFixed, p, p, {}}; }
  static ProbabilityDist uniform(double lo, double hi) { return {Kind::kUniform, lo, hi, {}}; }
  static ProbabilityDist choice(std::vector<double> v) { return {Kind::kChoice, 0, 0, std::move(v)}; }
  // p(u,v) = 1 / indegree(v), assigned after the edge set is drawn.
  static ProbabilityDist inverse_indegree() { return {Kind::kInverseInDegree, 0, 0, {}}; }
};

// m directed edges, without self-loops. Without `allow_parallel` the pairs
// are drawn uniformly without replacement (m <= n(n-1)); with it, each edge
// is an independent uniform pair. Deterministic per seed.
WeightedDigraph gen_random(std::size_t n, std::size_t m, const ProbabilityDist& dist,
                           std::uint64_t seed, bool allow_parallel = false);

struct BenchInstance {
  std::string id;
  WeightedDigraph graph;
  std::optional<LowerBoundShape> shape;  // enables closed-form scoring at any size
};

enum class BenchAlgo { kGreedy, kSublinear };

struct BenchAlgorithm {
  BenchAlgo algo = BenchAlgo::kGreedy;
  std::size_t k = 1;
  double param = 0.2;  // epsilon for kGreedy, beta for kSublinear
  std::size_t repetitions = 1;
};

struct BenchRow {
  std::string instance;
  std::string algo;
  std::size_t k = 0;
  double param = 0.0;
  std::uint64_t seed = 0;
  double achieved = 0.0;
  double opt = 0.0;
  double ratio = 0.0;
  std::uint64_t steps = 0;
  double ms = 0.0;
};

struct BenchAggregate {
  std::string instance;
  std::string algo;
  std::size_t k = 0;
  double param = 0.0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double mean_ratio = 0.0;
  double threshold = 0.0;  // required achieved / OPT
  bool pass = false;       // success_rate >= 3/5
};

struct BenchSkip {
  std::string instance;
  std::string algo;
  std::string reason;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchAggregate> aggregates;
  std::vector<BenchSkip> skips;
};

struct BenchOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  bool record_time = true;  // false writes ms = 0 so reports are byte-reproducible
  unsigned workers = 1;
};

// Approximation target for an algorithm: 1 - 1/e - eps, or min(1/4, beta).
double success_threshold(const BenchAlgorithm& a);
std::string algo_name(BenchAlgo a);

// Trial t of every (instance, algorithm) pair runs with seed derived from
// stream (kBench, t) of options.seed.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

BenchReport run_bench(const std::vector<BenchInstance>& corpus,
                      const std::vector<BenchAlgorithm>& algorithms, const BenchOptions& options,
                      const std::function<void(const BenchRow&)>& on_row = {});

inline constexpr const char* kBenchCsvHeader = "instance,algo,k,param,seed,achieved,opt,ratio,steps,ms";

// CSV: header, one row per trial, then `#skip` and `#agg` lines.
void write_csv(std::ostream& out, const BenchReport& report);
// JSON lines with the CSV fields in the same order; aggregates carry "type":"agg".
void write_json(std::ostream& out, const BenchReport& report);

}  // namespace maxinf
