#include "maxinf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "maxinf/algo.hpp"
#include "maxinf/error.hpp"
#include "maxinf/oracle.hpp"
#include "maxinf/rng.hpp"

namespace maxinf {

double LowerBoundShape::influence(std::span<const NodeId> S) const {
  const std::size_t big = 2 * T * components;
  std::vector<char> hit(components, 0);
  std::vector<NodeId> singles;
  double value = 0.0;
  for (NodeId v : S) {
    if (v >= n) throw BoundsError("node " + std::to_string(v) + " out of range");
    if (v < big) {
      std::size_t c = v / (2 * T);
      if (!hit[c]) {
        hit[c] = 1;
        value += static_cast<double>(2 * T);
      }
    } else {
      singles.push_back(v);
    }
  }
  std::sort(singles.begin(), singles.end());
  value += static_cast<double>(std::unique(singles.begin(), singles.end()) - singles.begin());
  return value;
}

double LowerBoundShape::opt(std::size_t budget) const {
  const std::size_t cycles = std::min(budget, components);
  const std::size_t singles = std::min(budget - cycles, n - 2 * T * components);
  return static_cast<double>(cycles * 2 * T + singles);
}

WeightedDigraph gen_lower_bound(std::size_t n, std::size_t T, std::size_t k,
                                std::optional<std::size_t> overlay_degree, double overlay_weight) {
  if (T < 1 || k < 1) throw DomainError("T and k must be at least 1");
  if (2 * k * T > n) {
    throw DomainError("lower-bound family needs 2kT <= n, got 2*" + std::to_string(k) + "*" +
                      std::to_string(T) + " = " + std::to_string(2 * k * T) + " > " + std::to_string(n));
  }
  std::vector<Edge> edges;
  const std::size_t len = 2 * T;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < len; ++i) {
      edges.push_back(Edge{static_cast<NodeId>(j * len + i),
                           static_cast<NodeId>(j * len + (i + 1) % len), 1.0});
    }
  }
  if (overlay_degree) {
    const std::size_t d = *overlay_degree;
    if (d >= n) throw DomainError("overlay degree must be below n");
    if (!(overlay_weight >= 0.0 && overlay_weight <= 1.0)) throw DomainError("overlay weight outside [0,1]");
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t s = 1; s <= d; ++s) {
        edges.push_back(Edge{static_cast<NodeId>(v), static_cast<NodeId>((v + s) % n), overlay_weight});
      }
    }
  }
  return WeightedDigraph(n, std::move(edges));
}

WeightedDigraph gen_random(std::size_t n, std::size_t m, const ProbabilityDist& dist,
                           std::uint64_t seed, bool allow_parallel) {
  using Kind = ProbabilityDist::Kind;
  if (dist.kind == Kind::kUniform && !(0.0 <= dist.lo && dist.lo <= dist.hi && dist.hi <= 1.0)) {
    throw DomainError("uniform probability range must satisfy 0 <= lo <= hi <= 1");
  }
  if (dist.kind == Kind::kFixed && !(dist.lo >= 0.0 && dist.lo <= 1.0)) {
    throw DomainError("fixed probability outside [0,1]");
  }
  if (dist.kind == Kind::kChoice) {
    if (dist.values.empty()) throw DomainError("choice distribution needs at least one value");
    for (double p : dist.values) {
      if (!(p >= 0.0 && p <= 1.0)) throw DomainError("choice probability outside [0,1]");
    }
  }
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0);
  if (m > 0 && pairs == 0) throw DomainError("no admissible edges on fewer than 2 nodes");
  if (!allow_parallel && m > pairs) {
    throw DomainError("m = " + std::to_string(m) + " exceeds n(n-1) = " + std::to_string(pairs));
  }

  RngStream rng(seed, stream_id(StreamPurpose::kGenerator));
  std::vector<std::uint64_t> picks;
  picks.reserve(m);
  if (allow_parallel) {
    for (std::size_t i = 0; i < m; ++i) picks.push_back(rng.below(pairs));
  } else {
    // Floyd's sampling of m distinct indices from [0, pairs).
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(m * 2);
    for (std::uint64_t j = pairs - m; j < pairs; ++j) {
      std::uint64_t t = rng.below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    picks.assign(chosen.begin(), chosen.end());
    std::sort(picks.begin(), picks.end());
  }

  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t idx : picks) {
    auto u = static_cast<NodeId>(idx / (n - 1));
    auto v = static_cast<NodeId>(idx % (n - 1));
    if (v >= u) ++v;
    double p = 0.0;
    switch (dist.kind) {
      case Kind::kFixed:
        p = dist.lo;
        break;
      case Kind::kUniform:
        p = dist.lo + (dist.hi - dist.lo) * rng.uniform();
        break;
      case Kind::kChoice:
        p = dist.values[rng.below(dist.values.size())];
        break;
      case Kind::kInverseInDegree:
        break;
    }
    edges.push_back(Edge{u, v, p});
  }
  if (dist.kind == Kind::kInverseInDegree) {
    std::vector<std::size_t> indeg(n, 0);
    for (const Edge& e : edges) ++indeg[e.target];
    for (Edge& e : edges) e.p = 1.0 / static_cast<double>(indeg[e.target]);
  }
  return WeightedDigraph(n, std::move(edges));
}

double success_threshold(const BenchAlgorithm& a) {
  if (a.algo == BenchAlgo::kGreedy) return 1.0 - 1.0 / std::exp(1.0) - a.param;
  return std::min(0.25, a.param);
}

std::string algo_name(BenchAlgo a) {
  return a == BenchAlgo::kGreedy ? "maximize" : "maximize-sublinear";
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return RngStream(master, stream_id(StreamPurpose::kBench, trial)).next_u64();
}

namespace {

// Exact scoring for one instance: closed form for lower-bound shapes,
// otherwise realization enumeration with per-set memoization.
class Scorer {
 public:
  explicit Scorer(const BenchInstance& inst) : inst_(inst) {
    if (!inst.shape) table_.emplace(inst.graph);
  }

  double influence(std::vector<NodeId> S) {
    if (inst_.shape) return inst_.shape->influence(S);
    std::sort(S.begin(), S.end());
    auto it = memo_.find(S);
    if (it != memo_.end()) return it->second;
    double v = table_->influence(S);
    memo_.emplace(std::move(S), v);
    return v;
  }

  double opt(std::size_t k) {
    if (inst_.shape) return inst_.shape->opt(k);
    auto it = opt_.find(k);
    if (it != opt_.end()) return it->second;
    double v = exact_opt(inst_.graph, k).value;
    opt_.emplace(k, v);
    return v;
  }

 private:
  const BenchInstance& inst_;
  std::optional<InfluenceTable> table_;
  std::map<std::vector<NodeId>, double> memo_;
  std::map<std::size_t, double> opt_;
};

std::string fmt_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

BenchReport run_bench(const std::vector<BenchInstance>& corpus,
                      const std::vector<BenchAlgorithm>& algorithms, const BenchOptions& options,
                      const std::function<void(const BenchRow&)>& on_row) {
  BenchReport report;
  for (const BenchInstance& inst : corpus) {
    std::optional<Scorer> scorer;
    std::string scorer_error;
    try {
      scorer.emplace(inst);
    } catch (const CapacityError& e) {
      scorer_error = e.what();
    }
    for (const BenchAlgorithm& alg : algorithms) {
      const std::string name = algo_name(alg.algo);
      double opt = 0.0;
      std::string skip_reason = scorer_error;
      if (scorer) {
        try {
          opt = scorer->opt(alg.k);
        } catch (const CapacityError& e) {
          skip_reason = e.what();
        }
      }
      if (!skip_reason.empty()) {
        report.skips.push_back({inst.id, name, skip_reason});
        continue;
      }
      BenchAggregate agg{inst.id, name, alg.k, alg.param, 0, 0.0, 0.0, success_threshold(alg), false};
      std::size_t successes = 0;
      for (std::size_t t = 0; t < options.trials; ++t) {
        const std::uint64_t seed = trial_seed(options.seed, t);
        auto start = std::chrono::steady_clock::now();
        MaximizeResult res;
        if (alg.algo == BenchAlgo::kGreedy) {
          res = maximize(inst.graph, {alg.param, alg.k, seed, alg.repetitions, 1, options.workers});
        } else {
          res = maximize_sublinear(inst.graph, {alg.param, alg.k, seed, options.workers});
        }
        auto stop = std::chrono::steady_clock::now();
        BenchRow row;
        row.instance = inst.id;
        row.algo = name;
        row.k = alg.k;
        row.param = alg.param;
        row.seed = seed;
        row.achieved = scorer->influence(res.seeds.seeds);
        row.opt = opt;
        row.ratio = opt > 0.0 ? std::min(1.0, row.achieved / opt) : 1.0;
        row.steps = res.steps;
        row.ms = options.record_time
                     ? std::chrono::duration<double, std::milli>(stop - start).count()
                     : 0.0;
        if (row.achieved >= agg.threshold * opt - 1e-9) ++successes;
        agg.mean_ratio += row.ratio;
        ++agg.trials;
        if (on_row) on_row(row);
        report.rows.push_back(std::move(row));
      }
      if (agg.trials > 0) {
        agg.success_rate = static_cast<double>(successes) / static_cast<double>(agg.trials);
        agg.mean_ratio /= static_cast<double>(agg.trials);
      }
      agg.pass = agg.trials > 0 && agg.success_rate >= 0.6;
      report.aggregates.push_back(std::move(agg));
    }
  }
  return report;
}

void write_csv(std::ostream& out, const BenchReport& report) {
  out << kBenchCsvHeader << '\n';
  char ms[32];
  for (const BenchRow& r : report.rows) {
    std::snprintf(ms, sizeof ms, "%.3f", r.ms);
    out << r.instance << ',' << r.algo << ',' << r.k << ',' << fmt_double(r.param) << ',' << r.seed
        << ',' << fmt_double(r.achieved) << ',' << fmt_double(r.opt) << ',' << fmt_double(r.ratio)
        << ',' << r.steps << ',' << ms << '\n';
  }
  for (const BenchSkip& s : report.skips) {
    out << "#skip," << s.instance << ',' << s.algo << ',' << s.reason << '\n';
  }
  for (const BenchAggregate& a : report.aggregates) {
    out << "#agg," << a.instance << ',' << a.algo << ',' << a.k << ',' << fmt_double(a.param)
        << ",trials=" << a.trials << ",success_rate=" << fmt_double(a.success_rate)
        << ",mean_ratio=" << fmt_double(a.mean_ratio) << ",threshold=" << fmt_double(a.threshold)
        << ',' << (a.pass ? "PASS" : "FAIL") << '\n';
  }
}

void write_json(std::ostream& out, const BenchReport& report) {
  using nlohmann::ordered_json;
  for (const BenchRow& r : report.rows) {
    ordered_json j;
    j["instance"] = r.instance;
    j["algo"] = r.algo;
    j["k"] = r.k;
    j["param"] = r.param;
    j["seed"] = r.seed;
    j["achieved"] = r.achieved;
    j["opt"] = r.opt;
    j["ratio"] = r.ratio;
    j["steps"] = r.steps;
    j["ms"] = r.ms;
    out << j.dump() << '\n';
  }
  for (const BenchSkip& s : report.skips) {
    ordered_json j;
    j["type"] = "skip";
    j["instance"] = s.instance;
    j["algo"] = s.algo;
    j["reason"] = s.reason;
    out << j.dump() << '\n';
  }
  for (const BenchAggregate& a : report.aggregates) {
    ordered_json j;
    j["type"] = "agg";
    j["instance"] = a.instance;
    j["algo"] = a.algo;
    j["k"] = a.k;
    j["param"] = a.param;
    j["trials"] = a.trials;
    j["success_rate"] = a.success_rate;
    j["mean_ratio"] = a.mean_ratio;
    j["threshold"] = a.threshold;
    j["pass"] = a.pass;
    out << j.dump() << '\n';
  }
}

}  // namespace maxinf
