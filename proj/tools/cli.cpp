#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxinf/algo.hpp"
#include "maxinf/bench.hpp"
#include "maxinf/cascade.hpp"
#include "maxinf/error.hpp"
#include "maxinf/graph.hpp"
#include "maxinf/oracle.hpp"

namespace maxinf::cli {

namespace {

std::atomic<bool> g_stop{false};

constexpr const char* kConventions =
    "Conventions: log is the natural logarithm (ln) in every budget formula\n"
    "  (R = 144(m+n) eps^-3 ln n, R = beta*144*C*(n+m) ln n with C = 10368) and in\n"
    "  the k=1 threshold 2C ln n. One step is one edge coin flip during a cascade;\n"
    "  drawing the root of an RR-set costs one more step. Randomness derives from\n"
    "  --seed (else $MAXINF_SEED, else 42) per (purpose, index) stream.";

struct Common {
  std::string graph;
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
  bool deterministic = false;
};

void add_seed(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master RNG seed")->envname("MAXINF_SEED")->capture_default_str();
}

void add_out(CLI::App* sub, Common& c) { sub->add_option("--out", c.out, "Write results here instead of stdout"); }

void add_workers(CLI::App* sub, Common& c) {
  sub->add_option("--workers", c.workers, "Sketch worker threads (1 = reproducible)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_flag("--deterministic", c.deterministic, "Force single-threaded reproducible output");
}

std::vector<NodeId> parse_ids(const std::string& text) {
  std::vector<NodeId> ids;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || tok.front() == '-') throw ParseError("malformed node id `" + tok + "`");
    ids.push_back(static_cast<NodeId>(v));
  }
  if (ids.empty()) throw ParseError("--seeds needs at least one node id");
  return ids;
}

// Sends text to --out or the given stream.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << text;
}

nlohmann::ordered_json result_json(const MaximizeResult& r) {
  nlohmann::ordered_json j;
  j["seeds"] = r.seeds.seeds;
  j["estimate"] = r.seeds.estimate;
  j["m_H"] = r.m_H;
  j["steps"] = r.steps;
  j["branch"] = std::string(branch_name(r.branch));
  return j;
}

}  // namespace

void request_stop() noexcept { g_stop.store(true, std::memory_order_relaxed); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"maxinf: influence maximization under the independent cascade model", "maxinf"};
  app.footer(kConventions);
  app.require_subcommand(1);

  Common c;
  std::size_t k = 1;
  double epsilon = 0.2;
  double beta = 0.25;
  std::size_t repetitions = 1;
  std::uint64_t ell = 1;

  auto* maximize_cmd = app.add_subcommand("maximize", "Greedy over a hypergraph sketch, (1-1/e-eps) approximation");
  maximize_cmd->footer(kConventions);
  maximize_cmd->add_option("--graph", c.graph, "Edge-list file")->required();
  maximize_cmd->add_option("--k", k, "Seed set size")->required()->check(CLI::PositiveNumber);
  maximize_cmd->add_option("--epsilon", epsilon, "Precision in (0,1)")->capture_default_str();
  maximize_cmd->add_option("--repetitions", repetitions, "Independent sketches; keep the largest")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  maximize_cmd->add_option("--ell", ell, "Budget multiplier for error 1/n^ell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_seed(maximize_cmd, c);
  add_out(maximize_cmd, c);
  add_workers(maximize_cmd, c);

  auto* sub_cmd = app.add_subcommand("maximize-sublinear", "Budget-beta variant, min(1/4,beta) approximation");
  sub_cmd->footer(kConventions);
  sub_cmd->add_option("--graph", c.graph, "Edge-list file")->required();
  sub_cmd->add_option("--k", k, "Seed set size")->required()->check(CLI::PositiveNumber);
  sub_cmd->add_option("--beta", beta, "Budget fraction in (0,1]")->capture_default_str();
  add_seed(sub_cmd, c);
  add_out(sub_cmd, c);
  add_workers(sub_cmd, c);

  std::optional<std::uint64_t> max_steps;
  std::optional<std::uint64_t> time_limit_ms;
  auto* any_cmd = app.add_subcommand(
      "anytime", "Sublinear variant with beta=1 and power-of-two checkpoints; SIGINT/SIGTERM returns the latest one");
  any_cmd->footer(kConventions);
  any_cmd->add_option("--graph", c.graph, "Edge-list file")->required();
  any_cmd->add_option("--k", k, "Seed set size")->required()->check(CLI::PositiveNumber);
  any_cmd->add_option("--max-steps", max_steps, "Stop after this many simulation steps");
  any_cmd->add_option("--time-limit-ms", time_limit_ms, "Stop after this much wall time");
  add_seed(any_cmd, c);
  add_out(any_cmd, c);

  std::string seeds_text;
  std::uint64_t trials = 10000;
  auto* est_cmd = app.add_subcommand("estimate", "Monte-Carlo estimate of E[I(S)] by forward cascades");
  est_cmd->footer(kConventions);
  est_cmd->add_option("--graph", c.graph, "Edge-list file")->required();
  est_cmd->add_option("--seeds", seeds_text, "Comma-separated seed ids")->required();
  est_cmd->add_option("--trials", trials, "Number of cascades")->check(CLI::PositiveNumber)->capture_default_str();
  add_seed(est_cmd, c);
  add_out(est_cmd, c);

  std::optional<std::size_t> opt_k;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact E[I(S)] (or OPT with --k) by realization enumeration");
  oracle_cmd->footer(kConventions);
  oracle_cmd->add_option("--graph", c.graph, "Edge-list file")->required();
  auto* oracle_seeds = oracle_cmd->add_option("--seeds", seeds_text, "Comma-separated seed ids");
  auto* oracle_k = oracle_cmd->add_option("--k", opt_k, "Compute OPT over all k-sets instead");
  oracle_seeds->excludes(oracle_k);
  add_out(oracle_cmd, c);

  auto* gen_cmd = app.add_subcommand("gen", "Write generated graphs as edge lists");
  gen_cmd->footer(kConventions);
  gen_cmd->require_subcommand(1);
  std::size_t gen_n = 0, gen_T = 0, gen_k = 0, gen_m = 0;
  std::optional<std::size_t> overlay_degree;
  double overlay_weight = kOverlayWeight;
  auto* lb_cmd = gen_cmd->add_subcommand("lower-bound", "k directed p=1 cycles of length 2T plus isolated nodes");
  lb_cmd->footer(kConventions);
  lb_cmd->add_option("--n", gen_n, "Node count")->required();
  lb_cmd->add_option("--T", gen_T, "Half cycle length (1/beta)")->required();
  lb_cmd->add_option("--k", gen_k, "Number of cycles")->required();
  lb_cmd->add_option("--overlay-degree", overlay_degree, "Add a d-regular overlay of tiny weight");
  lb_cmd->add_option("--overlay-weight", overlay_weight, "Overlay edge probability")->capture_default_str();
  add_out(lb_cmd, c);

  std::optional<double> p_fixed;
  std::vector<double> p_range;
  std::vector<double> p_choice;
  bool inverse_indegree = false;
  bool parallel_edges = false;
  auto* rnd_cmd = gen_cmd->add_subcommand("random", "m uniformly drawn directed edges");
  rnd_cmd->footer(kConventions);
  rnd_cmd->add_option("--n", gen_n, "Node count")->required();
  rnd_cmd->add_option("--m", gen_m, "Edge count")->required();
  auto* o_fixed = rnd_cmd->add_option("--p", p_fixed, "Fixed probability");
  auto* o_range = rnd_cmd->add_option("--p-uniform", p_range, "Uniform probability range LO,HI")
                      ->delimiter(',')
                      ->expected(2);
  auto* o_choice = rnd_cmd->add_option("--p-choice", p_choice, "Probabilities drawn uniformly from this list")
                       ->delimiter(',');
  auto* o_inv = rnd_cmd->add_flag("--inverse-indegree", inverse_indegree, "p(u,v) = 1/indegree(v)");
  o_fixed->excludes(o_range)->excludes(o_choice)->excludes(o_inv);
  o_range->excludes(o_choice)->excludes(o_inv);
  o_choice->excludes(o_inv);
  rnd_cmd->add_flag("--parallel", parallel_edges, "Allow parallel edges (draw with replacement)");
  add_seed(rnd_cmd, c);
  add_out(rnd_cmd, c);

  std::vector<std::string> bench_graphs;
  std::vector<std::string> bench_lower;
  std::vector<std::string> bench_random;
  std::string bench_algo = "both";
  std::vector<std::size_t> bench_k{1};
  std::size_t bench_trials = 100;
  std::string format = "csv";
  auto* bench_cmd = app.add_subcommand("bench", "Run algorithms over a corpus and score them exactly");
  bench_cmd->footer(kConventions);
  bench_cmd->add_option("--graph", bench_graphs, "Edge-list files (repeatable)");
  bench_cmd->add_option("--lower-bound", bench_lower, "Lower-bound instance n,T,k (repeatable)");
  bench_cmd->add_option("--random", bench_random,
                        "Random instances count,n,m with p drawn from {0.3,0.5,1.0} (repeatable)");
  bench_cmd->add_option("--algo", bench_algo, "maximize | maximize-sublinear | both")
      ->check(CLI::IsMember({"maximize", "maximize-sublinear", "both"}))
      ->capture_default_str();
  bench_cmd->add_option("--k", bench_k, "Seed set sizes")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--epsilon", epsilon, "Precision for maximize")->capture_default_str();
  bench_cmd->add_option("--beta", beta, "Budget fraction for maximize-sublinear")->capture_default_str();
  bench_cmd->add_option("--repetitions", repetitions, "Sketch repetitions for maximize")->capture_default_str();
  bench_cmd->add_option("--trials", bench_trials, "Runs per (instance, algorithm, k)")->capture_default_str();
  bench_cmd->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_seed(bench_cmd, c);
  add_out(bench_cmd, c);
  add_workers(bench_cmd, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const unsigned workers = c.deterministic ? 1u : c.workers;
  try {
    if (*maximize_cmd) {
      WeightedDigraph g = load_edge_list(std::filesystem::path(c.graph));
      MaximizeResult r = maximize(g, {epsilon, k, c.seed, repetitions, ell, workers});
      auto j = result_json(r);
      j["epsilon"] = epsilon;
      j["seed"] = c.seed;
      emit(c.out, out, j.dump() + "\n");
    } else if (*sub_cmd) {
      WeightedDigraph g = load_edge_list(std::filesystem::path(c.graph));
      MaximizeResult r = maximize_sublinear(g, {beta, k, c.seed, workers});
      auto j = result_json(r);
      j["beta"] = beta;
      j["seed"] = c.seed;
      emit(c.out, out, j.dump() + "\n");
    } else if (*any_cmd) {
      WeightedDigraph g = load_edge_list(std::filesystem::path(c.graph));
      g_stop.store(false);
      const auto start = std::chrono::steady_clock::now();
      AnytimeOptions opts;
      opts.step_limit = max_steps;
      opts.stop = [&] {
        if (g_stop.load(std::memory_order_relaxed)) return true;
        if (!time_limit_ms) return false;
        return std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(*time_limit_ms);
      };
      AnytimeSolution s = maximize_anytime(g, k, c.seed, opts);
      auto j = result_json(s.result);
      j["beta"] = 1.0;
      j["seed"] = c.seed;
      j["snapshot"] = s.snapshot_index;
      j["complete"] = s.complete;
      emit(c.out, out, j.dump() + "\n");
    } else if (*est_cmd) {
      WeightedDigraph g = load_edge_list(std::filesystem::path(c.graph));
      std::vector<NodeId> S = parse_ids(seeds_text);
      RngStream rng(c.seed, stream_id(StreamPurpose::kEstimate));
      McEstimate e = estimate_influence_mc(g, S, trials, rng);
      nlohmann::ordered_json j;
      j["mean"] = e.mean;
      j["trials"] = trials;
      j["steps"] = e.steps_total;
      j["seed"] = c.seed;
      emit(c.out, out, j.dump() + "\n");
    } else if (*oracle_cmd) {
      WeightedDigraph g = load_edge_list(std::filesystem::path(c.graph));
      nlohmann::ordered_json j;
      if (opt_k) {
        ExactOpt o = exact_opt(g, *opt_k);
        j["opt"] = o.value;
        j["argmax"] = o.argmax;
        j["realizations"] = o.realizations;
      } else {
        if (seeds_text.empty()) throw ParseError("oracle needs --seeds or --k");
        ExactInfluence e = exact_influence(g, parse_ids(seeds_text));
        j["exact"] = e.value;
        j["realizations"] = e.realizations;
      }
      emit(c.out, out, j.dump() + "\n");
    } else if (*gen_cmd) {
      WeightedDigraph g;
      if (*lb_cmd) {
        g = gen_lower_bound(gen_n, gen_T, gen_k, overlay_degree, overlay_weight);
      } else {
        ProbabilityDist dist = ProbabilityDist::fixed(0.1);
        if (p_fixed) dist = ProbabilityDist::fixed(*p_fixed);
        if (!p_range.empty()) dist = ProbabilityDist::uniform(p_range[0], p_range[1]);
        if (!p_choice.empty()) dist = ProbabilityDist::choice(p_choice);
        if (inverse_indegree) dist = ProbabilityDist::inverse_indegree();
        g = gen_random(gen_n, gen_m, dist, c.seed, parallel_edges);
      }
      std::ostringstream text;
      write_edge_list(text, g);
      emit(c.out, out, text.str());
    } else if (*bench_cmd) {
      std::vector<BenchInstance> corpus;
      for (const std::string& path : bench_graphs) {
        corpus.push_back({std::filesystem::path(path).filename().string(), load_edge_list(std::filesystem::path(path)), {}});
      }
      auto triple = [](const std::string& text, const char* what) {
        std::vector<std::size_t> v;
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          try {
            v.push_back(std::stoull(tok));
          } catch (const std::exception&) {
            throw ParseError(std::string("malformed ") + what + " `" + text + "`");
          }
        }
        if (v.size() != 3) throw ParseError(std::string(what) + " needs three comma-separated integers");
        return v;
      };
      for (const std::string& arg : bench_lower) {
        auto v = triple(arg, "--lower-bound");
        corpus.push_back({"lower-bound-n" + std::to_string(v[0]) + "-T" + std::to_string(v[1]) + "-k" + std::to_string(v[2]),
                          gen_lower_bound(v[0], v[1], v[2]), LowerBoundShape{v[0], v[1], v[2]}});
      }
      for (const std::string& arg : bench_random) {
        auto v = triple(arg, "--random");
        for (std::size_t i = 0; i < v[0]; ++i) {
          const std::uint64_t gseed = c.seed + i;
          corpus.push_back({"random-n" + std::to_string(v[1]) + "-m" + std::to_string(v[2]) + "-" + std::to_string(i),
                            gen_random(v[1], v[2], ProbabilityDist::choice({0.3, 0.5, 1.0}), gseed), {}});
        }
      }
      std::vector<BenchAlgorithm> algos;
      for (std::size_t kk : bench_k) {
        if (kk < 1) throw DomainError("k must be at least 1");
        if (bench_algo != "maximize-sublinear") algos.push_back({BenchAlgo::kGreedy, kk, epsilon, repetitions});
        if (bench_algo != "maximize") algos.push_back({BenchAlgo::kSublinear, kk, beta, 1});
      }
      BenchOptions opts{bench_trials, c.seed, !c.deterministic, workers};
      BenchReport report = run_bench(corpus, algos, opts);
      std::ostringstream text;
      if (format == "json") {
        write_json(text, report);
      } else {
        write_csv(text, report);
      }
      emit(c.out, out, text.str());
    }
  } catch (const CapacityError& e) {
    err << "maxinf: " << e.what() << '\n';
    return kCapacity;
  } catch (const ParseError& e) {
    err << "maxinf: " << e.what() << '\n';
    return kData;
  } catch (const DomainError& e) {
    err << "maxinf: " << e.what() << '\n';
    return kData;
  } catch (const BoundsError& e) {
    err << "maxinf: " << e.what() << '\n';
    return kData;
  } catch (const StateError& e) {
    err << "maxinf: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "maxinf: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace maxinf::cli
