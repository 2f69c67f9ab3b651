#include <CLI11.hpp>

#include <climits>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "djp/edp_approx.hpp"
#include "djp/fvs.hpp"
#include "djp/generators.hpp"
#include "djp/io.hpp"
#include "djp/mcf_lp.hpp"
#include "djp/ndp_fpt.hpp"
#include "djp/oracle.hpp"
#include "djp/rounding.hpp"
#include "suites.hpp"

namespace {

using namespace djp;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DJP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("DJP_SEED is not an unsigned integer");
    }
  }
  return 1;
}

// Writes to the file named by `path`, or stdout when it is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

Instance load(const std::string& path, std::optional<Mode> required = std::nullopt) {
  Instance inst = read_instance_file(path);
  if (required && inst.mode != *required)
    throw UsageError("'" + path + "' is a " + to_string(inst.mode) + " instance; this command needs " +
                     to_string(*required));
  return inst;
}

std::string node_list(std::span<const NodeId> nodes) {
  std::ostringstream os;
  for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? " " : "") << nodes[i] + 1;
  return os.str();
}

// Parses "1:1-2:1 1:2-3:1" (class:vertex pairs, 1-indexed).
std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> parse_clique_edges(const std::string& text) {
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> out;
  std::istringstream is(text);
  std::string token;
  while (is >> token) {
    int a = 0, b = 0, c = 0, d = 0;
    char s1 = 0, dash = 0, s2 = 0;
    std::istringstream ts(token);
    if (!(ts >> a >> s1 >> b >> dash >> c >> s2 >> d) || s1 != ':' || dash != '-' || s2 != ':')
      throw UsageError("bad clique edge '" + token + "', expected i:a-j:b");
    out.push_back({{a - 1, b - 1}, {c - 1, d - 1}});
  }
  return out;
}

void write_generated(const Generated& g, const std::string& out) {
  std::ostringstream comment;
  comment << "generator " << g.name << "\nfvs " << node_list(g.fvs);
  if (g.target) comment << "\ntarget " << *g.target;
  Output o(out);
  write_instance(o.stream(), g.instance, comment.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge- and node-disjoint paths parameterized by the feedback vertex set number"};
  app.require_subcommand(1);
  std::string out;
  std::uint64_t seed = 1;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->require_subcommand(1);
  int grid_k = 4;
  auto* gen_grid = gen->add_subcommand("grid", "Integrality-gap grid");
  gen_grid->add_option("--k", grid_k, "Number of pairs")->check(CLI::Range(2, 1000));
  std::string base = "k4";
  auto* gen_r1 = gen->add_subcommand("color-r1", "Edge-3-coloring reduction with two hubs");
  auto* gen_r2 = gen->add_subcommand("color-r2", "Edge-3-coloring reduction with three hubs");
  for (auto* c : {gen_r1, gen_r2})
    c->add_option("--base", base, "Cubic base graph")->check(CLI::IsMember(builtin_cubic_names()));
  int clique_k = 2, clique_n = 2;
  std::string clique_edges;
  auto* gen_clique = gen->add_subcommand("clique", "Multicolored clique reduction (node-disjoint)");
  gen_clique->add_option("--k", clique_k, "Number of classes")->check(CLI::Range(2, 50));
  gen_clique->add_option("--n", clique_n, "Vertices per class")->check(CLI::Range(2, 50));
  gen_clique->add_option("--edges", clique_edges, "Edges as i:a-j:b tokens, 1-indexed");
  int rnd_forest = 8, rnd_r = 2, rnd_extra = 4, rnd_k = 3;
  std::string rnd_mode = "edp";
  auto* gen_random = gen->add_subcommand("random", "Random instance with a bounded feedback vertex set");
  gen_random->add_option("--n-forest", rnd_forest)->check(CLI::NonNegativeNumber);
  gen_random->add_option("--r", rnd_r)->check(CLI::NonNegativeNumber);
  gen_random->add_option("--extra", rnd_extra, "Hub-forest edges")->check(CLI::NonNegativeNumber);
  gen_random->add_option("--k", rnd_k, "Number of pairs")->check(CLI::NonNegativeNumber);
  gen_random->add_option("--mode", rnd_mode)->check(CLI::IsMember({"edp", "ndp"}));
  gen_random->add_option("--seed", seed);
  for (auto* c : {gen_grid, gen_r1, gen_r2, gen_clique, gen_random}) c->add_option("-o,--output", out);

  // solvers
  std::string file, routing_file;
  bool paths = false, force = false, exact = false, approx = false;
  double c_const = 2.0;
  int trials = 20, jobs = 1;
  std::optional<int> cap;

  auto* lp = app.add_subcommand("lp", "Solve the multi-commodity flow relaxation");
  lp->add_option("file", file)->required();
  lp->add_flag("--paths", paths, "Dump the path decomposition");

  auto* round = app.add_subcommand("round", "Bi-criteria randomized rounding");
  round->add_option("file", file)->required();
  round->add_option("--c", c_const, "Congestion constant")->check(CLI::PositiveNumber);
  round->add_option("--trials", trials)->check(CLI::Range(1, 100000));
  round->add_option("--seed", seed);

  auto* approx_cmd = app.add_subcommand("approx-edp", "Congestion-1 approximation for MaxEDP");
  approx_cmd->add_option("file", file)->required();
  approx_cmd->add_option("--c", c_const, "Congestion constant")->check(CLI::PositiveNumber);
  approx_cmd->add_option("--seed", seed);

  auto* ndp = app.add_subcommand("ndp", "Exact MaxNDP by the feedback-vertex-set DP");
  ndp->add_option("file", file)->required();
  ndp->add_option("--jobs", jobs)->check(CLI::Range(1, 1024));

  auto* exact_cmd = app.add_subcommand("exact", "Exhaustive optimum for small instances");
  exact_cmd->add_option("file", file)->required();
  exact_cmd->add_flag("--force", force, "Ignore the size guard");

  auto* fvs_cmd = app.add_subcommand("fvs", "Feedback vertex set of the instance graph");
  fvs_cmd->add_option("file", file)->required();
  auto* fvs_exact_flag = fvs_cmd->add_flag("--exact", exact);
  fvs_cmd->add_flag("--approx", approx)->excludes(fvs_exact_flag);

  auto* verify = app.add_subcommand("verify", "Check a routing file against an instance");
  verify->add_option("instance", file)->required();
  verify->add_option("routing", routing_file)->required();
  verify->add_option("--congestion", cap, "Allowed congestion (default: the file's, else 1)");

  std::string suite = "gap";
  bool slow = false;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and print CSV");
  bench->add_option("--suite", suite)->check(CLI::IsMember(tools::suite_names()));
  bench->add_option("--jobs", jobs)->check(CLI::Range(1, 1024));
  bench->add_option("--seed", seed);
  bench->add_flag("--slow", slow, "Include slow instances");

  for (auto* c : {lp, round, approx_cmd, ndp, exact_cmd, fvs_cmd, bench}) c->add_option("-o,--output", out);

  try {
    seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*gen) {
      if (*gen_grid) write_generated(gen_grid_gap(grid_k), out);
      if (*gen_r1) write_generated(gen_coloring_r1(builtin_cubic(base)), out);
      if (*gen_r2) write_generated(gen_coloring_r2(builtin_cubic(base)), out);
      if (*gen_clique)
        write_generated(gen_multicolored_clique(CliqueInput{clique_k, clique_n, parse_clique_edges(clique_edges)}), out);
      if (*gen_random)
        write_generated(gen_random_fvs(rnd_forest, rnd_r, rnd_extra, rnd_k, seed,
                                       rnd_mode == "ndp" ? Mode::node_disjoint : Mode::edge_disjoint),
                        out);
      return kOk;
    }
    if (*lp) {
      const Instance norm = normalize_instance(load(file));
      const ArcFlow flow = solve_lp(norm);
      Output o(out);
      o.stream() << "lp_value " << std::setprecision(12) << flow.objective << '\n';
      o.stream() << "status " << (flow.status == SimplexStatus::optimal ? "optimal" : "iteration_limit") << '\n';
      if (paths) {
        const FractionalSolution sol = decompose_paths(norm.graph, flow);
        Routing r;
        std::vector<double> weights;
        for (const WeightedPath& p : sol.paths) {
          r.entries.push_back(RoutedPath{p.pair, p.path});
          weights.push_back(p.weight);
        }
        const Routing back = denormalize_routing(norm, r);
        const Instance raw = load(file);
        write_routing(o.stream(), back, verify_routing(raw, back, INT_MAX).max_edge_congestion, weights);
      }
      return flow.status == SimplexStatus::optimal ? kOk : kFailed;
    }
    if (*round) {
      const Instance raw = load(file, Mode::edge_disjoint);
      const Instance norm = normalize_instance(raw);
      RoundOptions ro;
      ro.c_const = c_const;
      ro.max_trials = trials;
      ro.seed = seed;
      const RoundOutcome res = round_with_retries(norm, ro);
      const Routing back = denormalize_routing(norm, res.best.routing);
      Output o(out);
      write_routing(o.stream(), back, verify_routing(raw, back, INT_MAX).max_edge_congestion);
      o.stream() << "trials_used " << res.trials_used << '\n';
      o.stream() << "congestion_cap " << res.congestion_cap << '\n';
      o.stream() << "hotspots " << res.state.hot_spots.size() << '\n';
      o.stream() << "required " << res.required << '\n';
      o.stream() << "success " << (res.success ? 1 : 0) << '\n';
      return res.success ? kOk : kFailed;
    }
    if (*approx_cmd) {
      const Instance raw = load(file, Mode::edge_disjoint);
      const Instance norm = normalize_instance(raw);
      EdpApproxOptions ao;
      ao.rounding.c_const = c_const;
      ao.rounding.seed = seed;
      const EdpApproxResult res = approx_edp(norm, ao);
      const Routing back = denormalize_routing(norm, res.routing);
      Output o(out);
      write_routing(o.stream(), back, verify_routing(raw, back, INT_MAX).max_edge_congestion);
      o.stream() << "case_used " << res.case_used << '\n';
      o.stream() << "r_prime " << res.r_prime << '\n';
      return kOk;
    }
    if (*ndp) {
      const Instance raw = load(file, Mode::node_disjoint);
      const Instance norm = normalize_instance(raw);
      const NdpResult res = maxndp_fpt(norm, NdpOptions{.jobs = jobs});
      const Routing back = denormalize_routing(norm, res.routing);
      Output o(out);
      write_routing(o.stream(), back, 1);
      o.stream() << "structures_tried " << res.structures_tried << '\n';
      o.stream() << "fvs_size " << res.r_nodes.size() << '\n';
      return kOk;
    }
    if (*exact_cmd) {
      const Instance raw = load(file);
      check_oracle_guard(raw, OracleGuard{.force = force});
      const Instance norm = normalize_instance(raw);
      const OracleResult res = exact_opt(norm, OracleGuard{.force = true});
      const Routing back = denormalize_routing(norm, res.witness);
      Output o(out);
      write_routing(o.stream(), back, 1);
      o.stream() << "search_nodes " << res.search_nodes << '\n';
      return kOk;
    }
    if (*fvs_cmd) {
      const Instance inst = load(file);
      FeedbackVertexSet f;
      if (exact) f = *fvs_exact(inst.graph, inst.graph.node_count());
      else if (approx) f = fvs_approx2(inst.graph);
      else f = fvs_auto(inst.graph);
      Output o(out);
      o.stream() << "r " << f.size() << '\n' << node_list(f.nodes) << '\n';
      return kOk;
    }
    if (*verify) {
      const Instance inst = load(file);
      const RoutingFile rf = read_routing_file(routing_file, inst.graph);
      const int allowed = cap.value_or(rf.congestion.value_or(1));
      const RoutingReport rep = verify_routing(inst, rf.routing, allowed);
      std::cout << (rep.feasible ? "feasible" : "infeasible") << '\n';
      std::cout << "value " << rf.routing.size() << '\n';
      std::cout << "max_edge_congestion " << rep.max_edge_congestion << '\n';
      std::cout << "max_node_congestion " << rep.max_node_congestion << '\n';
      for (const Violation& v : rep.violations) std::cout << "violation " << v.entry + 1 << ' ' << v.message << '\n';
      if (rf.value && *rf.value != rf.routing.size()) {
        std::cout << "violation header value " << *rf.value << " does not match " << rf.routing.size() << " paths\n";
        return kFailed;
      }
      return rep.feasible ? kOk : kFailed;
    }
    if (*bench) {
      const auto rows = tools::run_suite(suite, tools::SuiteOptions{seed, jobs, slow});
      Output o(out);
      tools::write_csv(o.stream(), rows);
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const GuardExceeded& e) {
    std::cerr << "error: " << e.what() << " (use --force)\n";
    return kFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}
