#include "suites.hpp"

#include <atomic>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <thread>

#include "djp/edp_approx.hpp"
#include "djp/generators.hpp"
#include "djp/mcf_lp.hpp"
#include "djp/ndp_fpt.hpp"
#include "djp/oracle.hpp"
#include "djp/rounding.hpp"

namespace djp::tools {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::vector<BenchRow> run_case(const SuiteInstance& c, std::uint64_t seed) {
  const Instance& inst = c.normalized;
  std::vector<BenchRow> rows;
  auto row = [&](const std::string& algorithm) {
    BenchRow r;
    r.instance = c.name;
    r.algorithm = algorithm;
    r.seed = seed;
    return r;
  };

  auto start = std::chrono::steady_clock::now();
  const double lp = lp_value(inst);
  BenchRow lp_row = row("lp");
  lp_row.value = lp;
  lp_row.time_ms = elapsed_ms(start);

  std::optional<int> oracle;
  BenchRow oracle_row = row("exact");
  try {
    start = std::chrono::steady_clock::now();
    check_oracle_guard(c.raw, OracleGuard{.force = c.force_oracle});
    oracle = exact_opt(inst, OracleGuard{.force = true}).value;
    oracle_row.value = *oracle;
    oracle_row.congestion = 1;
    oracle_row.time_ms = elapsed_ms(start);
  } catch (const GuardExceeded&) {
  }

  rows.push_back(lp_row);
  if (oracle) rows.push_back(oracle_row);

  if (inst.mode == Mode::edge_disjoint) {
    start = std::chrono::steady_clock::now();
    RoundOptions ro;
    ro.seed = seed;
    const RoundOutcome rounded = round_with_retries(inst, ro);
    BenchRow r = row("round");
    r.value = rounded.best.routing.size();
    r.congestion = rounded.best.congestion;
    r.time_ms = elapsed_ms(start);
    rows.push_back(r);

    start = std::chrono::steady_clock::now();
    EdpApproxOptions ao;
    ao.rounding.seed = seed;
    const EdpApproxResult approx = approx_edp(inst, ao);
    BenchRow a = row("approx-edp");
    a.value = approx.routing.size();
    a.congestion = verify_routing(inst, approx.routing, 1).max_edge_congestion;
    a.time_ms = elapsed_ms(start);
    rows.push_back(a);
  } else {
    start = std::chrono::steady_clock::now();
    const NdpResult ndp = maxndp_fpt(inst);
    BenchRow r = row("ndp");
    r.value = ndp.value;
    r.congestion = 1;
    r.time_ms = elapsed_ms(start);
    rows.push_back(r);
  }
  for (BenchRow& r : rows) {
    r.lp_value = lp;
    r.oracle_value = oracle;
  }
  return rows;
}

SuiteInstance make_case(std::string name, const Instance& raw, bool force = false) {
  return SuiteInstance{std::move(name), raw, normalize_instance(raw), force};
}

}  // namespace

std::vector<SuiteInstance> suite_instances(const std::string& suite, const SuiteOptions& options) {
  std::vector<SuiteInstance> cases;
  const bool all = suite == "all";
  if (all || suite == "gap")
    for (int k = 2; k <= 5; ++k) cases.push_back(make_case("grid-k" + std::to_string(k), gen_grid_gap(k).instance, true));
  if (all || suite == "random")
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t s = options.seed * 1000 + static_cast<std::uint64_t>(i);
      const Generated g = gen_random_fvs(5 + i % 5, 1 + i % 3, 2 + i % 4, 2 + i % 3, s);
      cases.push_back(make_case("random-edp-" + std::to_string(s), g.instance));
    }
  if (all || suite == "ndp")
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t s = options.seed * 1000 + static_cast<std::uint64_t>(i);
      const Generated g = gen_random_fvs(5 + i % 5, 1 + i % 3, 2 + i % 4, 2 + i % 3, s, Mode::node_disjoint);
      cases.push_back(make_case("random-ndp-" + std::to_string(s), g.instance));
    }
  if (all || suite == "clique")
    for (int k = 2; k <= 3; ++k)
      for (int n = 2; n <= 3; ++n) {
        CliqueInput yes{k, n, {}};
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j) {
            yes.edges.push_back({{i, n - 1}, {j, n - 1}});
            yes.edges.push_back({{i, 0}, {j, 0}});
          }
        CliqueInput no = yes;
        no.edges.erase(no.edges.begin());
        no.edges.pop_back();
        const std::string tag = "-k" + std::to_string(k) + "-n" + std::to_string(n);
        cases.push_back(make_case("clique-yes" + tag, gen_multicolored_clique(yes).instance, true));
        cases.push_back(make_case("clique-no" + tag, gen_multicolored_clique(no).instance, true));
      }
  if (all || suite == "coloring") {
    for (const std::string& base : builtin_cubic_names()) {
      if (base == "petersen" && !options.slow) continue;
      const SimpleGraph h = builtin_cubic(base);
      cases.push_back(make_case("color-r2-" + base, gen_coloring_r2(h).instance, true));
      cases.push_back(make_case("color-r1-" + base, gen_coloring_r1(h).instance, true));
    }
  }
  if (cases.empty()) throw Error("unknown suite '" + suite + "'");
  return cases;
}

std::vector<std::string> suite_names() { return {"gap", "random", "ndp", "clique", "coloring", "all"}; }

std::vector<BenchRow> run_suite(const std::string& suite, const SuiteOptions& options) {
  const std::vector<SuiteInstance> cases = suite_instances(suite, options);
  std::vector<std::vector<BenchRow>> results(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) results[i] = run_case(cases[i], options.seed);
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(cases.size())));
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  std::vector<BenchRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "instance,algorithm,value,lp_value,oracle_value,congestion,time_ms,seed\n";
  for (const BenchRow& r : rows) {
    os << r.instance << ',' << r.algorithm << ',' << r.value << ',';
    if (r.lp_value) os << std::setprecision(9) << *r.lp_value;
    os << ',';
    if (r.oracle_value) os << *r.oracle_value;
    os << ',' << r.congestion << ',' << std::fixed << std::setprecision(3) << r.time_ms << std::defaultfloat << ','
       << r.seed << '\n';
  }
}

}  // namespace djp::tools
