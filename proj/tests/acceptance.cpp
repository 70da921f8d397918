// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every threshold used below is fixed here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "audit.hpp"
#include "certify.hpp"
#include "pdd/colorcoding.hpp"
#include "pdd/diversity.hpp"
#include "pdd/generators.hpp"
#include "pdd/oracle.hpp"
#include "pdd/pattern.hpp"
#include "pdd/portfolio.hpp"
#include "pdd/preprocess.hpp"
#include "pdd/structural.hpp"
#include "support.hpp"

using namespace pdd;
using namespace pdd::testing;

namespace {

constexpr std::size_t kGeneralInstances = 500;
constexpr std::size_t kGeneralMaxTaxa = 10;
constexpr std::size_t kPerSolverInstances = 200;
constexpr std::size_t kPerSolverTarget = 250;
constexpr std::size_t kReductionInstances = 200;
constexpr std::size_t kMonteCarloTrials = 300;
constexpr double kEpsilon = 0.1;
constexpr double kMaxFalseNegativeRate = 2 * kEpsilon;
constexpr std::uint64_t kSweepBudget = 200'000'000;  // per run in the false-positive sweep
constexpr std::size_t kTwTaxa = 10'000;
constexpr std::uint64_t kTwK = 100;
constexpr double kTwSeconds = 10.0;
constexpr std::size_t kFlowTaxa = 1'000;
constexpr std::size_t kFlowRuns = 5;
constexpr double kFlowSeconds = 1.0;
constexpr std::size_t kAuditMaxTaxa = 6;
constexpr std::size_t kAuditInstances = 200;

struct Tally {
  std::size_t checked = 0, refused = 0, bad = 0;
  std::string first;

  void fail(const std::string& what) {
    if (bad++ == 0) first = what;
  }
  std::string summary() const {
    std::string s = std::to_string(checked) + " checked, " + std::to_string(refused) + " refused, " +
                    std::to_string(bad) + " mismatches";
    if (bad) s += "; first: " + first;
    return s;
  }
};

bool all_ok = true;

void report(int id, const char* title, bool pass, const std::string& detail) {
  all_ok = all_ok && pass;
  std::printf("criterion %d %-34s %s  %s\n", id, title, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TaxonSet witness_set(const Instance& inst, const std::vector<std::string>& names) {
  return inst.set_of(names);
}

// Decision checked against the library oracle and the test reference; a
// "yes" must come with a witness both accept.
void check_answer(Tally& t, const Instance& inst, const Answer& a, const std::string& what) {
  ++t.checked;
  const bool oracle = brute_force_decide(inst).has_value();
  const bool ref = ref_decide(inst);
  if (oracle != ref) return t.fail(what + ": oracle and reference disagree");
  if (a.has_value() != oracle) return t.fail(what + ": decision differs from the oracle");
  if (a && !(is_solution(inst, a->taxa) && ref_is_solution(inst, a->taxa))) t.fail(what + ": invalid witness");
}

void check_max(Tally& t, const Instance& inst, const std::optional<Selection>& best, const std::string& what) {
  const Weight opt = brute_force_optimum(inst).pd_value;
  if (!best) return t.fail(what + ": no selection");
  if (best->value != opt || ref_optimum(inst).value != opt) return t.fail(what + ": optimum differs");
  if (best->S.count() > inst.k || !is_viable(inst.web, best->S) || pd(inst.tree, best->S) != best->value)
    t.fail(what + ": selection does not realise its value");
}

gen::RandomParams general_params(std::uint64_t seed) {
  gen::RandomParams p;
  p.n = 1 + seed % kGeneralMaxTaxa;
  p.seed = 100'000 + seed;
  p.tree = static_cast<gen::TreeShape>(seed % 4);
  p.web = static_cast<gen::WebShape>(seed / 4 % 7);
  p.modulator = seed % 3;
  p.density = 0.15 + 0.1 * static_cast<double>(seed % 5);
  p.k_fraction = 0.2 + 0.1 * static_cast<double>(seed % 6);
  p.d_fraction = 0.3 + 0.1 * static_cast<double>(seed % 6);
  return p;
}

std::vector<Instance> corpus;  // every instance of criteria 1 and 2, reused by 3 and 8

// 1 ------------------------------------------------------------------------

void criterion_general() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally full, no_oracle;
  std::size_t shapes_seen[4] = {0, 0, 0, 0};
  for (std::uint64_t seed = 0; seed < kGeneralInstances; ++seed) {
    gen::RandomParams gp = general_params(seed);
    Instance inst = gen::gen_random(gp);
    corpus.push_back(inst);
    ++shapes_seen[static_cast<int>(gp.tree)];
    const Weight opt = brute_force_optimum(inst).pd_value;
    const std::string what = "seed " + std::to_string(seed);
    if (ref_optimum(inst).value != opt) {
      full.fail(what + ": oracle and reference disagree");
      continue;
    }
    Policy p;
    p.optimize = true;
    for (int pass = 0; pass < 2; ++pass) {
      Tally& t = pass == 0 ? full : no_oracle;
      if (pass == 1) {
        p.oracle_budget = 0;
        p.tiny_oracle = 0;
      }
      RunRecord r = portfolio_solve(inst, p);
      if (r.decision == "refused") {
        ++t.refused;
        if (pass == 0) t.fail(what + ": refused");
        continue;
      }
      ++t.checked;
      if ((r.decision == "yes") != (opt >= inst.D)) t.fail(what + ": decision via " + r.algorithm);
      else if (r.optimum != opt) t.fail(what + ": optimum via " + r.algorithm);
      else if (r.decision == "yes" && !ref_is_solution(inst, witness_set(inst, r.witness)))
        t.fail(what + ": witness via " + r.algorithm);
    }
    Policy plain;
    RunRecord d = portfolio_solve(inst, plain);
    if ((d.decision == "yes") != (opt >= inst.D)) full.fail(what + ": decision-only run");
  }
  const double secs = seconds_since(t0);
  const bool shapes = shapes_seen[0] && shapes_seen[1] && shapes_seen[2] && shapes_seen[3];
  report(1, "oracle equivalence, general",
         full.checked >= kGeneralInstances && full.bad == 0 && no_oracle.bad == 0 && shapes && secs < 300,
         "portfolio " + full.summary() + " | without oracle " + no_oracle.summary() + " | " +
             std::to_string(secs) + " s");
}

// 2 ------------------------------------------------------------------------

struct SolverRun {
  const char* name;
  Tally tally;
};

void per_solver(SolverRun& run, const std::function<std::optional<Instance>(std::uint64_t)>& next,
                const std::function<void(Tally&, const Instance&, const std::string&)>& check) {
  for (std::uint64_t seed = 0; run.tally.checked < kPerSolverTarget && seed < 20 * kPerSolverTarget; ++seed) {
    std::optional<Instance> inst = next(seed);
    if (!inst) continue;
    corpus.push_back(*inst);
    const std::string what = std::string(run.name) + " seed " + std::to_string(seed);
    try {
      check(run.tally, *inst, what);
    } catch (const BudgetExceeded&) {
      ++run.tally.refused;
    } catch (const PreconditionError& e) {
      run.tally.fail(what + ": precondition " + e.what());
    }
  }
}

void criterion_per_solver() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SolverRun> runs = {{"cc-k", {}},    {"pattern", {}}, {"d", {}},    {"cluster", {}},
                                 {"cocluster", {}}, {"tw", {}},    {"flow", {}}, {"outforest", {}}};
  const SolveOptions exact;

  per_solver(
      runs[0],
      [](std::uint64_t seed) -> std::optional<Instance> {
        gen::RandomParams p = general_params(seed);
        p.seed = 200'000 + seed;
        p.tree = gen::TreeShape::star;
        return gen::gen_random(p);
      },
      [&](Tally& t, const Instance& inst, const std::string& what) {
        check_answer(t, inst, solve_spdd_by_k(inst, exact), what);
        if (optimize_spdd_by_k(inst, exact).pd_value != brute_force_optimum(inst).pd_value)
          t.fail(what + ": optimum differs");
      });

  per_solver(
      runs[1],
      [](std::uint64_t seed) -> std::optional<Instance> {
        gen::RandomParams p = general_params(seed);
        p.n = 2 + seed % 7;
        p.seed = 210'000 + seed;
        p.tree = seed % 3 == 0 ? gen::TreeShape::star : gen::TreeShape::shallow;
        Instance inst = gen::gen_random(p);
        if (inst.tree.height() > 2) return std::nullopt;
        inst.k = std::min<std::uint64_t>(inst.k, 3);
        return inst;
      },
      [&](Tally& t, const Instance& inst, const std::string& what) {
        check_answer(t, inst, solve_pdd_by_k_height(inst, exact), what);
      });

  per_solver(
      runs[2],
      [](std::uint64_t seed) -> std::optional<Instance> {
        gen::RandomParams p = general_params(seed);
        p.seed = 220'000 + seed;
        p.max_weight = 3;
        Instance inst = gen::gen_random(p);
        if (inst.tree.total_weight() > 14) return std::nullopt;
        return inst;
      },
      [&](Tally& t, const Instance& inst, const std::string& what) {
        check_answer(t, inst, solve_pdd_by_d(inst, exact), what);
      });

  per_solver(
      runs[3],
      [](std::uint64_t seed) -> std::optional<Instance> {
        gen::RandomParams p = general_params(seed);
        p.seed = 230'000 + seed;
        p.tree = gen::TreeShape::star;
        p.web = gen::WebShape::cluster;
        p.modulator = seed % 4;
        return gen::gen_random(p);
      },
      [&](Tally& t, const Instance& inst, const std::string& what) {
        auto mod = find_modulator(inst.web, GraphClass::cluster, 3);
        if (!mod) return t.fail(what + ": no cluster modulator of size 3");
        check_max(t, inst, max_pd_by_cluster_modulator(inst, *mod, exact), what);
        check_answer(t, inst, solve_spdd_by_cluster_modulator(inst, *mod, exact), what);
      });

  per_solver(
      runs[4],
      [](std::uint64_t seed) -> std::optional<Instance> {
        gen::RandomParams p = general_params(seed);
        p.seed = 240'000 + seed;
        p.web = gen::WebShape::cocluster;
        p.modulator = seed % 3;
        return gen::gen_random(p);
      },
      [&](Tally& t, const Instance& inst, const std::string& what) {
        auto mod = find_modulator(inst.web, GraphClass::cocluster, 2);
        if (!mod) return t.fail(what + ": no co-cluster modulator of size 2");
        check_max(t, inst, max_pd_by_cocluster_modulator(inst, *mod, exact), what);
        check_answer(t, inst, solve_pdd_by_cocluster_modulator(inst, *mod, exact), what);
      });

  per_solver(
      runs[5],
      [](std::uint64_t seed) -> std::optional<Instance> {
        gen::RandomParams p = general_params(seed);
        p.n = 1 + seed % 12;
        p.seed = 250'000 + seed;
        p.tree = gen::TreeShape::star;
        Instance inst = gen::gen_random(p);
        if (build_nice_tree_decomposition(inst.web).width() > 3) return std::nullopt;
        return inst;
      },
      [&](Tally& t, const Instance& inst, const std::string& what) {
        auto nice = build_nice_tree_decomposition(inst.web);
        check_max(t, inst, max_pd_by_treewidth(inst, nice, exact), what);
        check_answer(t, inst, solve_spdd_by_treewidth(inst, nice, exact), what);
      });

  per_solver(
      runs[6],
      [](std::uint64_t seed) -> std::optional<Instance> {
        return gen::gen_source_separating(1 + seed % 12, 0.3 + 0.1 * static_cast<double>(seed % 6),
                                          0.2 + 0.1 * static_cast<double>(seed % 7),
                                          0.3 + 0.1 * static_cast<double>(seed % 5), 260'000 + seed);
      },
      [&](Tally& t, const Instance& inst, const std::string& what) {
        if (!is_source_separating(inst) || !has_isolated_arcs_only(inst.web))
          return t.fail(what + ": generator broke the precondition");
        check_max(t, inst, max_pd_source_separating(inst, exact), what);
        check_answer(t, inst, solve_pdd_source_separating_flow(inst, exact), what);
      });

  per_solver(
      runs[7],
      [](std::uint64_t seed) -> std::optional<Instance> {
        gen::RandomParams p = general_params(seed);
        p.seed = 270'000 + seed;
        p.web = gen::WebShape::outforest;
        p.k_fraction = 0.5 + 0.1 * static_cast<double>(seed % 5);
        return gen::gen_random(p);
      },
      [&](Tally& t, const Instance& inst, const std::string& what) {
        for (std::size_t x = 0; x < inst.n(); ++x)
          if (inst.web.prey(static_cast<TaxonId>(x)).size() > 1) return t.fail(what + ": not an out-forest");
        check_answer(t, inst, solve_pdd_outforest_by_kbar(inst, exact), what);
      });

  const double secs = seconds_since(t0);
  bool pass = secs < 600;
  std::string detail;
  for (const auto& r : runs) {
    pass = pass && r.tally.checked >= kPerSolverInstances && r.tally.bad == 0;
    detail += std::string(detail.empty() ? "" : " | ") + r.name + ": " + r.tally.summary();
  }
  report(2, "per-solver equivalence", pass, detail + " | " + std::to_string(secs) + " s");
}

// 3 ------------------------------------------------------------------------

struct Trials {
  std::size_t trials = 0, misses = 0, refused = 0;
};

// Yes-instances with D at the optimum, where a colouring has to isolate an
// optimal set; each trial draws a fresh instance and a fresh seed.
Trials false_negatives(const std::function<std::optional<Instance>(std::uint64_t)>& next,
                       const std::function<Answer(const Instance&, const SolveOptions&)>& solve) {
  Trials out;
  for (std::uint64_t seed = 0; out.trials < kMonteCarloTrials && seed < 50 * kMonteCarloTrials; ++seed) {
    std::optional<Instance> inst = next(seed);
    if (!inst) continue;
    inst->D = ref_optimum(*inst).value;
    if (inst->D == 0 || inst->k < 2) continue;
    SolveOptions mc{Mode::monte_carlo, 31 * seed + 7, kEpsilon};
    try {
      const bool found = solve(*inst, mc).has_value();
      ++out.trials;
      if (!found) ++out.misses;
    } catch (const BudgetExceeded&) {
      ++out.refused;
    }
  }
  return out;
}

void criterion_one_sided() {
  Tally fp;
  // every algorithm of the portfolio on every corpus instance
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Instance& inst = corpus[i];
    const bool yes = ref_decide(inst);
    for (const auto& [a, name] : algorithm_names()) {
      Policy p;
      p.algorithm = a;
      p.solve = {Mode::monte_carlo, i, kEpsilon, kSweepBudget};
      try {
        RunRecord r = portfolio_solve(inst, p);
        if (r.decision == "refused") {
          ++fp.refused;
          continue;
        }
        ++fp.checked;
        if (r.decision == "yes" && !yes) fp.fail(std::string(name) + " on corpus instance " + std::to_string(i));
      } catch (const std::logic_error& e) {
        fp.fail(std::string(name) + " on corpus instance " + std::to_string(i) + ": " + e.what());
      }
    }
  }

  auto star = [](std::uint64_t seed) -> std::optional<Instance> {
    gen::RandomParams p;
    p.n = 6 + seed % 5;
    p.seed = 300'000 + seed;
    p.tree = gen::TreeShape::star;
    p.density = 0.3;
    p.k_fraction = 0.5;
    return gen::gen_random(p);
  };
  auto shallow = [](std::uint64_t seed) -> std::optional<Instance> {
    gen::RandomParams p;
    p.n = 5 + seed % 4;
    p.seed = 310'000 + seed;
    p.tree = gen::TreeShape::shallow;
    p.density = 0.3;
    Instance inst = gen::gen_random(p);
    if (inst.tree.height() > 2) return std::nullopt;
    inst.k = 2;
    return inst;
  };
  auto light = [](std::uint64_t seed) -> std::optional<Instance> {
    gen::RandomParams p;
    p.n = 4 + seed % 4;
    p.seed = 320'000 + seed;
    p.max_weight = 2;
    p.density = 0.3;
    Instance inst = gen::gen_random(p);
    if (inst.tree.total_weight() > 10) return std::nullopt;
    return inst;
  };
  struct Row {
    const char* name;
    Trials t;
  };
  std::vector<Row> rows = {
      {"cc-k", false_negatives(star, [](const Instance& i, const SolveOptions& o) { return solve_spdd_by_k(i, o); })},
      {"pattern",
       false_negatives(shallow, [](const Instance& i, const SolveOptions& o) { return solve_pdd_by_k_height(i, o); })},
      {"d", false_negatives(light, [](const Instance& i, const SolveOptions& o) { return solve_pdd_by_d(i, o); })}};
  bool pass = fp.bad == 0 && fp.checked > 0;
  std::string detail = "false positives: " + fp.summary();
  for (const auto& r : rows) {
    const double rate = r.t.trials ? static_cast<double>(r.t.misses) / static_cast<double>(r.t.trials) : 1.0;
    pass = pass && r.t.trials >= kMonteCarloTrials && rate <= kMaxFalseNegativeRate;
    char buf[128];
    std::snprintf(buf, sizeof buf, " | %s: %zu/%zu misses (rate %.3f, bound %.2f), %zu refused", r.name, r.t.misses,
                  r.t.trials, rate, kMaxFalseNegativeRate, r.t.refused);
    detail += buf;
  }
  report(3, "one-sided monte carlo", pass, detail);
}

// 4 ------------------------------------------------------------------------

void criterion_reductions() {
  Tally rr1, rr3, rr2, single;
  std::size_t fired = 0;
  for (std::uint64_t seed = 0; seed < kReductionInstances; ++seed) {
    gen::RandomParams p = general_params(seed);
    p.n = 2 + seed % 9;
    p.seed = 400'000 + seed;
    Instance inst = gen::gen_random(p);
    const std::string what = "seed " + std::to_string(seed);
    const Weight opt = brute_force_optimum(inst).pd_value;

    ++rr1.checked;
    Restricted r = rr_reachability_prune(inst);
    if (brute_force_optimum(r.instance).pd_value != opt || ref_optimum(r.instance).value != opt) rr1.fail(what);

    ++rr3.checked;
    Instance thin = rr_redundant_prey(inst);
    if (brute_force_optimum(thin).pd_value != opt || ref_optimum(thin).value != opt) rr3.fail(what);

    // the heavy-edge rule needs the pruned instance; small D makes it fire
    for (Weight D : {inst.D, Weight{1} + seed % 6}) {
      Instance probe = r.instance;
      probe.D = D;
      ++rr2.checked;
      Answer a = rr_heavy_edge_accept(probe);
      if (!a) continue;
      ++fired;
      Instance orig = inst;
      orig.D = D;
      TaxonSet lifted = lift(a->taxa, r.origin, inst.n());
      if (!is_solution(probe, a->taxa) || !ref_is_solution(orig, lifted)) rr2.fail(what);
    }

    ++single.checked;
    SourceTransform st = single_source_transform(inst);
    Answer a = brute_force_decide(st.instance);
    if (a.has_value() != ref_decide(inst)) single.fail(what + ": decision");
    else if (a && !ref_is_solution(inst, strip_star(a->taxa, st))) single.fail(what + ": stripped witness");
    else if (brute_force_optimum(st.instance).pd_value != opt + inst.D + 1) single.fail(what + ": optimum shift");
    else if (st.instance.web.sources().count() != 1) single.fail(what + ": not single-source");
  }
  const bool pass = rr1.bad == 0 && rr3.bad == 0 && rr2.bad == 0 && single.bad == 0 &&
                    rr1.checked >= kReductionInstances && fired > 0;
  report(4, "reduction-rule soundness", pass,
         "reachability " + rr1.summary() + " | redundant prey " + rr3.summary() + " | heavy edge " +
             std::to_string(fired) + " yes outputs, " + std::to_string(rr2.bad) + " invalid | single source " +
             single.summary());
}

// 5 ------------------------------------------------------------------------

void criterion_generators() {
  CertifyReport vc = certify_vertex_cover();
  CertifyReport rb = certify_red_blue_nonblocker();
  CertifyReport sc = certify_set_cover();
  auto line = [](const char* name, const CertifyReport& r) {
    std::string s = std::string(name) + ": " + std::to_string(r.payloads) + " payloads, " +
                    std::to_string(r.checks) + " checks, " + std::to_string(r.mismatches) + " mismatches, " +
                    std::to_string(r.refused) + " out-of-domain payloads refused";
    if (r.mismatches) s += "; first: " + r.first_failure;
    return s;
  };
  const bool pass = vc.mismatches == 0 && rb.mismatches == 0 && sc.mismatches == 0 && vc.payloads == 9 &&
                    rb.checks > 0 && sc.checks > 0;
  report(5, "generator certification", pass,
         line("vertex cover", vc) + " | " + line("red-blue nonblocker", rb) + " | " + line("set cover", sc));
}

// 6 ------------------------------------------------------------------------

void criterion_figure() {
  FigureOne f = figure_one();
  PatternInstance p = make_pattern_instance(f.inst, f.color, figure_pattern(f));
  reduce_pattern_instance(p);
  contract_internal_once(p, 6);
  auto w = edge_weights(p);
  auto at = [&](const char* e) { return w.count(e) ? std::to_string(w.at(e)) : std::string("-"); };
  const std::string c3 = at("rho->c30") + "," + at("rho->c31") + "," + at("rho->c32");
  const std::string c5 = at("rho->c51") + "," + at("rho->c52");
  const bool gone = !w.count("rho->c3") && !w.count("rho->c5") && !w.count("c3->c30") && !w.count("c5->c51");
  report(6, "contraction regression", c3 == "4,2,4" && c5 == "2,4" && gone,
         "c3 block " + c3 + ", c5 block " + c5);
}

// 7 ------------------------------------------------------------------------

// Star over n taxa whose food-web is a binary out-tree.
Instance out_tree_star(std::size_t n, std::uint64_t k) {
  std::vector<VertexId> par{kNoVertex};
  std::vector<Weight> w{0};
  std::vector<TaxonId> tx{kNoTaxon};
  std::vector<Arc> arcs;
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) {
    par.push_back(0);
    w.push_back(1 + (i * 7919) % 9);
    tx.push_back(static_cast<TaxonId>(i));
    inst.names.push_back("t" + std::to_string(i));
    if (i) arcs.push_back({static_cast<TaxonId>((i - 1) / 2), static_cast<TaxonId>(i)});
  }
  inst.tree = PhyloTree(par, w, tx, n, PhyloTree::Arity::relaxed);
  inst.web = FoodWeb(n, std::move(arcs));
  inst.k = k;
  inst.D = 1;
  return inst;
}

// On that web the viable sets are the subtrees hanging from t0, so the
// optimum is a rooted tree knapsack over the heap layout.
Weight ref_out_tree_optimum(const Instance& inst) {
  const std::size_t n = inst.n();
  const std::size_t cap = std::min<std::size_t>(inst.k, n);
  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min() / 2;
  std::vector<std::vector<std::int64_t>> best(n);  // best[v][s]: subtree rooted at v with s taxa
  for (std::size_t v = n; v-- > 0;) {
    std::vector<std::int64_t> cur(2, kNone);
    cur[1] = static_cast<std::int64_t>(inst.tree.weight(inst.tree.leaf(static_cast<TaxonId>(v))));
    for (std::size_t c : {2 * v + 1, 2 * v + 2}) {
      if (c >= n) continue;
      std::vector<std::int64_t> next(std::min(cap, cur.size() - 1 + best[c].size() - 1) + 1, kNone);
      for (std::size_t a = 1; a < cur.size(); ++a) {
        if (cur[a] == kNone) continue;
        next[a] = std::max(next[a], cur[a]);
        for (std::size_t b = 1; b < best[c].size() && a + b <= cap; ++b)
          if (best[c][b] != kNone) next[a + b] = std::max(next[a + b], cur[a] + best[c][b]);
      }
      cur = std::move(next);
      best[c].clear();
      best[c].shrink_to_fit();
    }
    best[v] = std::move(cur);
  }
  std::int64_t out = 0;
  if (cap > 0)
    for (std::int64_t x : best[0]) out = std::max(out, x);
  return static_cast<Weight>(out);
}

std::vector<NiceTreeDecomposition> scaling_decompositions;

void criterion_scaling() {
  bool knapsack_ok = true;
  for (std::size_t n = 1; n <= 14; ++n)
    for (std::uint64_t k = 0; k <= n; k += 3) {
      const Instance small = out_tree_star(n, k);
      knapsack_ok = knapsack_ok && ref_out_tree_optimum(small) == ref_optimum(small).value;
    }
  Instance big = out_tree_star(kTwTaxa, kTwK);
  auto t0 = std::chrono::steady_clock::now();
  auto nice = build_nice_tree_decomposition(big.web);
  auto best = max_pd_by_treewidth(big, nice);
  const double tw_secs = seconds_since(t0);
  bool tw_ok = knapsack_ok && best && best->S.count() <= kTwK && is_viable(big.web, best->S) && pd(big.tree, best->S) == best->value;
  const Weight ref = ref_out_tree_optimum(big);
  tw_ok = tw_ok && best->value == ref;
  big.D = ref;
  Answer yes = solve_spdd_by_treewidth(big, nice);
  tw_ok = tw_ok && yes && is_solution(big, yes->taxa);
  big.D = ref + 1;
  tw_ok = tw_ok && !solve_spdd_by_treewidth(big, nice);
  scaling_decompositions.push_back(std::move(nice));

  double flow_worst = 0;
  bool flow_ok = true;
  for (std::uint64_t run = 0; run < kFlowRuns; ++run) {
    Instance inst = gen::gen_source_separating(kFlowTaxa, 0.5, 0.4, 0.5, 700'000 + run, 20);
    auto t1 = std::chrono::steady_clock::now();
    auto sel = max_pd_source_separating(inst);
    Answer a = solve_pdd_source_separating_flow(inst);
    flow_worst = std::max(flow_worst, seconds_since(t1));
    flow_ok = flow_ok && sel && is_viable(inst.web, sel->S) && sel->S.count() <= inst.k &&
              a.has_value() == (sel->value >= inst.D) && (!a || is_solution(inst, a->taxa));
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "treewidth n=%zu k=%llu: %.2f s (limit %.0f), optimum %llu, checks %s | flow n=%zu: worst %.3f s "
                "(limit %.0f), checks %s",
                kTwTaxa, static_cast<unsigned long long>(kTwK), tw_secs, kTwSeconds,
                static_cast<unsigned long long>(best ? best->value : 0), tw_ok ? "ok" : "failed", kFlowTaxa,
                flow_worst, kFlowSeconds, flow_ok ? "ok" : "failed");
  report(7, "scaling sanity", tw_ok && tw_secs < kTwSeconds && flow_ok && flow_worst < kFlowSeconds, buf);
}

// 8 ------------------------------------------------------------------------

void criterion_audits() {
  Tally valid;
  auto check = [&](const FoodWeb& web, const NiceTreeDecomposition& nice, const std::string& what) {
    ++valid.checked;
    auto adj = web.underlying_adjacency();
    if (!validate_decomposition(nice, adj).empty()) return valid.fail(what);
    if (!validate_decomposition(read_decomposition(write_decomposition(nice)), adj).empty())
      valid.fail(what + " after text round trip");
  };
  for (std::size_t i = 0; i < corpus.size(); ++i)
    check(corpus[i].web, build_nice_tree_decomposition(corpus[i].web), "corpus " + std::to_string(i));
  for (std::size_t n : {4u, 6u, 8u})
    for (const auto& G : cubic_graphs(n)) {
      Instance inst = gen::gen_from_vertex_cover(G, n / 2);
      check(inst.web, build_nice_tree_decomposition(inst.web), "vertex cover n=" + std::to_string(n));
    }
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Instance rb = gen::gen_from_red_blue_nonblocker(gen::random_bipartite(2 + seed % 5, 1 + seed % 4, 0.5, seed), 1);
    check(rb.web, build_nice_tree_decomposition(rb.web), "red-blue seed " + std::to_string(seed));
    Instance sc = gen::gen_from_set_cover(gen::random_set_cover(2 + seed % 5, 1 + seed % 5, 0.4, seed), 2);
    check(sc.web, build_nice_tree_decomposition(sc.web), "set cover seed " + std::to_string(seed));
    Instance ss = gen::gen_source_separating(5 + seed, 0.5, 0.5, 0.5, seed);
    check(ss.web, build_nice_tree_decomposition(ss.web), "source separating seed " + std::to_string(seed));
  }
  const Instance big = out_tree_star(kTwTaxa, kTwK);
  for (const auto& nice : scaling_decompositions) check(big.web, nice, "scaling instance");

  Tally audit;
  std::size_t cells = 0;
  for (std::uint64_t seed = 0; seed < kAuditInstances; ++seed) {
    gen::RandomParams p;
    p.n = 1 + seed % kAuditMaxTaxa;
    p.seed = 800'000 + seed;
    p.tree = gen::TreeShape::star;
    p.web = static_cast<gen::WebShape>(seed % 7);
    p.modulator = seed % 2;
    p.density = 0.3 + 0.1 * static_cast<double>(seed % 5);
    Instance inst = gen::gen_random(p);
    inst.k = 1 + seed % inst.n();
    ++audit.checked;
    TableAudit a = audit_treewidth_tables(inst, build_nice_tree_decomposition(inst.web));
    cells += a.cells;
    if (!a.first_mismatch.empty()) audit.fail("seed " + std::to_string(seed) + " " + a.first_mismatch);
  }
  report(8, "structural audits", valid.bad == 0 && audit.bad == 0 && audit.checked == kAuditInstances,
         "decompositions " + valid.summary() + " | tables " + audit.summary() + ", " + std::to_string(cells) +
             " cells");
}

}  // namespace

int main() {
  criterion_general();
  criterion_per_solver();
  criterion_one_sided();
  criterion_reductions();
  criterion_generators();
  criterion_figure();
  criterion_scaling();
  criterion_audits();
  return all_ok ? 0 : 1;
}
