#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdd/colorcoding.hpp"
#include "pdd/core.hpp"
#include "pdd/diversity.hpp"
#include "pdd/io/instance_format.hpp"
#include "pdd/oracle.hpp"
#include "pdd/pattern.hpp"
#include "pdd/preprocess.hpp"
#include "pdd/structural.hpp"

namespace pdd {

enum class Algorithm { automatic, oracle, cc_k, pattern, d, cluster, cocluster, tw, flow, outforest };

inline const std::vector<std::pair<Algorithm, const char*>>& algorithm_names() {
  static const std::vector<std::pair<Algorithm, const char*>> names = {
      {Algorithm::automatic, "auto"}, {Algorithm::oracle, "oracle"},       {Algorithm::cc_k, "cc-k"},
      {Algorithm::pattern, "pattern"}, {Algorithm::d, "d"},                {Algorithm::cluster, "cluster"},
      {Algorithm::cocluster, "cocluster"}, {Algorithm::tw, "tw"},         {Algorithm::flow, "flow"},
      {Algorithm::outforest, "outforest"}};
  return names;
}

inline const char* algorithm_name(Algorithm a) {
  for (const auto& [x, s] : algorithm_names())
    if (x == a) return s;
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  for (const auto& [x, name] : algorithm_names())
    if (s == name) return x;
  throw DomainError("unknown algorithm '" + s + "'");
}

// Selection thresholds and solver options; loadable from JSON.
struct Policy {
  Algorithm algorithm = Algorithm::automatic;
  SolveOptions solve;
  std::uint64_t oracle_budget = kDefaultEnumerationBudget;  // subsets the oracle may scan
  std::uint64_t tiny_oracle = 20'000;       // below this the oracle goes first
  std::uint64_t tw_max_cells = 1'000'000'000;  // 9^width * n * k
  std::size_t max_modulator = 8;            // largest cluster/co-cluster modulator searched
  bool preprocess = true;
  bool optimize = false;                    // also report the optimum PD
};

inline void from_json(const nlohmann::json& j, Policy& p) {
  if (j.contains("algorithm")) p.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  if (j.contains("mode")) {
    const auto m = j.at("mode").get<std::string>();
    if (m != "exact" && m != "mc") throw DomainError("mode must be exact or mc");
    p.solve.mode = m == "exact" ? Mode::exact : Mode::monte_carlo;
  }
  if (j.contains("seed")) p.solve.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("epsilon")) p.solve.epsilon = j.at("epsilon").get<double>();
  if (j.contains("budget")) p.solve.budget = j.at("budget").get<std::uint64_t>();
  if (j.contains("oracle_budget")) p.oracle_budget = j.at("oracle_budget").get<std::uint64_t>();
  if (j.contains("tiny_oracle")) p.tiny_oracle = j.at("tiny_oracle").get<std::uint64_t>();
  if (j.contains("tw_max_cells")) p.tw_max_cells = j.at("tw_max_cells").get<std::uint64_t>();
  if (j.contains("max_modulator")) p.max_modulator = j.at("max_modulator").get<std::size_t>();
  if (j.contains("preprocess")) p.preprocess = j.at("preprocess").get<bool>();
  if (j.contains("optimize")) p.optimize = j.at("optimize").get<bool>();
}

inline void to_json(nlohmann::json& j, const Policy& p) {
  j = {{"algorithm", algorithm_name(p.algorithm)},
       {"mode", mode_name(p.solve.mode)},
       {"seed", p.solve.seed},
       {"epsilon", p.solve.epsilon},
       {"budget", p.solve.budget},
       {"oracle_budget", p.oracle_budget},
       {"tiny_oracle", p.tiny_oracle},
       {"tw_max_cells", p.tw_max_cells},
       {"max_modulator", p.max_modulator},
       {"preprocess", p.preprocess},
       {"optimize", p.optimize}};
}

struct Parameters {
  std::size_t n = 0, arcs = 0;
  std::uint64_t k = 0;
  Weight D = 0;
  std::int64_t kbar = 0, Dbar = 0;
  int height = 0;
  bool star = false;
  std::optional<std::size_t> d_cluster, d_cocluster;  // unset above policy.max_modulator
  int width = -1;  // of the heuristic decomposition
  std::size_t max_prey = 0;
  bool isolated_arcs = false, source_separating = false;
};

inline void to_json(nlohmann::json& j, const Parameters& p) {
  j = {{"n", p.n},       {"arcs", p.arcs},     {"k", p.k},           {"D", p.D},
       {"kbar", p.kbar}, {"Dbar", p.Dbar},     {"height", p.height}, {"star", p.star},
       {"width", p.width}, {"max_prey", p.max_prey}, {"isolated_arcs", p.isolated_arcs},
       {"source_separating", p.source_separating}};
  j["d_cluster"] = p.d_cluster ? nlohmann::json(*p.d_cluster) : nlohmann::json(nullptr);
  j["d_cocluster"] = p.d_cocluster ? nlohmann::json(*p.d_cocluster) : nlohmann::json(nullptr);
}

struct Measured {
  Parameters params;
  std::optional<Modulator> cluster, cocluster;
  std::optional<NiceTreeDecomposition> nice;
};

inline Measured measure(const Instance& inst, const Policy& policy) {
  Measured m;
  Parameters& p = m.params;
  p.n = inst.n();
  p.arcs = inst.web.num_arcs();
  p.k = inst.k;
  p.D = inst.D;
  p.kbar = inst.kbar();
  p.Dbar = inst.Dbar();
  p.height = inst.tree.height();
  p.star = inst.tree.is_star();
  for (std::size_t x = 0; x < p.n; ++x) p.max_prey = std::max(p.max_prey, inst.web.prey(static_cast<TaxonId>(x)).size());
  p.isolated_arcs = has_isolated_arcs_only(inst.web);
  p.source_separating = p.isolated_arcs && is_source_separating(inst);
  m.cluster = find_modulator(inst.web, GraphClass::cluster, policy.max_modulator);
  m.cocluster = find_modulator(inst.web, GraphClass::cocluster, policy.max_modulator);
  if (m.cluster) p.d_cluster = m.cluster->size();
  if (m.cocluster) p.d_cocluster = m.cocluster->size();
  if (p.n > 0) {
    m.nice = build_nice_tree_decomposition(inst.web);
    p.width = m.nice->width();
  }
  return m;
}

namespace detail {

inline std::uint64_t estimate_cost(Algorithm a, const Instance& inst, const Measured& m, const Policy& policy) {
  const Parameters& p = m.params;
  const std::uint64_t n = p.n, V = inst.tree.size();
  const std::uint64_t k = std::min<std::uint64_t>(p.k, n);
  const double eps = policy.solve.epsilon;
  switch (a) {
    case Algorithm::oracle: return sat_mul(binomial(n, std::min(k, n - k)), n + 1);
    case Algorithm::cc_k: return sat_mul(sat_mul(monte_carlo_hash_count(k + 1, eps), pow3(k + 1)), n + p.arcs + 1);
    case Algorithm::tw: {
      const std::uint64_t w = static_cast<std::uint64_t>(std::max(0, p.width)) + 1;
      return sat_mul(sat_mul(pow3(2 * w), m.nice ? m.nice->size() : n), k + 1);
    }
    case Algorithm::cluster: {
      const std::uint64_t d = p.d_cluster.value_or(64);
      return sat_mul(sat_mul(sat_pow2(d), pow3(d)), sat_mul(n + 1, k + 1));
    }
    case Algorithm::cocluster: {
      const std::uint64_t d = p.d_cocluster.value_or(64);
      return sat_mul(sat_mul(sat_pow2(d), sat_mul(n + 1, n + 1)), sat_mul(pow3(d), sat_mul(V, (k + 1) * (k + 1))));
    }
    case Algorithm::flow: return sat_mul(sat_mul(k + 1, 2 * V + 2 * n + 4), 2 + 2 * static_cast<std::uint64_t>(std::log2(k + 2)));
    case Algorithm::outforest: {
      const std::uint64_t kbar = p.kbar > 0 ? static_cast<std::uint64_t>(p.kbar) : 0;
      const std::uint64_t width = std::min<std::uint64_t>(3 * kbar, n);
      return sat_mul(monte_carlo_universal_count(width, eps), sat_mul(n + 1, sat_mul(n + 1, kbar + 1)));
    }
    case Algorithm::pattern: {
      const std::uint64_t top = std::min<std::uint64_t>(V, sat_mul(k, static_cast<std::uint64_t>(p.height)) + 1);
      return sat_mul(sat_mul(sat_pow(top, top - 1), monte_carlo_hash_count(top, eps)), V);
    }
    case Algorithm::d: {
      if (p.D > 64) return UINT64_MAX;
      return sat_mul(sat_mul(pow3(k + 1), sat_pow2(p.D)),
                     sat_mul(monte_carlo_hash_count(p.D, eps), monte_carlo_hash_count(k, eps)));
    }
    case Algorithm::automatic: break;
  }
  return UINT64_MAX;
}

inline bool applicable(Algorithm a, const Measured& m, const Policy& policy, std::string& why) {
  const Parameters& p = m.params;
  switch (a) {
    case Algorithm::cc_k:
      if (!p.star) why = "tree is not a star";
      break;
    case Algorithm::tw:
      if (!p.star) why = "tree is not a star";
      else if (!m.nice) why = "empty instance";
      break;
    case Algorithm::cluster:
      if (!p.star) why = "tree is not a star";
      else if (!m.cluster) why = "no cluster modulator within " + std::to_string(policy.max_modulator);
      break;
    case Algorithm::cocluster:
      if (!m.cocluster) why = "no co-cluster modulator within " + std::to_string(policy.max_modulator);
      break;
    case Algorithm::flow:
      if (!p.source_separating) why = "not source-separating with isolated arcs";
      break;
    case Algorithm::outforest:
      if (p.max_prey > 1) why = "a taxon has more than one prey";
      break;
    default: break;
  }
  return why.empty();
}

// Native maximisers; the rest answer decisions only.
inline std::optional<Selection> run_max(Algorithm a, const Instance& inst, const Measured& m, const Policy& policy) {
  const SolveOptions& opt = policy.solve;
  switch (a) {
    case Algorithm::oracle: {
      Solution s = brute_force_optimum(inst, OracleOptions{policy.oracle_budget});
      return Selection{s.taxa, s.pd_value};
    }
    case Algorithm::cc_k: {
      Solution s = optimize_spdd_by_k(inst, opt);
      return Selection{s.taxa, s.pd_value};
    }
    case Algorithm::tw: {
      const std::uint64_t w = static_cast<std::uint64_t>(std::max(0, m.params.width));
      const std::uint64_t cells = sat_mul(sat_mul(sat_pow(9, w), inst.n()), std::min<std::uint64_t>(inst.k, inst.n()) + 1);
      if (cells > policy.tw_max_cells) throw BudgetExceeded("treewidth DP above the policy's cell limit");
      return max_pd_by_treewidth(inst, *m.nice, opt);
    }
    case Algorithm::cluster: return max_pd_by_cluster_modulator(inst, *m.cluster, opt);
    case Algorithm::cocluster: return max_pd_by_cocluster_modulator(inst, *m.cocluster, opt);
    case Algorithm::flow: return max_pd_source_separating(inst, opt);
    default: break;
  }
  throw std::logic_error("no maximiser for this algorithm");
}

inline bool has_max(Algorithm a) {
  return a == Algorithm::oracle || a == Algorithm::cc_k || a == Algorithm::tw || a == Algorithm::cluster ||
         a == Algorithm::cocluster || a == Algorithm::flow;
}

inline Answer run_decide(Algorithm a, const Instance& inst, const Measured& m, const Policy& policy) {
  const SolveOptions& opt = policy.solve;
  switch (a) {
    case Algorithm::oracle: return brute_force_decide(inst, OracleOptions{policy.oracle_budget});
    case Algorithm::cc_k: return solve_spdd_by_k(inst, opt);
    case Algorithm::pattern: return solve_pdd_by_k_height(inst, opt);
    case Algorithm::d: return solve_pdd_by_d(inst, opt);
    case Algorithm::outforest: return solve_pdd_outforest_by_kbar(inst, opt);
    default: break;
  }
  auto best = run_max(a, inst, m, policy);
  if (!best || best->value < inst.D) return std::nullopt;
  return make_solution(inst, best->S);
}

// Largest D' answered yes, by bisection over the decision form.
inline Selection bisect_optimum(Algorithm a, const Instance& inst, const Measured& m, const Policy& policy) {
  Selection best{TaxonSet(inst.n()), 0};
  Weight lo = 0, hi = inst.tree.total_weight();
  Instance probe = inst;
  while (lo < hi) {
    const Weight mid = lo + (hi - lo + 1) / 2;
    probe.D = mid;
    Answer ans = run_decide(a, probe, m, policy);
    if (ans) {
      best = {ans->taxa, ans->pd_value};
      lo = ans->pd_value;
    } else {
      hi = mid - 1;
    }
  }
  return best;
}

}  // namespace detail

struct RunRecord {
  std::string digest;
  std::string algorithm;
  std::string mode;
  std::uint64_t seed = 0;
  std::string decision;  // yes, no or refused
  std::vector<std::string> witness;
  std::optional<Weight> pd_value;
  std::optional<Weight> optimum;
  double wall_ms = 0;
  std::vector<std::string> reductions;
  std::vector<std::string> refusals;
  Parameters params;
  std::string message;
};

inline void to_json(nlohmann::json& j, const RunRecord& r) {
  j = {{"digest", r.digest},       {"algorithm", r.algorithm}, {"mode", r.mode},
       {"seed", r.seed},           {"decision", r.decision},   {"witness", r.witness},
       {"wall_ms", r.wall_ms},     {"reductions", r.reductions}, {"refusals", r.refusals},
       {"parameters", r.params}};
  j["pd"] = r.pd_value ? nlohmann::json(*r.pd_value) : nlohmann::json(nullptr);
  j["optimum"] = r.optimum ? nlohmann::json(*r.optimum) : nlohmann::json(nullptr);
  if (!r.message.empty()) j["message"] = r.message;
}

// Candidate order: the oracle on tiny inputs, then by estimated cost.
inline std::vector<Algorithm> candidate_order(const Instance& inst, const Measured& m, const Policy& policy,
                                              std::vector<std::string>* skipped = nullptr) {
  if (policy.algorithm != Algorithm::automatic) return {policy.algorithm};
  std::vector<std::pair<std::uint64_t, Algorithm>> ranked;
  for (const auto& [a, name] : algorithm_names()) {
    if (a == Algorithm::automatic) continue;
    std::string why;
    if (!detail::applicable(a, m, policy, why)) {
      if (skipped) skipped->push_back(std::string(name) + ": " + why);
      continue;
    }
    std::uint64_t cost = detail::estimate_cost(a, inst, m, policy);
    if (a == Algorithm::oracle && cost <= policy.tiny_oracle) cost = 0;
    ranked.push_back({cost, a});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Algorithm> out;
  for (const auto& r : ranked) out.push_back(r.second);
  return out;
}

inline RunRecord portfolio_solve(const Instance& inst, const Policy& policy = {}) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.digest = io::digest(inst);
  rec.mode = mode_name(policy.solve.mode);
  rec.seed = policy.solve.seed;
  auto finish = [&]() {
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
  };
  auto emit_yes = [&](const TaxonSet& S) {
    if (!is_solution(inst, S)) throw std::logic_error(rec.algorithm + " produced a witness that fails verification");
    rec.decision = "yes";
    rec.witness.clear();
    for_each_member(S, [&](TaxonId x) { rec.witness.push_back(inst.names[x]); });
    rec.pd_value = pd(inst.tree, S);
  };

  Instance work = inst;
  std::vector<TaxonId> origin(inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) origin[i] = static_cast<TaxonId>(i);
  if (policy.preprocess) {
    Preprocessed pre = preprocess(inst);
    if (!pre.report.removed_taxa.empty())
      rec.reductions.push_back("reachability: removed " + std::to_string(pre.report.removed_taxa.size()) + " taxa");
    if (!pre.report.removed_arcs.empty())
      rec.reductions.push_back("redundant prey: removed " + std::to_string(pre.report.removed_arcs.size()) + " arcs");
    if (pre.report.early && !policy.optimize) {
      rec.reductions.push_back("heavy edge: accepted");
      rec.algorithm = "preprocess";
      rec.params = measure(pre.instance, policy).params;
      emit_yes(pre.report.early->taxa);
      return finish();
    }
    work = std::move(pre.instance);
    origin = std::move(pre.report.origin);
  }
  Measured m = measure(work, policy);
  rec.params = m.params;
  for (Algorithm a : candidate_order(work, m, policy, &rec.refusals)) {
    rec.algorithm = algorithm_name(a);
    try {
      if (policy.optimize) {
        Selection best = detail::has_max(a) ? detail::run_max(a, work, m, policy).value_or(Selection{TaxonSet(work.n()), 0})
                                            : detail::bisect_optimum(a, work, m, policy);
        const TaxonSet S = lift(best.S, origin, inst.n());
        rec.optimum = pd(inst.tree, S);
        if (*rec.optimum >= inst.D) {
          emit_yes(S);
        } else {
          rec.decision = "no";
        }
      } else {
        Answer ans = detail::run_decide(a, work, m, policy);
        if (ans) {
          emit_yes(lift(ans->taxa, origin, inst.n()));
        } else {
          rec.decision = "no";
        }
      }
      return finish();
    } catch (const BudgetExceeded& e) {
      rec.refusals.push_back(rec.algorithm + ": " + e.what());
    } catch (const PreconditionError& e) {
      rec.refusals.push_back(rec.algorithm + ": " + e.what());
    }
  }
  rec.algorithm = policy.algorithm == Algorithm::automatic ? "none" : algorithm_name(policy.algorithm);
  rec.decision = "refused";
  rec.message = "no applicable solver";
  return finish();
}

struct VerifyReport {
  bool known_taxa = true, size_ok = false, viable = false, diversity_ok = false;
  std::size_t size = 0;
  Weight pd_value = 0;
  std::vector<std::string> unknown;
  std::optional<std::vector<Arc>> certificate;  // one feeding arc per non-source
  bool ok() const { return known_taxa && size_ok && viable && diversity_ok; }
};

inline VerifyReport verify(const Instance& inst, const std::vector<std::string>& claimed) {
  VerifyReport r;
  TaxonSet S(inst.n());
  for (const auto& name : claimed) {
    auto it = std::find(inst.names.begin(), inst.names.end(), name);
    if (it == inst.names.end()) {
      r.known_taxa = false;
      r.unknown.push_back(name);
      continue;
    }
    S.set(static_cast<std::size_t>(it - inst.names.begin()));
  }
  r.size = S.count();
  r.size_ok = r.size <= inst.k;
  r.certificate = viability_certificate(inst.web, S);
  r.viable = r.certificate.has_value();
  r.pd_value = pd(inst.tree, S);
  r.diversity_ok = r.pd_value >= inst.D;
  return r;
}

inline nlohmann::json verify_json(const Instance& inst, const VerifyReport& r) {
  nlohmann::json j = {{"ok", r.ok()},       {"known_taxa", r.known_taxa}, {"size", r.size},
                      {"k", inst.k},         {"size_ok", r.size_ok},       {"viable", r.viable},
                      {"pd", r.pd_value},    {"D", inst.D},                {"diversity_ok", r.diversity_ok}};
  if (!r.unknown.empty()) j["unknown"] = r.unknown;
  if (r.certificate) {
    nlohmann::json cert = nlohmann::json::array();
    for (const Arc& a : *r.certificate) cert.push_back({inst.names[a.prey], inst.names[a.predator]});
    j["certificate"] = cert;
  }
  return j;
}

}  // namespace pdd
