#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdd/generators.hpp"
#include "pdd/io/instance_format.hpp"
#include "pdd/portfolio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kYes = 0, kNo = 1, kError = 2;

std::size_t thread_count() {
  const char* env = std::getenv("PDD_THREADS");
  if (!env || !*env) return 1;
  try {
    return std::max<std::size_t>(1, std::stoul(env));
  } catch (const std::exception&) {
    throw pdd::DomainError("PDD_THREADS must be a positive integer");
  }
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void print_table(std::ostream& os, const std::vector<std::pair<std::string, pdd::RunRecord>>& rows) {
  os << std::left << std::setw(28) << "instance" << std::setw(11) << "algorithm" << std::setw(9) << "decision"
     << std::setw(8) << "pd" << std::setw(6) << "n" << std::setw(6) << "k" << std::setw(8) << "D" << "ms\n";
  for (const auto& [name, r] : rows)
    os << std::left << std::setw(28) << name << std::setw(11) << r.algorithm << std::setw(9) << r.decision
       << std::setw(8) << (r.pd_value ? std::to_string(*r.pd_value) : "-") << std::setw(6) << r.params.n
       << std::setw(6) << r.params.k << std::setw(8) << r.params.D << std::fixed << std::setprecision(2)
       << r.wall_ms << "\n";
}

int exit_code(const pdd::RunRecord& r) {
  if (r.decision == "yes") return kYes;
  if (r.decision == "no") return kNo;
  return kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phylogenetic diversity with dependencies: solvers, verifier and generators"};
  app.require_subcommand(1);

  pdd::Policy policy;
  std::string algorithm = "auto", mode = "exact", policy_file, file, format = "json";
  std::uint64_t seed = 0, budget = policy.solve.budget;
  double epsilon = policy.solve.epsilon;
  bool optimize = false, no_preprocess = false;

  auto add_solver_options = [&](CLI::App* cmd) {
    cmd->add_option("--algorithm", algorithm, "solver to run")
        ->check(CLI::IsMember({"auto", "oracle", "cc-k", "pattern", "d", "cluster", "cocluster", "tw", "flow",
                               "outforest"}));
    cmd->add_option("--mode", mode, "exact or Monte Carlo color coding")->check(CLI::IsMember({"exact", "mc"}));
    cmd->add_option("--seed", seed, "seed for Monte Carlo families");
    cmd->add_option("--epsilon", epsilon, "Monte Carlo failure probability")->check(CLI::Range(1e-9, 0.999999));
    cmd->add_option("--budget", budget, "work limit per solver");
    cmd->add_option("--policy", policy_file, "JSON policy file; command-line flags override it")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--optimize", optimize, "also report the optimum PD");
    cmd->add_flag("--no-preprocess", no_preprocess, "skip the reduction rules");
    cmd->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  };

  CLI::App* solve = app.add_subcommand("solve", "decide an instance");
  add_solver_options(solve);
  solve->add_option("FILE", file, "instance file")->required()->check(CLI::ExistingFile);

  CLI::App* verify = app.add_subcommand("verify", "check a claimed solution");
  std::string solution;
  verify->add_option("FILE", file, "instance file")->required()->check(CLI::ExistingFile);
  verify->add_option("--solution", solution, "comma-separated taxon names")->required();

  CLI::App* gen = app.add_subcommand("gen", "generate an instance");
  std::string family = "random", out, tree = "random", web = "dag";
  std::size_t n = 8, red = 4, blue = 4, universe = 4, sets = 4, modulator = 0;
  std::uint64_t k = 2;
  double density = 0.3, k_fraction = 0.5, d_fraction = 0.5;
  pdd::Weight min_weight = 1, max_weight = 5;
  gen->add_option("--family", family, "source problem or random")
      ->check(CLI::IsMember({"vertex-cover", "red-blue-nonblocker", "set-cover", "random"}));
  gen->add_option("--seed", seed, "seed");
  gen->add_option("--n", n, "taxa (random) or graph vertices (vertex-cover)");
  gen->add_option("--k", k, "source-problem solution size");
  gen->add_option("--red", red, "red vertices");
  gen->add_option("--blue", blue, "blue vertices");
  gen->add_option("--universe", universe, "set-cover universe size");
  gen->add_option("--sets", sets, "set-cover family size");
  gen->add_option("--density", density, "arc or edge density")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--tree", tree, "tree shape")->check(CLI::IsMember({"star", "caterpillar", "random", "shallow"}));
  gen->add_option("--web", web, "food-web shape")
      ->check(CLI::IsMember({"dag", "cluster", "cocluster", "forest", "outforest", "isolated-arcs", "path",
                             "source-separating"}));
  gen->add_option("--modulator", modulator, "modulator size for cluster and co-cluster webs");
  gen->add_option("--k-fraction", k_fraction, "k as a fraction of n")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--d-fraction", d_fraction, "D as a fraction of the total weight")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--min-weight", min_weight, "smallest edge weight");
  gen->add_option("--max-weight", max_weight, "largest edge weight");
  gen->add_option("--out", out, "output file (default stdout)");

  CLI::App* bench = app.add_subcommand("bench", "solve every .pdd file of a directory");
  std::string dir;
  add_solver_options(bench);
  bench->add_option("DIR", dir, "directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  auto build_policy = [&]() {
    if (!policy_file.empty()) {
      std::ifstream in(policy_file);
      policy = json::parse(in).get<pdd::Policy>();
    }
    auto given = [&](CLI::App* cmd, const char* opt) { return cmd->count(opt) > 0; };
    CLI::App* cmd = solve->parsed() ? solve : bench;
    if (policy_file.empty() || given(cmd, "--algorithm")) policy.algorithm = pdd::parse_algorithm(algorithm);
    if (policy_file.empty() || given(cmd, "--mode"))
      policy.solve.mode = mode == "exact" ? pdd::Mode::exact : pdd::Mode::monte_carlo;
    if (policy_file.empty() || given(cmd, "--seed")) policy.solve.seed = seed;
    if (policy_file.empty() || given(cmd, "--epsilon")) policy.solve.epsilon = epsilon;
    if (policy_file.empty() || given(cmd, "--budget")) policy.solve.budget = budget;
    if (optimize) policy.optimize = true;
    if (no_preprocess) policy.preprocess = false;
  };

  try {
    if (solve->parsed()) {
      build_policy();
      pdd::Instance inst = pdd::io::read_instance_file(file);
      pdd::RunRecord r = pdd::portfolio_solve(inst, policy);
      if (format == "table")
        print_table(std::cout, {{fs::path(file).filename().string(), r}});
      else
        std::cout << json(r).dump() << "\n";
      return exit_code(r);
    }
    if (verify->parsed()) {
      pdd::Instance inst = pdd::io::read_instance_file(file);
      pdd::VerifyReport r = pdd::verify(inst, split_names(solution));
      std::cout << pdd::verify_json(inst, r).dump() << "\n";
      return r.ok() ? kYes : kNo;
    }
    if (gen->parsed()) {
      pdd::Instance inst;
      std::string header;
      if (family == "vertex-cover") {
        pdd::gen::Graph G = pdd::gen::random_cubic_graph(n, seed);
        inst = pdd::gen::gen_from_vertex_cover(G, k);
        header = "# vertex-cover k=" + std::to_string(k) + " edges:";
        for (auto [u, v] : G.edges) header += " " + std::to_string(u) + "-" + std::to_string(v);
      } else if (family == "red-blue-nonblocker") {
        pdd::gen::BipartiteGraph G = pdd::gen::random_bipartite(red, blue, density, seed);
        inst = pdd::gen::gen_from_red_blue_nonblocker(G, k);
        header = "# red-blue-nonblocker k=" + std::to_string(k) + " red=" + std::to_string(red) +
                 " blue=" + std::to_string(blue) + " edges:";
        for (auto [r, b] : G.edges) header += " r" + std::to_string(r) + "-b" + std::to_string(b);
      } else if (family == "set-cover") {
        pdd::gen::SetCoverInstance sc = pdd::gen::random_set_cover(universe, sets, density, seed);
        inst = pdd::gen::gen_from_set_cover(sc, k);
        header = "# set-cover k=" + std::to_string(k) + " universe=" + std::to_string(universe) + " sets:";
        for (const auto& q : sc.sets) {
          header += " {";
          for (std::size_t i = 0; i < q.size(); ++i) header += (i ? "," : "") + std::to_string(q[i]);
          header += "}";
        }
      } else if (web == "source-separating") {
        inst = pdd::gen::gen_source_separating(n, density, k_fraction, d_fraction, seed, max_weight);
        header = "# random source-separating n=" + std::to_string(n) + " seed=" + std::to_string(seed);
      } else {
        pdd::gen::RandomParams p;
        p.n = n;
        p.density = density;
        p.min_weight = min_weight;
        p.max_weight = max_weight;
        p.tree = tree == "star"          ? pdd::gen::TreeShape::star
                 : tree == "caterpillar" ? pdd::gen::TreeShape::caterpillar
                 : tree == "shallow"     ? pdd::gen::TreeShape::shallow
                                         : pdd::gen::TreeShape::random;
        const std::vector<std::pair<std::string, pdd::gen::WebShape>> webs = {
            {"dag", pdd::gen::WebShape::dag},           {"cluster", pdd::gen::WebShape::cluster},
            {"cocluster", pdd::gen::WebShape::cocluster}, {"forest", pdd::gen::WebShape::forest},
            {"outforest", pdd::gen::WebShape::outforest}, {"isolated-arcs", pdd::gen::WebShape::isolated_arcs},
            {"path", pdd::gen::WebShape::path}};
        for (const auto& [name, shape] : webs)
          if (name == web) p.web = shape;
        p.modulator = modulator;
        p.k_fraction = k_fraction;
        p.d_fraction = d_fraction;
        p.seed = seed;
        inst = pdd::gen::gen_random(p);
        header = "# random n=" + std::to_string(n) + " tree=" + tree + " web=" + web + " seed=" + std::to_string(seed);
      }
      const std::string text = header + "\n" + pdd::io::serialize(inst);
      if (out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out);
        if (!f) throw pdd::Error("cannot write '" + out + "'");
        f << text;
      }
      return 0;
    }
    if (bench->parsed()) {
      build_policy();
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".pdd") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      std::vector<std::pair<std::string, pdd::RunRecord>> rows(files.size());
      std::vector<std::string> errors(files.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&]() {
        for (std::size_t i; (i = next++) < files.size();) {
          rows[i].first = files[i].filename().string();
          try {
            rows[i].second = pdd::portfolio_solve(pdd::io::read_instance_file(files[i].string()), policy);
          } catch (const std::exception& e) {
            errors[i] = e.what();
            rows[i].second.decision = "error";
            rows[i].second.message = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < std::min(thread_count(), std::max<std::size_t>(files.size(), 1)); ++t)
        pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      bool failed = false;
      if (format == "table") {
        print_table(std::cout, rows);
      } else {
        for (const auto& [name, r] : rows) {
          json j = r;
          j["file"] = name;
          std::cout << j.dump() << "\n";
        }
      }
      for (std::size_t i = 0; i < files.size(); ++i)
        if (!errors[i].empty()) {
          std::cerr << files[i].string() << ": " << errors[i] << "\n";
          failed = true;
        }
      return failed ? kError : 0;
    }
  } catch (const pdd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
