// catbound: degree statistics, entropy-LP join bounds, exact homomorphism
// counts and the benchmark harness from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catbound/bench.hpp"
#include "catbound/entropy_lp.hpp"
#include "catbound/errors.hpp"
#include "catbound/graph.hpp"
#include "catbound/homcount.hpp"
#include "catbound/stats.hpp"

namespace cb = catbound;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInvariant = 4;
constexpr const char* kBudgetEnv = "CATBOUND_ORACLE_BUDGET";

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "'" + text + "' is not a comma-separated list of numbers");
    }
  }
  if (expected != 0 && out.size() != expected) {
    throw CLI::ValidationError(flag, "expects " + std::to_string(expected) + " comma-separated values");
  }
  return out;
}

std::uint64_t resolve_budget(std::uint64_t flag_value, bool flag_given) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv(kBudgetEnv)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError(kBudgetEnv, "must be a nonnegative integer");
    }
  }
  return cb::kDefaultHomBudget;
}

struct GridFlags {
  std::string star_p, bistar_pq, cat_p;

  void attach(CLI::App* app) {
    app->add_option("--star-p", star_p, "Star parameters, e.g. 0,1,2,3,4,5");
    app->add_option("--bistar-pq", bistar_pq, "Bi-star parameter values (all pairs), e.g. 2,3,4,5");
    app->add_option("--cat-p", cat_p, "Caterpillar endpoint parameters, e.g. 1,2,3");
  }

  cb::StatGrid grid() const {
    cb::StatGrid g;
    if (!star_p.empty()) g.star_p = parse_list(star_p, 0, "--star-p");
    if (!bistar_pq.empty()) g.bistar_pq = parse_list(bistar_pq, 0, "--bistar-pq");
    if (!cat_p.empty()) g.caterpillar_p = parse_list(cat_p, 0, "--cat-p");
    return g;
  }
};

// ---------------------------------------------------------------- stats

struct StatsCmd {
  std::string graph;
  bool domain = false, edges = false, maxdeg = false, transposed = false;
  std::vector<double> star;
  std::vector<std::string> bistar, catv, catn, catw;

  int run() const {
    const auto g = cb::load_edge_list_file(graph);
    const auto o = transposed ? cb::Orientation::Transposed : cb::Orientation::Forward;
    std::vector<cb::StatKey> keys;
    if (domain) keys.push_back(cb::StatKey::domain_size(o));
    if (edges) keys.push_back(cb::StatKey::edge_count(o));
    if (maxdeg) keys.push_back(cb::StatKey::max_degree(o));
    for (double p : star) keys.push_back(cb::StatKey::star(p, o));
    auto add = [&](cb::StatKind kind, const std::vector<std::string>& specs, const std::string& flag) {
      for (const auto& s : specs) keys.push_back({kind, parse_list(s, cb::parameter_count(kind), flag), o});
    };
    add(cb::StatKind::BiStar, bistar, "--bistar");
    add(cb::StatKind::CatV, catv, "--catv");
    add(cb::StatKind::CatN, catn, "--catn");
    add(cb::StatKind::CatW, catw, "--catw");
    if (keys.empty()) {
      keys = {cb::StatKey::domain_size(o), cb::StatKey::edge_count(o), cb::StatKey::max_degree(o)};
    }

    std::cout << "# statistic raw log\n";
    for (const auto& key : keys) {
      const auto rec = cb::compute_stat(g, key);
      std::cout << key.to_string() << ' '
                << (std::isinf(rec.raw_value) ? std::string("overflow") : cb::format_number(rec.raw_value)) << ' '
                << cb::format_number(rec.log_value) << '\n';
    }
    return 0;
  }
};

// ---------------------------------------------------------------- bound

struct BoundCmd {
  std::string graph, pattern, method = "www";
  std::vector<std::string> relations;
  bool certificate = false;
  double pivot_tolerance = 1e-9;
  GridFlags grid;

  cb::Query resolve_query() const {
    if (auto h = cb::find_pattern(pattern)) return cb::Query::from_pattern(*h);
    std::ifstream in(pattern);
    if (!in) throw std::runtime_error("'" + pattern + "' is neither a catalog pattern nor a readable file");
    return cb::load_query(in);
  }

  std::vector<cb::StatKey> keys() const {
    if (method == "edges") return {cb::StatKey::edge_count()};
    auto m = cb::parse_method(method);
    if (!m) throw CLI::ValidationError("--method", "unknown method '" + method + "'");
    return cb::method_stat_keys(*m, grid.grid());
  }

  int run() const {
    std::map<std::string, std::string> paths{{"G", graph}};
    for (const auto& spec : relations) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--relation", "expects NAME=PATH");
      paths[spec.substr(0, eq)] = spec.substr(eq + 1);
    }
    const auto query = resolve_query();
    const auto stat_keys = keys();

    std::map<std::string, std::vector<cb::StatRecord>> by_relation;
    std::vector<std::vector<cb::StatRecord>> per_atom;
    for (const auto& atom : query.atoms) {
      auto it = by_relation.find(atom.relation);
      if (it == by_relation.end()) {
        auto p = paths.find(atom.relation);
        if (p == paths.end()) throw std::runtime_error("no --relation given for '" + atom.relation + "'");
        const auto g = cb::load_edge_list_file(p->second);
        std::vector<cb::StatRecord> records;
        for (const auto& k : stat_keys) records.push_back(cb::compute_stat(g, k));
        it = by_relation.emplace(atom.relation, std::move(records)).first;
      }
      per_atom.push_back(it->second);
    }

    const auto lp = cb::build_lp(query, per_atom);
    for (const auto& w : lp.warnings) std::cerr << "warning: " << w << '\n';
    cb::SimplexOptions options;
    options.pivot_tolerance = pivot_tolerance;
    const auto report = cb::solve_bound(lp, options);

    std::cout << "pattern " << pattern << '\n'
              << "method " << method << '\n'
              << "status " << cb::status_name(report.status) << '\n'
              << "log_bound " << cb::format_number(report.log_bound) << '\n'
              << "bound " << cb::format_number(report.bound) << '\n';
    if (certificate && report.status == cb::LpStatus::Optimal && !lp.empty_relation) {
      double recombined = 0.0;
      for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const double w = report.dual_weights[i];
        if (w <= 1e-12) continue;
        recombined += w * lp.constraints[i].rhs;
        std::cout << "dual " << cb::format_number(w) << ' ' << lp.constraints[i].describe(lp.variable_names)
                  << '\n';
      }
      std::cout << "recombined " << cb::format_number(recombined) << '\n'
                << "certificate_error " << cb::format_number(cb::certificate_error(lp, report)) << '\n';
    }
    return 0;
  }
};

// ---------------------------------------------------------------- count

struct CountCmd {
  std::string graph, pattern;
  std::uint64_t budget = cb::kDefaultHomBudget;
  CLI::Option* budget_opt = nullptr;

  int run() const {
    const auto g = cb::load_edge_list_file(graph);
    cb::Pattern h;
    if (auto p = cb::find_pattern(pattern)) {
      h = *p;
    } else {
      std::ifstream in(pattern);
      if (!in) throw std::runtime_error("'" + pattern + "' is neither a catalog pattern nor a readable file");
      h = cb::load_pattern(in, pattern);
    }
    std::cout << cb::count_homs(h, g, resolve_budget(budget, budget_opt->count() > 0)) << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- bench

struct BenchCmd {
  std::string manifest, out_dir = "bench_out";
  std::uint64_t budget = cb::kDefaultHomBudget;
  unsigned threads = 1;
  CLI::Option* budget_opt = nullptr;
  GridFlags grid;

  int run() const {
    cb::BenchOptions options;
    options.budget = resolve_budget(budget, budget_opt->count() > 0);
    options.threads = threads;
    options.grid = grid.grid();
    const auto summary = cb::run_bench(manifest, out_dir, options);
    for (std::size_t i = 0; i < summary.datasets.size(); ++i) {
      std::size_t excluded = 0;
      for (const auto& row : summary.per_dataset[i]) excluded += row.s_over_t ? 0 : 1;
      std::cout << "dataset " << summary.datasets[i] << " rows " << summary.per_dataset[i].size()
                << " excluded " << excluded << '\n';
    }
    if (summary.regression) {
      std::cout << "regression w/t ~ (s/t)^slope: slope " << cb::format_number(summary.regression->slope)
                << " r2 " << cb::format_number(summary.regression->r_squared) << " points "
                << summary.regression->point_count << '\n';
    } else {
      std::cout << "regression unavailable (fewer than 2 usable points)\n";
    }
    const auto& inv = summary.invariants;
    std::cout << "violations nesting " << inv.nesting_violations << " soundness " << inv.soundness_violations
              << " domination " << inv.domination_violations << '\n';
    return inv.ok() ? 0 : kExitInvariant;
  }
};

int print_catalog() {
  for (const auto& p : cb::catalog()) {
    std::cout << p.name << ' ' << p.vertex_count;
    for (auto [u, v] : p.edges) std::cout << ' ' << u << '-' << v;
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree statistics and entropy-LP upper bounds on homomorphism counts"};
  app.require_subcommand(1);

  StatsCmd stats;
  auto* s = app.add_subcommand("stats", "Print statistics of an edge-list relation");
  s->add_option("graph", stats.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  s->add_flag("--domain-size", stats.domain, "|A|");
  s->add_flag("--edge-count", stats.edges, "|R| (directed edges)");
  s->add_flag("--max-degree", stats.maxdeg, "max degree");
  s->add_option("--star", stats.star, "Star(p) = sum_v deg(v)^p; repeatable");
  s->add_option("--bistar", stats.bistar, "BiStar p,q; repeatable");
  s->add_option("--catv", stats.catv, "CatV p,q,r; repeatable");
  s->add_option("--catn", stats.catn, "CatN p,q,r,s; repeatable");
  s->add_option("--catw", stats.catw, "CatW p,q,r,s,t; repeatable");
  s->add_flag("--transposed", stats.transposed, "Evaluate in transposed orientation");

  BoundCmd bound;
  auto* b = app.add_subcommand("bound", "Entropy-LP upper bound for a pattern query");
  b->add_option("graph", bound.graph, "Edge-list file (relation G)")->required()->check(CLI::ExistingFile);
  b->add_option("pattern", bound.pattern, "Catalog pattern name or query file ('X Y [relation]' lines)")
      ->required();
  b->add_option("--method", bound.method, "edges|star|bistar|vvv|nnn|www")->capture_default_str();
  b->add_option("--relation", bound.relations, "Extra relation NAME=PATH; repeatable");
  b->add_flag("--certificate", bound.certificate, "Print the dual certificate");
  b->add_option("--pivot-tolerance", bound.pivot_tolerance, "Simplex pivot tolerance")->capture_default_str();
  bound.grid.attach(b);

  CountCmd count;
  auto* c = app.add_subcommand("count", "Exact homomorphism count");
  c->add_option("graph", count.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  c->add_option("pattern", count.pattern, "Catalog pattern name or edge-list file")->required();
  count.budget_opt =
      c->add_option("--budget", count.budget, std::string("Extension-step budget (env ") + kBudgetEnv + ")");

  BenchCmd bench;
  auto* be = app.add_subcommand("bench", "Run the five methods over the catalog for every dataset");
  be->add_option("manifest", bench.manifest, "Manifest: one edge-list path per line")
      ->required()
      ->check(CLI::ExistingFile);
  be->add_option("--out", bench.out_dir, "Output directory")->capture_default_str();
  bench.budget_opt =
      be->add_option("--budget", bench.budget, std::string("Extension-step budget (env ") + kBudgetEnv + ")");
  be->add_option("--threads", bench.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench.grid.attach(be);

  app.add_subcommand("catalog", "List the built-in patterns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*s) return stats.run();
    if (*b) return bound.run();
    if (*c) return count.run();
    if (*be) return bench.run();
    return print_catalog();
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const cb::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
