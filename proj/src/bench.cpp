#include "catbound/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "catbound/entropy_lp.hpp"
#include "catbound/errors.hpp"

namespace catbound {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Star: return "star";
    case Method::BiStar: return "bistar";
    case Method::CatV: return "vvv";
    case Method::CatN: return "nnn";
    case Method::CatW: return "www";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<StatKey> method_stat_keys(Method m, const StatGrid& grid) {
  std::vector<StatKey> forward = {StatKey::domain_size(), StatKey::edge_count(), StatKey::max_degree()};
  for (double p : grid.star_p) forward.push_back(StatKey::star(p));
  if (m >= Method::BiStar) {
    for (double p : grid.bistar_pq) {
      for (double q : grid.bistar_pq) forward.push_back(StatKey::bistar(p, q));
    }
  }
  if (m >= Method::CatV) {
    for (double p : grid.caterpillar_p) forward.push_back(StatKey::cat_v(p, 0, p));
  }
  if (m >= Method::CatN) {
    for (double p : grid.caterpillar_p) forward.push_back(StatKey::cat_n(p, 0, 0, p));
  }
  if (m >= Method::CatW) {
    for (double p : grid.caterpillar_p) forward.push_back(StatKey::cat_w(p, 0, 0, 0, p));
  }
  std::vector<StatKey> keys;
  keys.reserve(forward.size() * 2);
  for (const auto& k : forward) {
    keys.push_back(k);
    keys.push_back(k.transposed());
  }
  return keys;
}

namespace {

double bound_value(const BoundReport& report) {
  if (report.status == LpStatus::Unbounded) return std::numeric_limits<double>::infinity();
  return report.bound;
}

BenchRow run_pattern(const Graph& g, const Pattern& h,
                     const std::array<std::vector<StatRecord>, 5>& records, const BenchOptions& options) {
  BenchRow row;
  row.shape = h.name;
  try {
    row.truth = static_cast<double>(count_homs(h, g, options.budget));
  } catch (const BudgetExceeded&) {
    row.truth.reset();
  }
  const Query query = Query::from_pattern(h);
  for (std::size_t m = 0; m < kAllMethods.size(); ++m) {
    std::vector<std::vector<StatRecord>> per_atom(query.atoms.size(), records[m]);
    row.bounds[m] = bound_value(solve_bound(build_lp(query, per_atom)));
  }
  if (row.truth && *row.truth >= 1.0) {
    row.s_over_t = row.bound(Method::Star) / *row.truth;
    row.w_over_t = row.bound(Method::CatW) / *row.truth;
  }
  return row;
}

}  // namespace

std::vector<BenchRow> run_methods(const Graph& g, std::span<const Pattern> patterns,
                                  const BenchOptions& options) {
  // Every atom reads the same symmetric relation, so each statistic is
  // computed once per graph.
  std::map<std::string, StatRecord> cache;
  std::array<std::vector<StatRecord>, 5> records;
  for (std::size_t m = 0; m < kAllMethods.size(); ++m) {
    for (const auto& key : method_stat_keys(kAllMethods[m], options.grid)) {
      auto name = key.to_string();
      auto it = cache.find(name);
      if (it == cache.end()) it = cache.emplace(name, compute_stat(g, key)).first;
      records[m].push_back(it->second);
    }
  }

  std::vector<BenchRow> rows(patterns.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, patterns.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < patterns.size(); ++i) rows[i] = run_pattern(g, patterns[i], records, options);
    return rows;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < patterns.size(); i += workers) {
          rows[i] = run_pattern(g, patterns[i], records, options);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::vector<BenchRow> geometric_mean(std::span<const std::vector<BenchRow>> datasets) {
  if (datasets.empty()) return {};
  const std::size_t shapes = datasets.front().size();
  for (const auto& d : datasets) {
    if (d.size() != shapes) throw DomainError("datasets list different numbers of shapes");
    for (std::size_t i = 0; i < shapes; ++i) {
      if (d[i].shape != datasets.front()[i].shape) throw DomainError("datasets list shapes in different orders");
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<BenchRow> out;
  for (std::size_t i = 0; i < shapes; ++i) {
    BenchRow avg;
    avg.shape = datasets.front()[i].shape;
    double log_truth = 0.0, log_s = 0.0, log_w = 0.0;
    std::array<double, 5> log_bounds{};
    std::size_t count = 0;
    for (const auto& d : datasets) {
      const auto& row = d[i];
      if (!row.truth || *row.truth < 1.0) continue;
      ++count;
      log_truth += std::log(*row.truth);
      for (std::size_t m = 0; m < 5; ++m) log_bounds[m] += std::log(row.bounds[m]);
      log_s += std::log(*row.s_over_t);
      log_w += std::log(*row.w_over_t);
    }
    if (count == 0) {
      avg.bounds.fill(nan);
    } else {
      const double k = static_cast<double>(count);
      avg.truth = std::exp(log_truth / k);
      for (std::size_t m = 0; m < 5; ++m) avg.bounds[m] = std::exp(log_bounds[m] / k);
      avg.s_over_t = std::exp(log_s / k);
      avg.w_over_t = std::exp(log_w / k);
    }
    out.push_back(std::move(avg));
  }
  return out;
}

RegressionResult loglog_regress(std::span<const std::pair<double, double>> points, bool through_origin) {
  if (points.size() < 2) throw DomainError("regression needs at least 2 points");
  std::vector<double> xs, ys;
  for (auto [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw DomainError("log-log regression needs finite positive coordinates");
    }
    xs.push_back(std::log(x));
    ys.push_back(std::log(y));
  }
  const double n = static_cast<double>(xs.size());
  RegressionResult r;
  r.point_count = xs.size();
  double ss_res = 0.0, ss_tot = 0.0;
  if (through_origin) {
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      ss_tot += ys[i] * ys[i];
    }
    if (sxx == 0.0) throw DomainError("through-origin slope undefined: every ln x is 0");
    r.slope = sxy / sxx;
    for (std::size_t i = 0; i < xs.size(); ++i) ss_res += std::pow(ys[i] - r.slope * xs[i], 2);
  } else {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
      ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("slope undefined: all ln x are equal");
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) ss_res += std::pow(ys[i] - r.intercept - r.slope * xs[i], 2);
  }
  r.r_squared = ss_tot == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return r;
}

std::vector<std::pair<double, double>> relative_error_points(std::span<const BenchRow> rows) {
  std::vector<std::pair<double, double>> out;
  for (const auto& row : rows) {
    if (row.s_over_t && row.w_over_t) out.emplace_back(*row.s_over_t, *row.w_over_t);
  }
  return out;
}

InvariantReport check_invariants(std::span<const BenchRow> rows, double tolerance) {
  // a <= b up to relative tolerance on the log scale.
  auto le = [tolerance](double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return true;
    if (a <= b) return true;
    if (a <= 0.0 || std::isinf(a)) return false;
    const double la = std::log(a), lb = std::log(b);
    return la - lb <= tolerance * std::max(1.0, std::abs(lb));
  };
  InvariantReport report;
  for (const auto& row : rows) {
    for (std::size_t m = 1; m < 5; ++m) {
      if (!le(row.bounds[m], row.bounds[m - 1])) ++report.nesting_violations;
    }
    if (row.truth) {
      for (double b : row.bounds) {
        if (!le(*row.truth, b)) ++report.soundness_violations;
      }
    }
    if (row.s_over_t && row.w_over_t && !le(*row.w_over_t, *row.s_over_t)) ++report.domination_violations;
  }
  return report;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "NA";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string format_number(const std::optional<double>& x) { return x ? format_number(*x) : "NA"; }

void write_csv(std::span<const BenchRow> rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.shape << ',' << format_number(row.truth);
    for (double b : row.bounds) out << ',' << format_number(b);
    out << ',' << format_number(row.s_over_t) << ',' << format_number(row.w_over_t) << '\n';
  }
}

namespace {

std::optional<double> parse_field(const std::string& field, std::size_t line_no) {
  if (field == "NA") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad number '" + field + "'");
  }
}

}  // namespace

std::vector<BenchRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError(1, "missing bench CSV header");
  std::vector<BenchRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 9) throw ParseError(line_no, "expected 9 fields");
    BenchRow row;
    row.shape = fields[0];
    row.truth = parse_field(fields[1], line_no);
    for (std::size_t m = 0; m < 5; ++m) {
      row.bounds[m] = parse_field(fields[2 + m], line_no).value_or(std::numeric_limits<double>::quiet_NaN());
    }
    row.s_over_t = parse_field(fields[7], line_no);
    row.w_over_t = parse_field(fields[8], line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::filesystem::path> read_manifest(std::istream& in, const std::filesystem::path& base) {
  std::vector<std::filesystem::path> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::filesystem::path p(line.substr(first, last - first + 1));
    out.push_back(p.is_absolute() ? p : base / p);
  }
  return out;
}

BenchSummary run_bench(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
                       const BenchOptions& options) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open manifest " + manifest.string());
  const auto paths = read_manifest(in, manifest.parent_path());
  if (paths.empty()) throw DomainError("manifest " + manifest.string() + " lists no datasets");

  std::filesystem::create_directories(out_dir);
  BenchSummary summary;
  for (const auto& path : paths) {
    const Graph g = load_edge_list_file(path);
    auto rows = run_methods(g, catalog(), options);
    const auto name = path.stem().string();
    std::ofstream csv(out_dir / (name + ".csv"));
    write_csv(rows, csv);
    const auto inv = check_invariants(rows);
    summary.invariants.nesting_violations += inv.nesting_violations;
    summary.invariants.soundness_violations += inv.soundness_violations;
    summary.invariants.domination_violations += inv.domination_violations;
    summary.datasets.push_back(name);
    summary.per_dataset.push_back(std::move(rows));
  }
  summary.average = geometric_mean(summary.per_dataset);
  std::ofstream avg(out_dir / "_average.csv");
  write_csv(summary.average, avg);

  const auto points = relative_error_points(summary.average);
  try {
    summary.regression = loglog_regress(points, true);
  } catch (const DomainError&) {
    summary.regression.reset();
  }
  return summary;
}

}  // namespace catbound
