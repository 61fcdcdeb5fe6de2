#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catbound/graph.hpp"
#include "catbound/homcount.hpp"
#include "catbound/stats.hpp"

namespace catbound {

/// The five nested statistic menus, each a superset of the previous one.
enum class Method { Star, BiStar, CatV, CatN, CatW };
inline constexpr std::array<Method, 5> kAllMethods = {Method::Star, Method::BiStar, Method::CatV,
                                                      Method::CatN, Method::CatW};

/// CSV column names: star, bistar, vvv, nnn, www.
std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct StatGrid {
  std::vector<double> star_p = {0, 1, 2, 3, 4, 5};
  std::vector<double> bistar_pq = {2, 3, 4, 5};
  std::vector<double> caterpillar_p = {1, 2, 3};
};

/// star:   DomainSize, EdgeCount, MaxDegree, Star(p) for p in star_p
/// bistar: + BiStar(p, q) for p, q in bistar_pq
/// vvv:    + CatV(p, 0, p)        for p in caterpillar_p
/// nnn:    + CatN(p, 0, 0, p)
/// www:    + CatW(p, 0, 0, 0, p)
/// Every key is listed in both orientations.
std::vector<StatKey> method_stat_keys(Method m, const StatGrid& grid = {});

struct BenchRow {
  std::string shape;
  /// nullopt when the oracle ran out of budget.
  std::optional<double> truth;
  std::array<double, 5> bounds{};  // indexed like kAllMethods
  /// star / true and www / true; only present when true >= 1.
  std::optional<double> s_over_t;
  std::optional<double> w_over_t;

  double bound(Method m) const { return bounds[static_cast<std::size_t>(m)]; }
};

struct BenchOptions {
  std::uint64_t budget = kDefaultHomBudget;
  StatGrid grid;
  unsigned threads = 1;
};

/// One row per pattern, in pattern order.
std::vector<BenchRow> run_methods(const Graph& g, std::span<const Pattern> patterns,
                                  const BenchOptions& options = {});

/// Per pattern, the geometric mean of every column over the datasets whose
/// row has true >= 1. Patterns no dataset qualifies for get NaN bounds and
/// no true value. All datasets must list the same shapes in the same order.
std::vector<BenchRow> geometric_mean(std::span<const std::vector<BenchRow>> datasets);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;  // 0 for the through-origin model
  double r_squared = 0.0;
  std::size_t point_count = 0;
};

/// Least squares on (ln x, ln y). The through-origin model ln y = slope ln x
/// reports the uncentered R^2 = 1 - SS_res / sum (ln y)^2. Throws DomainError
/// for fewer than 2 points, nonpositive coordinates, or a degenerate design.
RegressionResult loglog_regress(std::span<const std::pair<double, double>> points,
                                bool through_origin = true);

/// (s/t, w/t) pairs of the rows that have both.
std::vector<std::pair<double, double>> relative_error_points(std::span<const BenchRow> rows);

struct InvariantReport {
  std::size_t nesting_violations = 0;
  std::size_t soundness_violations = 0;
  std::size_t domination_violations = 0;  // w/t > s/t
  bool ok() const { return nesting_violations + soundness_violations + domination_violations == 0; }
};

/// Checks www <= nnn <= vvv <= bistar <= star and bound >= true on every
/// row, comparing logarithms with relative tolerance `tolerance`.
InvariantReport check_invariants(std::span<const BenchRow> rows, double tolerance = 1e-9);

inline constexpr std::string_view kCsvHeader = "shape,true,star,bistar,vvv,nnn,www,s/t,w/t";

/// 6 significant digits; "NA" for missing values, "inf" for infinity.
std::string format_number(double x);
std::string format_number(const std::optional<double>& x);

void write_csv(std::span<const BenchRow> rows, std::ostream& out);
std::vector<BenchRow> read_csv(std::istream& in);

/// Dataset paths, one per line; blank and '#' lines skipped. Relative paths
/// are resolved against `base`.
std::vector<std::filesystem::path> read_manifest(std::istream& in, const std::filesystem::path& base);

struct BenchSummary {
  std::vector<std::string> datasets;
  std::vector<std::vector<BenchRow>> per_dataset;
  std::vector<BenchRow> average;
  std::optional<RegressionResult> regression;  // w/t on s/t over `average`
  InvariantReport invariants;                  // accumulated over all datasets
};

/// Runs the catalog on every dataset of the manifest and writes
/// `<out>/<dataset>.csv` and `<out>/_average.csv`.
BenchSummary run_bench(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
                       const BenchOptions& options = {});

}  // namespace catbound
