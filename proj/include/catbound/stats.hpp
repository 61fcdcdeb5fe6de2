#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catbound/graph.hpp"

namespace catbound {

enum class StatKind { DomainSize, EdgeCount, MaxDegree, Star, BiStar, CatV, CatN, CatW };

/// Which side of the relation plays the role of A. Transposing a symmetric
/// relation leaves every statistic unchanged, but the entropy constraint it
/// supports swaps X and Y.
enum class Orientation { Forward, Transposed };

std::string_view kind_name(StatKind kind);
std::size_t parameter_count(StatKind kind);

struct StatKey {
  StatKind kind = StatKind::EdgeCount;
  std::vector<double> params;
  Orientation orientation = Orientation::Forward;

  static StatKey domain_size(Orientation o = Orientation::Forward);
  static StatKey edge_count(Orientation o = Orientation::Forward);
  static StatKey max_degree(Orientation o = Orientation::Forward);
  static StatKey star(double p, Orientation o = Orientation::Forward);
  static StatKey bistar(double p, double q, Orientation o = Orientation::Forward);
  static StatKey cat_v(double p, double q, double r, Orientation o = Orientation::Forward);
  static StatKey cat_n(double p, double q, double r, double s, Orientation o = Orientation::Forward);
  static StatKey cat_w(double p, double q, double r, double s, double t,
                       Orientation o = Orientation::Forward);

  /// Throws DomainError if the parameter count is wrong, a parameter is not
  /// finite, or a parameter violates the kind's range (Star: p >= 0,
  /// BiStar: p, q >= 1, caterpillars: all >= 0).
  void validate() const;

  StatKey transposed() const;

  /// e.g. "Star(2)", "CatW(1,0,0,0,1)^T".
  std::string to_string() const;

  friend bool operator==(const StatKey&, const StatKey&) = default;
};

struct StatRecord {
  StatKey key;
  /// Natural log of the statistic; authoritative (raw_value may be +inf).
  double log_value = 0.0;
  double raw_value = 0.0;
};

struct MomentValue {
  double raw = 0.0;
  double log = 0.0;
};

/// Sum over all walks (v_1, ..., v_k) of R of prod_i deg(v_i)^e_i, where
/// k = exponents.size() >= 1 and 0^0 = 1. With k = 1 the sum runs over every
/// vertex, isolated ones included. Evaluated by k - 1 backward
/// message-passing sweeps over the adjacency, so O(k (|V| + |R|)).
///
/// Partial sums accumulate in increasing vertex id. If any intermediate
/// overflows, the sweep is redone in the log domain (per-vertex
/// log-sum-exp), `raw` is +inf and `log` stays finite.
MomentValue walk_moment(const Graph& g, std::span<const double> exponents);

/// Same sum in exact 128-bit integer arithmetic for nonnegative integer
/// exponents; nullopt on overflow.
std::optional<unsigned __int128> exact_walk_moment(const Graph& g, std::span<const unsigned> exponents);

/// sum_v deg(v)^p, p >= 0. p = 0 gives |V|, p = 1 gives |R|.
double star_norm(const Graph& g, double p);
/// sum over (a, b) in R of deg(a)^(p-1) deg(b)^(q-1); requires p, q >= 1.
double bistar_moment(const Graph& g, double p, double q);
/// Caterpillar moments over 3-, 4- and 5-vertex walks; parameters >= 0.
double cat_v(const Graph& g, double p, double q, double r);
double cat_n(const Graph& g, double p, double q, double r, double s);
double cat_w(const Graph& g, double p, double q, double r, double s, double t);
std::size_t max_degree(const Graph& g);

/// Exponent vector whose walk moment equals the statistic, in the key's
/// orientation. Empty for DomainSize, EdgeCount and MaxDegree.
std::vector<double> walk_exponents(const StatKey& key);

StatRecord compute_stat(const Graph& g, const StatKey& key);

}  // namespace catbound
