#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catbound/graph.hpp"
#include "catbound/homcount.hpp"
#include "catbound/simplex.hpp"
#include "catbound/stats.hpp"

namespace catbound {

inline constexpr int kMaxVariables = 12;

/// Bit i set <=> query variable i is in the subset.
using VarMask = std::uint32_t;

/// Coordinates of an entropy vector: one LP column per nonempty subset of
/// the n query variables. h(empty set) = 0 is structural and has no column.
class SubsetLattice {
 public:
  explicit SubsetLattice(int variable_count);

  int variable_count() const noexcept { return n_; }
  std::size_t coordinate_count() const noexcept { return (std::size_t{1} << n_) - 1; }
  VarMask full() const noexcept { return static_cast<VarMask>(coordinate_count()); }
  /// Throws DomainError for the empty set or bits beyond n.
  std::size_t index(VarMask subset) const;
  VarMask subset(std::size_t index) const;

 private:
  int n_;
};

SubsetLattice subset_index(int variable_count);

enum class ConstraintOrigin { Monotonicity, Submodularity, Statistic, Auxiliary };

/// sum over subsets S of coefficients[S] * h(S) <= rhs.
/// Shannon generators (">= 0" inequalities) are stored negated with rhs 0.
struct LinearConstraint {
  std::map<VarMask, double> coefficients;
  double rhs = 0.0;
  ConstraintOrigin origin = ConstraintOrigin::Statistic;
  std::optional<StatKey> stat;
  int atom = -1;

  /// e.g. "2*h(XY) - 1*h(X) <= 1.79 [Star(2) on atom 0]".
  std::string describe(std::span<const std::string> variable_names) const;
};

/// Elemental Shannon inequalities: for each variable Y and subset S of the
/// others, h(S+Y) - h(S) >= 0 (n 2^(n-1) rows); for each pair {Y, Z} and
/// subset S of the others, h(S+Y) + h(S+Z) - h(S+Y+Z) - h(S) >= 0
/// (C(n,2) 2^(n-2) rows). Monotonicity rows come first.
std::vector<LinearConstraint> shannon_generators(int variable_count);

/// Lattice coefficients of the entropy form a statistic bounds on the atom
/// (X, Y), obtained by expanding H(Y|X) = h(XY) - h(X),
/// I(X;Y) = h(X) + h(Y) - h(XY) and H(X|Y) = h(XY) - h(Y):
///
///   DomainSize        h(X)
///   EdgeCount         h(XY)
///   MaxDegree         h(XY) - h(X)
///   Star(p)           p h(XY) + (1-p) h(X)
///   BiStar(p,q)       (p+q-1) h(XY) + (1-p) h(X) + (1-q) h(Y)
///   CatV(p,q,r)       (p+q+r+2) h(XY) - (p+r) h(X) - (q+1) h(Y)
///   CatN(p,q,r,s)     (p+q+r+s+3) h(XY) - (p+r+1) h(X) - (q+s+1) h(Y)
///   CatW(p,q,r,s,t)   (p+q+r+s+t+4) h(XY) - (p+r+t+1) h(X) - (q+s+2) h(Y)
///
/// A transposed key swaps the X and Y coefficients.
struct EntropyCoefficients {
  double xy = 0.0;
  double x = 0.0;
  double y = 0.0;
};
EntropyCoefficients entropy_coefficients(const StatKey& key);

/// Constraint for one statistic on the atom whose variables are x and y
/// (indices into the query's variables). Zero coefficients are dropped.
/// Throws DomainError for an invalid key, x == y, an index outside the
/// lattice, or a NaN log value.
LinearConstraint emit_stat_constraint(int x, int y, const StatRecord& record, int atom = -1);

struct Atom {
  std::string relation;
  int x = 0;
  int y = 0;
};

struct Query {
  std::vector<std::string> variables;
  std::vector<Atom> atoms;

  /// Throws DomainError: 1..12 variables, atom variables distinct and in
  /// range, every variable used by some atom.
  void validate() const;

  /// One variable per pattern vertex (named X0, X1, ...), one atom per edge.
  static Query from_pattern(const Pattern& h, const std::string& relation = "G");
};

/// Lines of "X Y [relation]"; '#' comments and blank lines are skipped.
/// Variables are named by their tokens in order of first appearance.
Query load_query(std::istream& in, const std::string& default_relation = "G");

struct EntropyLP {
  int variable_count = 0;
  std::vector<std::string> variable_names;
  std::vector<LinearConstraint> constraints;
  std::vector<std::string> warnings;
  /// Some statistic evaluated to 0, so the relation (hence the join) is empty.
  bool empty_relation = false;
};

/// Objective: maximize h(all variables). Rows: shannon_generators(n), then
/// one row per (atom, record) in input order, skipping rows identical to an
/// earlier one (same coefficients and rhs). stats_per_atom[i] holds the
/// records for query.atoms[i].
EntropyLP build_lp(const Query& query, std::span<const std::vector<StatRecord>> stats_per_atom);

DenseLP to_dense(const EntropyLP& lp);

struct BoundReport {
  LpStatus status = LpStatus::Optimal;
  double log_bound = 0.0;
  double bound = 0.0;
  /// One nonnegative weight per constraint of the EntropyLP.
  std::vector<double> dual_weights;
  /// Optimal entropy vector, indexed by SubsetLattice::index.
  std::vector<double> entropy;
};

/// Infeasibility cannot arise from generator rows plus statistic rows with
/// finite rhs (h = 0 is feasible), so it is reported as a logic_error. An
/// empty relation yields status Optimal with bound 0 and log_bound -inf.
BoundReport solve_bound(const EntropyLP& lp, const SimplexOptions& options = {});

/// Checks a dual certificate: returns the largest violation among
/// (a) negative weights, (b) coordinates where the weighted combination of
/// rows falls short of the objective, and (c) |sum weight * rhs - log_bound|
/// relative to 1 + |log_bound|.
double certificate_error(const EntropyLP& lp, const BoundReport& report);

struct WeightedEdge {
  VertexId x = 0;
  VertexId y = 0;
  double probability = 0.0;
};

struct EntropyTriple {
  double hx = 0.0;
  double hy = 0.0;
  double hxy = 0.0;
};

/// Entropies (natural log) of a joint pmf on directed edges of g. Throws
/// DomainError if mass sits off the relation, is negative, or does not sum
/// to 1 within 1e-9.
EntropyTriple edge_entropies(const Graph& g, std::span<const WeightedEdge> pmf);

/// True iff every constraint emitted for `keys` on the atom (X, Y) holds at
/// the pmf's entropy vector up to tolerance * max(1, |rhs|).
bool verify_entropy_feasibility(const Graph& g, std::span<const WeightedEdge> pmf,
                                std::span<const StatKey> keys, double tolerance = 1e-9);

}  // namespace catbound
