#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace catbound {

/// maximize c.x  subject to  A x <= b,  x >= 0.
struct DenseLP {
  std::size_t variable_count = 0;
  std::vector<double> objective;
  std::vector<double> matrix;  // row-major, row_count() x variable_count
  std::vector<double> rhs;

  explicit DenseLP(std::size_t n = 0) : variable_count(n), objective(n, 0.0) {}

  void add_row(std::span<const double> coefficients, double bound);
  std::size_t row_count() const noexcept { return rhs.size(); }
  double at(std::size_t row, std::size_t col) const { return matrix[row * variable_count + col]; }

  /// Throws DomainError on non-finite entries, size mismatches or zero rows.
  void validate() const;
};

enum class LpStatus { Optimal, Unbounded, Infeasible };
std::string_view status_name(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double optimum = 0.0;
  std::vector<double> primal;  // one per variable
  std::vector<double> dual;    // one per row, >= 0
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  /// Consecutive degenerate pivots tolerated under largest-coefficient
  /// pricing before falling back to Bland's rule.
  std::size_t degenerate_streak_limit = 50;
};

/// Two-phase dictionary simplex on the condensed (rows x nonbasic) tableau.
/// Pricing picks the largest reduced cost, lowest label on ties; after a
/// run of degenerate pivots it switches to Bland's rule (lowest-label
/// entering and leaving variable) until the objective moves again, so
/// every solve terminates and identical inputs give identical outputs.
///
/// At an optimum, dual[i] is the multiplier of row i: dual >= 0,
/// A^T dual >= c and b.dual equals the optimum.
LpSolution solve(const DenseLP& lp, const SimplexOptions& options = {});

}  // namespace catbound
