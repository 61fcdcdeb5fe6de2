#include "catbound/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "catbound/errors.hpp"

namespace catbound {

void DenseLP::add_row(std::span<const double> coefficients, double bound) {
  if (coefficients.size() != variable_count) throw DomainError("add_row: coefficient count mismatch");
  matrix.insert(matrix.end(), coefficients.begin(), coefficients.end());
  rhs.push_back(bound);
}

void DenseLP::validate() const {
  if (objective.size() != variable_count) throw DomainError("LP objective size mismatch");
  if (matrix.size() != rhs.size() * variable_count) throw DomainError("LP matrix size mismatch");
  if (rhs.empty()) throw DomainError("LP has no rows");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(objective.begin(), objective.end(), finite) ||
      !std::all_of(matrix.begin(), matrix.end(), finite) || !std::all_of(rhs.begin(), rhs.end(), finite)) {
    throw DomainError("LP has non-finite entries");
  }
}

std::string_view status_name(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Infeasible: return "infeasible";
  }
  return "?";
}

namespace {

// Dictionary form: for every row r,
//   basic[r] = T(r, 0) + sum_c T(r, c) * nonbasic[c - 1],
// and the objective rows use the same layout. Labels 0..n-1 are the
// original variables, n..n+m-1 the slacks, n+m the phase-one artificial.
class Tableau {
 public:
  Tableau(const DenseLP& lp, bool with_artificial, double tol)
      : m_(lp.row_count()), n_(lp.variable_count), cols_(n_ + (with_artificial ? 1 : 0) + 1), tol_(tol) {
    data_.assign((m_ + 2) * cols_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      at(r, 0) = lp.rhs[r];
      for (std::size_t j = 0; j < n_; ++j) at(r, j + 1) = -lp.at(r, j);
      if (with_artificial) at(r, cols_ - 1) = 1.0;
      basic_.push_back(n_ + r);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      at(objective_row(), j + 1) = lp.objective[j];
      nonbasic_.push_back(j);
    }
    if (with_artificial) {
      nonbasic_.push_back(artificial_label());
      at(phase_one_row(), cols_ - 1) = -1.0;
    }
  }

  std::size_t objective_row() const { return m_; }
  std::size_t phase_one_row() const { return m_ + 1; }
  std::size_t artificial_label() const { return n_ + m_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    double* pr = &data_[row * cols_];
    for (std::size_t c = 0; c < cols_; ++c) pr[c] = c == col ? 1.0 / p : -pr[c] / p;
    for (std::size_t r = 0; r < m_ + 2; ++r) {
      if (r == row) continue;
      double* ri = &data_[r * cols_];
      const double f = ri[col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (c != col) ri[c] += f * pr[c];
      }
      ri[col] = f * pr[col];
    }
    std::swap(basic_[row], nonbasic_[col - 1]);
    ++pivots_;
  }

  enum class Outcome { Optimal, Unbounded };

  // Maximizes the given objective row. Columns whose label is `banned` never enter.
  Outcome optimize(std::size_t obj, std::size_t banned) {
    std::size_t streak = 0;
    bool bland = false;
    for (;;) {
      std::size_t enter = 0;
      for (std::size_t c = 1; c < cols_; ++c) {
        if (nonbasic_[c - 1] == banned || at(obj, c) <= tol_) continue;
        if (enter == 0) {
          enter = c;
          continue;
        }
        const double cand = at(obj, c), best = at(obj, enter);
        const bool lower_label = nonbasic_[c - 1] < nonbasic_[enter - 1];
        if (bland ? lower_label : (cand > best || (cand == best && lower_label))) enter = c;
      }
      if (enter == 0) return Outcome::Optimal;

      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a >= -tol_) continue;
        const double ratio = std::max(0.0, at(r, 0)) / -a;
        if (leave == m_) {
          leave = r;
          best_ratio = ratio;
          continue;
        }
        const double slack = 1e-12 * (1.0 + best_ratio);
        if (ratio < best_ratio - slack) {
          leave = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + slack && basic_[r] < basic_[leave]) {
          leave = r;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave == m_) return Outcome::Unbounded;

      if (best_ratio <= tol_) {
        if (++streak > streak_limit_) bland = true;
      } else {
        streak = 0;
        bland = false;
      }
      pivot(leave, enter);
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return cols_; }
  std::size_t pivots() const { return pivots_; }
  const std::vector<std::size_t>& basic() const { return basic_; }
  const std::vector<std::size_t>& nonbasic() const { return nonbasic_; }
  void set_streak_limit(std::size_t limit) { streak_limit_ = limit; }

 private:
  std::size_t m_, n_, cols_;
  double tol_;
  std::size_t streak_limit_ = 50;
  std::vector<double> data_;
  std::vector<std::size_t> basic_, nonbasic_;
  std::size_t pivots_ = 0;
};

}  // namespace

LpSolution solve(const DenseLP& lp, const SimplexOptions& options) {
  lp.validate();
  const std::size_t m = lp.row_count(), n = lp.variable_count;
  const double tol = options.pivot_tolerance;

  std::size_t most_negative = m;
  for (std::size_t r = 0; r < m; ++r) {
    if (lp.rhs[r] < -tol && (most_negative == m || lp.rhs[r] < lp.rhs[most_negative])) most_negative = r;
  }
  const bool phase_one = most_negative != m;

  Tableau t(lp, phase_one, tol);
  t.set_streak_limit(options.degenerate_streak_limit);
  const std::size_t no_ban = std::numeric_limits<std::size_t>::max();
  LpSolution out;

  if (phase_one) {
    const std::size_t art_col = t.cols() - 1;
    t.pivot(most_negative, art_col);
    t.optimize(t.phase_one_row(), no_ban);
    if (t.at(t.phase_one_row(), 0) < -tol * (1.0 + std::abs(lp.rhs[most_negative]))) {
      out.status = LpStatus::Infeasible;
      out.pivots = t.pivots();
      return out;
    }
    const auto& basic = t.basic();
    auto it = std::find(basic.begin(), basic.end(), t.artificial_label());
    if (it != basic.end()) {
      const std::size_t r = static_cast<std::size_t>(it - basic.begin());
      std::size_t col = 0;
      for (std::size_t c = 1; c < t.cols(); ++c) {
        if (std::abs(t.at(r, c)) > tol && (col == 0 || t.nonbasic()[c - 1] < t.nonbasic()[col - 1])) col = c;
      }
      // A row with no usable column is redundant; the artificial then stays
      // basic at level zero and never changes.
      if (col != 0) t.pivot(r, col);
    }
  }

  const auto outcome = t.optimize(t.objective_row(), phase_one ? t.artificial_label() : no_ban);
  out.pivots = t.pivots();
  if (outcome == Tableau::Outcome::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.status = LpStatus::Optimal;
  out.optimum = t.at(t.objective_row(), 0);
  out.primal.assign(n, 0.0);
  out.dual.assign(m, 0.0);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (t.basic()[r] < n) out.primal[t.basic()[r]] = std::max(0.0, t.at(r, 0));
  }
  for (std::size_t c = 1; c < t.cols(); ++c) {
    const std::size_t label = t.nonbasic()[c - 1];
    if (label >= n && label < n + m) out.dual[label - n] = std::max(0.0, -t.at(t.objective_row(), c));
  }
  return out;
}

}  // namespace catbound
