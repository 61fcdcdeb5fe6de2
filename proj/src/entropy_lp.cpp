#include "catbound/entropy_lp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "catbound/errors.hpp"

namespace catbound {

SubsetLattice::SubsetLattice(int variable_count) : n_(variable_count) {
  if (variable_count < 1 || variable_count > kMaxVariables) {
    throw DomainError("variable count must be in [1, " + std::to_string(kMaxVariables) + "], got " +
                      std::to_string(variable_count));
  }
}

std::size_t SubsetLattice::index(VarMask subset) const {
  if (subset == 0 || subset > full()) throw DomainError("subset outside the lattice");
  return subset - 1;
}

VarMask SubsetLattice::subset(std::size_t index) const {
  if (index >= coordinate_count()) throw DomainError("lattice index out of range");
  return static_cast<VarMask>(index + 1);
}

SubsetLattice subset_index(int variable_count) { return SubsetLattice(variable_count); }

std::string LinearConstraint::describe(std::span<const std::string> names) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [mask, coef] : coefficients) {
    os << (coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + ")) << std::abs(coef) << "*h(";
    bool first_var = true;
    for (std::size_t i = 0; i < 32; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (!first_var) os << ',';
      os << (i < names.size() ? names[i] : "X" + std::to_string(i));
      first_var = false;
    }
    os << ')';
    first = false;
  }
  os << " <= " << rhs;
  switch (origin) {
    case ConstraintOrigin::Monotonicity: os << " [monotonicity]"; break;
    case ConstraintOrigin::Submodularity: os << " [submodularity]"; break;
    case ConstraintOrigin::Auxiliary: os << " [auxiliary]"; break;
    case ConstraintOrigin::Statistic:
      os << " [" << (stat ? stat->to_string() : std::string("statistic"));
      if (atom >= 0) os << " on atom " << atom;
      os << ']';
      break;
  }
  return os.str();
}

std::vector<LinearConstraint> shannon_generators(int variable_count) {
  const SubsetLattice lattice(variable_count);
  const VarMask full = lattice.full();
  std::vector<LinearConstraint> out;

  auto add = [&](LinearConstraint c, VarMask mask, double coef) {
    if (mask != 0) c.coefficients[mask] += coef;
    return c;
  };

  for (int y = 0; y < variable_count; ++y) {
    const VarMask ybit = VarMask{1} << y;
    const VarMask rest = full & ~ybit;
    // Enumerate subsets of `rest` in increasing order.
    for (VarMask s = 0;; s = (s - rest) & rest) {
      LinearConstraint c;
      c.origin = ConstraintOrigin::Monotonicity;
      c = add(std::move(c), s, 1.0);
      c = add(std::move(c), s | ybit, -1.0);
      out.push_back(std::move(c));
      if (s == rest) break;
    }
  }
  for (int y = 0; y < variable_count; ++y) {
    for (int z = y + 1; z < variable_count; ++z) {
      const VarMask ybit = VarMask{1} << y, zbit = VarMask{1} << z;
      const VarMask rest = full & ~(ybit | zbit);
      for (VarMask s = 0;; s = (s - rest) & rest) {
        LinearConstraint c;
        c.origin = ConstraintOrigin::Submodularity;
        c = add(std::move(c), s | ybit, -1.0);
        c = add(std::move(c), s | zbit, -1.0);
        c = add(std::move(c), s | ybit | zbit, 1.0);
        c = add(std::move(c), s, 1.0);
        out.push_back(std::move(c));
        if (s == rest) break;
      }
    }
  }
  return out;
}

EntropyCoefficients entropy_coefficients(const StatKey& key) {
  key.validate();
  const auto& p = key.params;
  EntropyCoefficients c;
  switch (key.kind) {
    case StatKind::DomainSize: c = {0.0, 1.0, 0.0}; break;
    case StatKind::EdgeCount: c = {1.0, 0.0, 0.0}; break;
    case StatKind::MaxDegree: c = {1.0, -1.0, 0.0}; break;
    case StatKind::Star: c = {p[0], 1.0 - p[0], 0.0}; break;
    case StatKind::BiStar: c = {p[0] + p[1] - 1.0, 1.0 - p[0], 1.0 - p[1]}; break;
    case StatKind::CatV: c = {p[0] + p[1] + p[2] + 2.0, -(p[0] + p[2]), -(p[1] + 1.0)}; break;
    case StatKind::CatN:
      c = {p[0] + p[1] + p[2] + p[3] + 3.0, -(p[0] + p[2] + 1.0), -(p[1] + p[3] + 1.0)};
      break;
    case StatKind::CatW:
      c = {p[0] + p[1] + p[2] + p[3] + p[4] + 4.0, -(p[0] + p[2] + p[4] + 1.0), -(p[1] + p[3] + 2.0)};
      break;
  }
  if (key.orientation == Orientation::Transposed) std::swap(c.x, c.y);
  return c;
}

LinearConstraint emit_stat_constraint(int x, int y, const StatRecord& record, int atom) {
  if (x == y) throw DomainError("atom variables must be distinct");
  if (x < 0 || y < 0 || x >= kMaxVariables || y >= kMaxVariables) {
    throw DomainError("atom variable outside the lattice");
  }
  if (std::isnan(record.log_value)) throw DomainError(record.key.to_string() + ": log value is NaN");
  const auto c = entropy_coefficients(record.key);
  const VarMask xbit = VarMask{1} << x, ybit = VarMask{1} << y;

  LinearConstraint out;
  out.origin = ConstraintOrigin::Statistic;
  out.stat = record.key;
  out.atom = atom;
  out.rhs = record.log_value;
  if (c.xy != 0.0) out.coefficients[xbit | ybit] = c.xy;
  if (c.x != 0.0) out.coefficients[xbit] = c.x;
  if (c.y != 0.0) out.coefficients[ybit] = c.y;
  return out;
}

void Query::validate() const {
  const int n = static_cast<int>(variables.size());
  if (n < 1 || n > kMaxVariables) {
    throw DomainError("query must have 1.." + std::to_string(kMaxVariables) + " variables");
  }
  std::vector<bool> used(variables.size(), false);
  for (const auto& a : atoms) {
    if (a.x < 0 || a.y < 0 || a.x >= n || a.y >= n) throw DomainError("atom variable out of range");
    if (a.x == a.y) throw DomainError("atom over a single variable " + variables[a.x]);
    used[a.x] = used[a.y] = true;
  }
  for (int i = 0; i < n; ++i) {
    if (!used[i]) throw DomainError("variable " + variables[i] + " occurs in no atom");
  }
}

Query Query::from_pattern(const Pattern& h, const std::string& relation) {
  h.validate();
  Query q;
  for (std::size_t v = 0; v < h.vertex_count; ++v) q.variables.push_back("X" + std::to_string(v));
  for (auto [u, v] : h.edges) q.atoms.push_back({relation, static_cast<int>(u), static_cast<int>(v)});
  q.validate();
  return q;
}

Query load_query(std::istream& in, const std::string& default_relation) {
  Query q;
  std::unordered_map<std::string, int> ids;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = ids.try_emplace(name, static_cast<int>(q.variables.size()));
    if (inserted) q.variables.push_back(name);
    return it->second;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw ParseError(line_no, "expected 'X Y [relation]', found " + std::to_string(tokens.size()) + " tokens");
    }
    if (tokens[0] == tokens[1]) throw ParseError(line_no, "atom repeats variable " + tokens[0]);
    const int x = intern(tokens[0]);
    const int y = intern(tokens[1]);
    q.atoms.push_back({tokens.size() == 3 ? tokens[2] : default_relation, x, y});
  }
  q.validate();
  return q;
}

EntropyLP build_lp(const Query& query, std::span<const std::vector<StatRecord>> stats_per_atom) {
  query.validate();
  if (stats_per_atom.size() != query.atoms.size()) {
    throw DomainError("build_lp: need one statistic set per atom");
  }
  EntropyLP lp;
  lp.variable_count = static_cast<int>(query.variables.size());
  lp.variable_names = query.variables;
  lp.constraints = shannon_generators(lp.variable_count);

  using RowKey = std::pair<std::vector<std::pair<VarMask, double>>, double>;
  std::set<RowKey> seen;
  for (std::size_t i = 0; i < query.atoms.size(); ++i) {
    const auto& atom = query.atoms[i];
    if (stats_per_atom[i].empty()) {
      lp.warnings.push_back("atom " + std::to_string(i) + " (" + query.variables[atom.x] + ", " +
                            query.variables[atom.y] + ") has no statistics; the bound may be unbounded");
    }
    for (const auto& record : stats_per_atom[i]) {
      if (record.log_value == -std::numeric_limits<double>::infinity()) {
        lp.empty_relation = true;
        continue;
      }
      auto row = emit_stat_constraint(atom.x, atom.y, record, static_cast<int>(i));
      RowKey key{{row.coefficients.begin(), row.coefficients.end()}, row.rhs};
      if (!seen.insert(std::move(key)).second) continue;
      lp.constraints.push_back(std::move(row));
    }
  }
  return lp;
}

DenseLP to_dense(const EntropyLP& lp) {
  const SubsetLattice lattice(lp.variable_count);
  DenseLP dense(lattice.coordinate_count());
  dense.objective[lattice.index(lattice.full())] = 1.0;
  std::vector<double> row(lattice.coordinate_count());
  for (const auto& c : lp.constraints) {
    std::fill(row.begin(), row.end(), 0.0);
    for (const auto& [mask, coef] : c.coefficients) row[lattice.index(mask)] += coef;
    dense.add_row(row, c.rhs);
  }
  return dense;
}

BoundReport solve_bound(const EntropyLP& lp, const SimplexOptions& options) {
  BoundReport report;
  const SubsetLattice lattice(lp.variable_count);
  if (lp.empty_relation) {
    report.status = LpStatus::Optimal;
    report.log_bound = -std::numeric_limits<double>::infinity();
    report.bound = 0.0;
    report.dual_weights.assign(lp.constraints.size(), 0.0);
    report.entropy.assign(lattice.coordinate_count(), 0.0);
    return report;
  }
  const auto solution = solve(to_dense(lp), options);
  report.status = solution.status;
  switch (solution.status) {
    case LpStatus::Infeasible:
      throw std::logic_error("entropy LP reported infeasible although h = 0 is feasible");
    case LpStatus::Unbounded:
      report.log_bound = std::numeric_limits<double>::infinity();
      report.bound = std::numeric_limits<double>::infinity();
      return report;
    case LpStatus::Optimal: break;
  }
  report.log_bound = solution.optimum;
  report.bound = std::exp(solution.optimum);
  report.dual_weights = solution.dual;
  report.entropy = solution.primal;
  return report;
}

double certificate_error(const EntropyLP& lp, const BoundReport& report) {
  if (report.status != LpStatus::Optimal || lp.empty_relation) return 0.0;
  const SubsetLattice lattice(lp.variable_count);
  std::vector<double> combined(lattice.coordinate_count(), 0.0);
  double recombined = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const double w = report.dual_weights.at(i);
    worst = std::max(worst, -w);
    recombined += w * lp.constraints[i].rhs;
    for (const auto& [mask, coef] : lp.constraints[i].coefficients) combined[lattice.index(mask)] += w * coef;
  }
  const std::size_t top = lattice.index(lattice.full());
  for (std::size_t j = 0; j < combined.size(); ++j) {
    const double target = j == top ? 1.0 : 0.0;
    worst = std::max(worst, target - combined[j]);
  }
  worst = std::max(worst, std::abs(recombined - report.log_bound) / (1.0 + std::abs(report.log_bound)));
  return worst;
}

namespace {

double entropy_of(const std::vector<double>& masses) {
  double h = 0.0;
  for (double p : masses) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

EntropyTriple edge_entropies(const Graph& g, std::span<const WeightedEdge> pmf) {
  std::map<Edge, double> joint;
  std::map<VertexId, double> px, py;
  double total = 0.0;
  for (const auto& e : pmf) {
    if (!(e.probability >= 0.0) || !std::isfinite(e.probability)) {
      throw DomainError("pmf mass must be finite and nonnegative");
    }
    if (e.probability == 0.0) continue;
    if (e.x >= g.vertex_count() || e.y >= g.vertex_count() || !g.has_edge(e.x, e.y)) {
      throw DomainError("pmf mass on (" + std::to_string(e.x) + ", " + std::to_string(e.y) +
                        ") which is not in the relation");
    }
    joint[{e.x, e.y}] += e.probability;
    px[e.x] += e.probability;
    py[e.y] += e.probability;
    total += e.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("pmf does not sum to 1");

  auto values = [](const auto& m) {
    std::vector<double> out;
    out.reserve(m.size());
    for (const auto& kv : m) out.push_back(kv.second);
    return out;
  };
  return {entropy_of(values(px)), entropy_of(values(py)), entropy_of(values(joint))};
}

bool verify_entropy_feasibility(const Graph& g, std::span<const WeightedEdge> pmf,
                                std::span<const StatKey> keys, double tolerance) {
  const auto h = edge_entropies(g, pmf);
  for (const auto& key : keys) {
    const auto record = compute_stat(g, key);
    const auto c = entropy_coefficients(key);
    const double lhs = c.xy * h.hxy + c.x * h.hx + c.y * h.hy;
    if (lhs > record.log_value + tolerance * std::max(1.0, std::abs(record.log_value))) return false;
  }
  return true;
}

}  // namespace catbound
