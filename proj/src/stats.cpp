#include "catbound/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "catbound/errors.hpp"

namespace catbound {

std::string_view kind_name(StatKind kind) {
  switch (kind) {
    case StatKind::DomainSize: return "DomainSize";
    case StatKind::EdgeCount: return "EdgeCount";
    case StatKind::MaxDegree: return "MaxDegree";
    case StatKind::Star: return "Star";
    case StatKind::BiStar: return "BiStar";
    case StatKind::CatV: return "CatV";
    case StatKind::CatN: return "CatN";
    case StatKind::CatW: return "CatW";
  }
  return "?";
}

std::size_t parameter_count(StatKind kind) {
  switch (kind) {
    case StatKind::DomainSize:
    case StatKind::EdgeCount:
    case StatKind::MaxDegree: return 0;
    case StatKind::Star: return 1;
    case StatKind::BiStar: return 2;
    case StatKind::CatV: return 3;
    case StatKind::CatN: return 4;
    case StatKind::CatW: return 5;
  }
  return 0;
}

StatKey StatKey::domain_size(Orientation o) { return {StatKind::DomainSize, {}, o}; }
StatKey StatKey::edge_count(Orientation o) { return {StatKind::EdgeCount, {}, o}; }
StatKey StatKey::max_degree(Orientation o) { return {StatKind::MaxDegree, {}, o}; }
StatKey StatKey::star(double p, Orientation o) { return {StatKind::Star, {p}, o}; }
StatKey StatKey::bistar(double p, double q, Orientation o) { return {StatKind::BiStar, {p, q}, o}; }
StatKey StatKey::cat_v(double p, double q, double r, Orientation o) {
  return {StatKind::CatV, {p, q, r}, o};
}
StatKey StatKey::cat_n(double p, double q, double r, double s, Orientation o) {
  return {StatKind::CatN, {p, q, r, s}, o};
}
StatKey StatKey::cat_w(double p, double q, double r, double s, double t, Orientation o) {
  return {StatKind::CatW, {p, q, r, s, t}, o};
}

void StatKey::validate() const {
  if (params.size() != parameter_count(kind)) {
    throw DomainError(std::string(kind_name(kind)) + " takes " +
                      std::to_string(parameter_count(kind)) + " parameter(s), got " +
                      std::to_string(params.size()));
  }
  const double lower = kind == StatKind::BiStar ? 1.0 : 0.0;
  for (double x : params) {
    if (!std::isfinite(x)) throw DomainError(to_string() + ": parameters must be finite");
    if (x < lower) {
      throw DomainError(to_string() + ": parameters must be >= " + (lower == 1.0 ? "1" : "0"));
    }
  }
}

StatKey StatKey::transposed() const {
  StatKey t = *this;
  t.orientation = orientation == Orientation::Forward ? Orientation::Transposed : Orientation::Forward;
  return t;
}

std::string StatKey::to_string() const {
  std::ostringstream os;
  os << kind_name(kind);
  if (!params.empty()) {
    os << '(';
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (i) os << ',';
      os << params[i];
    }
    os << ')';
  }
  if (orientation == Orientation::Transposed) os << "^T";
  return os.str();
}

namespace {

// deg^e for every degree value 0..max_deg, with 0^0 = 1.
std::vector<double> power_table(std::size_t max_deg, double e) {
  std::vector<double> table(max_deg + 1);
  for (std::size_t d = 0; d <= max_deg; ++d) table[d] = std::pow(static_cast<double>(d), e);
  return table;
}

// e * ln(deg) per degree value, with 0 * ln 0 = 0.
std::vector<double> log_power_table(std::size_t max_deg, double e) {
  std::vector<double> table(max_deg + 1);
  for (std::size_t d = 0; d <= max_deg; ++d) {
    table[d] = e == 0.0 ? 0.0 : e * std::log(static_cast<double>(d));
  }
  return table;
}

constexpr std::size_t kPrefetchDistance = 64;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

std::optional<double> linear_walk_moment(const Graph& g, std::span<const double> exps) {
  const std::size_t n = g.vertex_count();
  const std::size_t max_deg = max_degree(g);
  const auto& off = g.offsets();
  const auto& tgt = g.targets();

  auto table = power_table(max_deg, exps.back());
  std::vector<double> msg(n);
  for (std::size_t v = 0; v < n; ++v) msg[v] = table[g.degree_unchecked(static_cast<VertexId>(v))];

  std::vector<double> next(n);
  for (std::size_t level = exps.size() - 1; level-- > 0;) {
    table = power_table(max_deg, exps[level]);
    for (std::size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (std::size_t i = off[v]; i < off[v + 1]; ++i) acc += msg[tgt[i]];
      next[v] = table[off[v + 1] - off[v]] * acc;
    }
    msg.swap(next);
  }

  double total = 0.0;
  for (double x : msg) total += x;
  if (!std::isfinite(total)) return std::nullopt;
  return total;
}

double log_walk_moment(const Graph& g, std::span<const double> exps) {
  const std::size_t n = g.vertex_count();
  const std::size_t max_deg = max_degree(g);
  const auto& off = g.offsets();
  const auto& tgt = g.targets();

  auto table = log_power_table(max_deg, exps.back());
  std::vector<double> msg(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t d = g.degree_unchecked(static_cast<VertexId>(v));
    // A vertex with no edges only contributes when the walk has length 0.
    msg[v] = (d == 0 && exps.size() > 1) ? kNegInf : table[d];
  }

  std::vector<double> next(n);
  std::vector<double> scratch;
  for (std::size_t level = exps.size() - 1; level-- > 0;) {
    table = log_power_table(max_deg, exps[level]);
    for (std::size_t v = 0; v < n; ++v) {
      scratch.clear();
      for (std::size_t i = off[v]; i < off[v + 1]; ++i) scratch.push_back(msg[tgt[i]]);
      const double inner = log_sum_exp(scratch);
      next[v] = inner == kNegInf ? kNegInf : table[off[v + 1] - off[v]] + inner;
    }
    msg.swap(next);
  }
  return log_sum_exp(msg);
}

using U128 = unsigned __int128;

std::optional<U128> checked_pow(U128 base, unsigned e) {
  U128 out = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(out, base, &out)) return std::nullopt;
  }
  return out;
}

}  // namespace

MomentValue walk_moment(const Graph& g, std::span<const double> exponents) {
  if (exponents.empty()) throw DomainError("walk_moment needs at least one exponent");
  if (auto raw = linear_walk_moment(g, exponents)) {
    return {*raw, *raw > 0.0 ? std::log(*raw) : kNegInf};
  }
  return {std::numeric_limits<double>::infinity(), log_walk_moment(g, exponents)};
}

std::optional<U128> exact_walk_moment(const Graph& g, std::span<const unsigned> exponents) {
  if (exponents.empty()) throw DomainError("exact_walk_moment needs at least one exponent");
  const std::size_t n = g.vertex_count();
  const auto& off = g.offsets();
  const auto& tgt = g.targets();

  auto level_weight = [&](std::size_t v, unsigned e) -> std::optional<U128> {
    return checked_pow(static_cast<U128>(off[v + 1] - off[v]), e);
  };

  std::vector<U128> msg(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto w = level_weight(v, exponents.back());
    if (!w) return std::nullopt;
    msg[v] = *w;
  }
  std::vector<U128> next(n);
  for (std::size_t level = exponents.size() - 1; level-- > 0;) {
    for (std::size_t v = 0; v < n; ++v) {
      U128 acc = 0;
      for (std::size_t i = off[v]; i < off[v + 1]; ++i) {
        if (__builtin_add_overflow(acc, msg[tgt[i]], &acc)) return std::nullopt;
      }
      auto w = level_weight(v, exponents[level]);
      if (!w || __builtin_mul_overflow(*w, acc, &next[v])) return std::nullopt;
    }
    msg.swap(next);
  }
  U128 total = 0;
  for (U128 x : msg) {
    if (__builtin_add_overflow(total, x, &total)) return std::nullopt;
  }
  return total;
}

namespace {

void require_nonnegative(std::span<const double> params, std::string_view what) {
  for (double x : params) {
    if (!std::isfinite(x) || x < 0.0) {
      throw DomainError(std::string(what) + ": parameters must be finite and >= 0");
    }
  }
}

}  // namespace

double star_norm(const Graph& g, double p) {
  const double e[] = {p};
  require_nonnegative(e, "star_norm");
  return walk_moment(g, e).raw;
}

double bistar_moment(const Graph& g, double p, double q) {
  if (!(p >= 1.0 && q >= 1.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw DomainError("bistar_moment: p and q must be finite and >= 1");
  }
  const double e[] = {p - 1.0, q - 1.0};
  return walk_moment(g, e).raw;
}

double cat_v(const Graph& g, double p, double q, double r) {
  const double e[] = {p, q, r};
  require_nonnegative(e, "cat_v");
  return walk_moment(g, e).raw;
}

double cat_n(const Graph& g, double p, double q, double r, double s) {
  const double e[] = {p, q, r, s};
  require_nonnegative(e, "cat_n");
  return walk_moment(g, e).raw;
}

double cat_w(const Graph& g, double p, double q, double r, double s, double t) {
  const double e[] = {p, q, r, s, t};
  require_nonnegative(e, "cat_w");
  return walk_moment(g, e).raw;
}

std::size_t max_degree(const Graph& g) {
  std::size_t best = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    best = std::max(best, g.degree_unchecked(static_cast<VertexId>(v)));
  }
  return best;
}

std::vector<double> walk_exponents(const StatKey& key) {
  std::vector<double> e;
  switch (key.kind) {
    case StatKind::DomainSize:
    case StatKind::EdgeCount:
    case StatKind::MaxDegree: return e;
    case StatKind::Star: e = {key.params[0]}; break;
    case StatKind::BiStar: e = {key.params[0] - 1.0, key.params[1] - 1.0}; break;
    case StatKind::CatV:
    case StatKind::CatN:
    case StatKind::CatW: e = key.params; break;
  }
  // Transposing reverses the walk: the B-side endpoint becomes the first.
  if (key.orientation == Orientation::Transposed) std::reverse(e.begin(), e.end());
  return e;
}

namespace {

StatRecord from_count(StatKey key, double count) {
  return {std::move(key), count > 0.0 ? std::log(count) : kNegInf, count};
}

long double to_long_double(U128 x) {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  const auto lo = static_cast<std::uint64_t>(x);
  return static_cast<long double>(hi) * 18446744073709551616.0L + static_cast<long double>(lo);
}

}  // namespace

StatRecord compute_stat(const Graph& g, const StatKey& key) {
  key.validate();
  switch (key.kind) {
    case StatKind::DomainSize: return from_count(key, static_cast<double>(g.vertex_count()));
    case StatKind::EdgeCount: return from_count(key, static_cast<double>(g.directed_edge_count()));
    case StatKind::MaxDegree: return from_count(key, static_cast<double>(max_degree(g)));
    default: break;
  }

  const auto exps = walk_exponents(key);
  // Small integer exponents: exact accumulation, then one rounding.
  const bool integral = std::all_of(exps.begin(), exps.end(), [](double e) {
    return e == std::floor(e) && e <= 64.0;
  });
  if (integral) {
    std::vector<unsigned> ints(exps.begin(), exps.end());
    if (auto exact = exact_walk_moment(g, ints)) {
      if (*exact == 0) return {key, kNegInf, 0.0};
      const long double value = to_long_double(*exact);
      return {key, static_cast<double>(std::log(value)), static_cast<double>(value)};
    }
  }
  auto m = walk_moment(g, exps);
  return {key, m.log, m.raw};
}

}  // namespace catbound
