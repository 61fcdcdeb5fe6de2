#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catbound/graph.hpp"

namespace catbound {

/// A small query graph H. Vertices 0..vertex_count-1 are the query
/// variables; each edge is one binary atom.
struct Pattern {
  std::string name;
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;

  /// Throws DomainError unless the pattern is nonempty, simple, connected
  /// and every edge endpoint is in range.
  void validate() const;
};

/// All connected simple graphs on 3, 4 and 5 vertices up to isomorphism
/// (2 + 6 + 21 = 29), ordered by vertex count then edge count.
const std::vector<Pattern>& catalog();
std::optional<Pattern> find_pattern(std::string_view name);

/// Reads a pattern in the edge-list format used for graphs.
Pattern load_pattern(std::istream& in, std::string name);

/// Renames vertex v to perm[v].
Pattern relabel(const Pattern& h, std::span<const VertexId> perm);

/// Backtracking order: BFS from the lowest-id vertex of maximum degree,
/// visiting neighbors in increasing id.
std::vector<VertexId> matching_order(const Pattern& h);

inline constexpr std::uint64_t kDefaultHomBudget = 1'000'000'000;

/// Number of maps V(H) -> V(G) sending every pattern edge to an edge of G
/// (homomorphisms, not embeddings). Partial maps are extended along
/// `matching_order`, each new vertex drawn from the adjacency list of an
/// already-placed neighbor. A trailing run of the order that is independent
/// in H is counted in closed form as a product of candidate-set sizes.
///
/// Throws BudgetExceeded once more than `budget` candidate extensions have
/// been examined, and std::overflow_error if the count exceeds 64 bits.
std::uint64_t count_homs(const Pattern& h, const Graph& g, std::uint64_t budget = kDefaultHomBudget);

}  // namespace catbound
