#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace catbound {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// A simple undirected graph stored as the symmetric directed relation
/// R = {(u, v), (v, u) : uv is an edge}. Adjacency is kept in CSR form with
/// every neighbor list sorted; there are no self-loops and no duplicates.
///
/// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on `vertex_count` vertices. Edges are symmetrized,
  /// self-loops and duplicates are dropped. Vertex labels default to the
  /// decimal ids.
  static Graph from_edges(std::size_t vertex_count, std::span<const Edge> edges,
                          std::vector<std::string> labels = {});

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  /// |R|, i.e. twice the number of undirected edges.
  std::size_t directed_edge_count() const noexcept { return targets_.size(); }
  std::size_t undirected_edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const;
  /// Throws DomainError for v >= vertex_count().
  std::size_t degree(VertexId v) const;
  bool has_edge(VertexId u, VertexId v) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Undirected edges (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;

  // Unchecked fast accessors for the statistics kernels.
  std::size_t degree_unchecked(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<VertexId>& targets() const noexcept { return targets_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
  std::vector<std::string> labels_;
};

/// Parses a whitespace-separated edge list. Lines starting with '#' and
/// blank lines are skipped; every other line must hold exactly two tokens.
/// Tokens are interned to dense ids in order of first appearance, including
/// tokens that only occur on a self-loop line.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::filesystem::path& path);

/// Canonical dump: one "u v" line per undirected edge (u < v under the dense
/// ids, lines ordered by (v, u)), written with the vertex labels. A vertex
/// that would otherwise be introduced out of id order (or is isolated) is
/// announced by a "u u" line, which the loader drops as a self-loop. Loading
/// the dump reproduces the graph exactly.
void write_edge_list(const Graph& g, std::ostream& out);

/// Throws DomainError when v is not a vertex of g.
std::size_t degree_of(const Graph& g, VertexId v);

}  // namespace catbound
