#include "catbound/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "catbound/errors.hpp"

namespace catbound {

Graph Graph::from_edges(std::size_t vertex_count, std::span<const Edge> edges,
                        std::vector<std::string> labels) {
  std::vector<Edge> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count) {
      throw DomainError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") references a vertex outside [0, " + std::to_string(vertex_count) + ")");
    }
    if (u == v) continue;
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.offsets_.assign(vertex_count + 1, 0);
  for (const auto& arc : arcs) ++g.offsets_[arc.first + 1];
  for (std::size_t v = 0; v < vertex_count; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.targets_.reserve(arcs.size());
  for (const auto& arc : arcs) g.targets_.push_back(arc.second);

  if (labels.empty()) {
    labels.reserve(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) labels.push_back(std::to_string(v));
  } else if (labels.size() != vertex_count) {
    throw DomainError("label count does not match vertex count");
  }
  g.labels_ = std::move(labels);
  return g;
}

std::span<const VertexId> Graph::neighbors(VertexId v) const {
  if (v >= vertex_count()) throw DomainError("vertex " + std::to_string(v) + " out of range");
  return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
}

std::size_t Graph::degree(VertexId v) const {
  if (v >= vertex_count()) throw DomainError("vertex " + std::to_string(v) + " out of range");
  return degree_unchecked(v);
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(undirected_edge_count());
  for (VertexId u = 0; u < vertex_count(); ++u) {
    for (VertexId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::size_t degree_of(const Graph& g, VertexId v) { return g.degree(v); }

namespace {

constexpr std::string_view kWhitespace = " \t\r\f\v";

// Splits on whitespace into at most `max_tokens + 1` pieces so callers can
// detect an overlong line without scanning it twice.
std::size_t split_tokens(std::string_view line, std::string_view* out, std::size_t max_tokens) {
  std::size_t count = 0;
  std::size_t pos = line.find_first_not_of(kWhitespace);
  while (pos != std::string_view::npos && count <= max_tokens) {
    std::size_t end = line.find_first_of(kWhitespace, pos);
    if (end == std::string_view::npos) end = line.size();
    if (count < max_tokens) out[count] = line.substr(pos, end - pos);
    ++count;
    pos = line.find_first_not_of(kWhitespace, end);
  }
  return count;
}

}  // namespace

Graph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, VertexId> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;

  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<VertexId>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    auto first = view.find_first_not_of(kWhitespace);
    if (first == std::string_view::npos || view[first] == '#') continue;
    std::string_view tokens[2];
    std::size_t n = split_tokens(view, tokens, 2);
    if (n != 2) {
      throw ParseError(line_no, "expected 2 tokens, found " + std::string(n > 2 ? "more than 2" : "1"));
    }
    VertexId u = intern(tokens[0]);
    VertexId v = intern(tokens[1]);
    edges.emplace_back(u, v);
  }
  const std::size_t n = labels.size();
  return Graph::from_edges(n, edges, std::move(labels));
}

Graph load_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const auto& labels = g.labels();
  auto announce = [&](VertexId v) { out << labels[v] << ' ' << labels[v] << '\n'; };

  // `next` is the smallest id whose label has not been written yet; the
  // loader assigns ids in order of first appearance, so every line must
  // introduce ids in increasing order.
  VertexId next = 0;
  const auto n = static_cast<VertexId>(g.vertex_count());
  for (VertexId k = 0; k < n; ++k) {
    for (VertexId j : g.neighbors(k)) {
      if (j >= k) break;
      if (k >= next) {
        if (!(j == next && k == next + 1)) {
          for (VertexId w = next; w < k; ++w) announce(w);
        }
        next = k + 1;
      }
      out << labels[j] << ' ' << labels[k] << '\n';
    }
  }
  for (VertexId w = next; w < n; ++w) announce(w);
}

}  // namespace catbound
