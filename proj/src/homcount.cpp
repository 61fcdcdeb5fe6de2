#include "catbound/homcount.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <stdexcept>

#include "catbound/errors.hpp"

namespace catbound {

void Pattern::validate() const {
  if (vertex_count == 0) throw DomainError("pattern '" + name + "' has no vertices");
  std::vector<std::vector<VertexId>> adj(vertex_count);
  std::vector<Edge> seen;
  for (auto [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count) {
      throw DomainError("pattern '" + name + "': edge endpoint out of range");
    }
    if (u == v) throw DomainError("pattern '" + name + "': self-loop on vertex " + std::to_string(u));
    seen.emplace_back(std::min(u, v), std::max(u, v));
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw DomainError("pattern '" + name + "': duplicate edge");
  }
  std::vector<bool> reached(vertex_count, false);
  std::vector<VertexId> stack{0};
  reached[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    for (VertexId v : adj[u]) {
      if (!reached[v]) {
        reached[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  if (count != vertex_count) throw DomainError("pattern '" + name + "' is not connected");
}

const std::vector<Pattern>& catalog() {
  static const std::vector<Pattern> patterns = [] {
    std::vector<Pattern> out = {
        {"path3", 3, {{0, 1}, {0, 2}}},
        {"K3", 3, {{0, 1}, {0, 2}, {1, 2}}},

        {"claw", 4, {{0, 1}, {0, 2}, {0, 3}}},
        {"path4", 4, {{0, 1}, {1, 2}, {2, 3}}},
        {"pan3", 4, {{1, 2}, {0, 3}, {1, 3}, {2, 3}}},
        {"cycle4", 4, {{0, 1}, {0, 3}, {1, 2}, {2, 3}}},
        {"fan2", 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}}},
        {"K4", 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}},

        {"K14", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}},
        {"chair", 5, {{1, 2}, {0, 2}, {2, 3}, {3, 4}}},
        {"path5", 5, {{0, 1}, {1, 2}, {3, 4}, {0, 4}}},
        {"cricket", 5, {{0, 1}, {0, 4}, {0, 2}, {2, 3}, {0, 3}}},
        {"pan4", 5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {0, 4}}},
        {"bull", 5, {{0, 1}, {1, 2}, {3, 4}, {0, 4}, {1, 4}}},
        {"pan4c", 5, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 4}}},
        {"cycle5", 5, {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}}},
        {"dart", 5, {{0, 1}, {1, 2}, {3, 4}, {0, 4}, {1, 4}, {2, 4}}},
        {"K23", 5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {0, 4}, {2, 4}}},
        {"butterfly", 5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {3, 4}, {0, 4}}},
        {"house", 5, {{0, 1}, {0, 4}, {1, 2}, {1, 4}, {2, 3}, {3, 4}}},
        {"kite", 5, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {0, 4}, {2, 4}}},
        // Complement of K3 + 2K1: the two former isolated vertices are
        // adjacent to each other and to all three others.
        {"K3u2K1c", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}},
        {"fan3", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}}},
        {"clawuK1c", 5, {{0, 1}, {1, 2}, {0, 3}, {1, 3}, {3, 4}, {0, 4}, {1, 4}}},
        {"P2uP3c", 5, {{0, 1}, {0, 4}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}},
        {"P3u2K1c", 5, {{0, 1}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}},
        // Hub 0 over the rim cycle 1-2-3-4.
        {"wheel4", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {1, 4}}},
        {"K5_e", 5, {{0, 1}, {1, 2}, {1, 3}, {0, 2}, {2, 3}, {2, 4}, {0, 3}, {3, 4}, {0, 4}}},
        {"K5", 5,
         {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {0, 2}, {2, 3}, {2, 4}, {0, 3}, {3, 4}, {0, 4}}},
    };
    for (const auto& p : out) p.validate();
    return out;
  }();
  return patterns;
}

std::optional<Pattern> find_pattern(std::string_view name) {
  for (const auto& p : catalog()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

Pattern load_pattern(std::istream& in, std::string name) {
  Graph g = load_edge_list(in);
  Pattern h{std::move(name), g.vertex_count(), g.edges()};
  h.validate();
  return h;
}

Pattern relabel(const Pattern& h, std::span<const VertexId> perm) {
  if (perm.size() != h.vertex_count) throw DomainError("relabel: permutation size mismatch");
  Pattern out{h.name, h.vertex_count, {}};
  out.edges.reserve(h.edges.size());
  for (auto [u, v] : h.edges) out.edges.emplace_back(perm[u], perm[v]);
  return out;
}

namespace {

std::vector<std::vector<VertexId>> pattern_adjacency(const Pattern& h) {
  std::vector<std::vector<VertexId>> adj(h.vertex_count);
  for (auto [u, v] : h.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

}  // namespace

std::vector<VertexId> matching_order(const Pattern& h) {
  h.validate();
  const auto adj = pattern_adjacency(h);
  VertexId root = 0;
  for (VertexId v = 1; v < h.vertex_count; ++v) {
    if (adj[v].size() > adj[root].size()) root = v;
  }
  std::vector<VertexId> order{root};
  std::vector<bool> seen(h.vertex_count, false);
  seen[root] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (VertexId v : adj[order[head]]) {
      if (!seen[v]) {
        seen[v] = true;
        order.push_back(v);
      }
    }
  }
  return order;
}

namespace {

class HomCounter {
 public:
  HomCounter(const Pattern& h, const Graph& g, std::uint64_t budget) : g_(g), budget_(budget) {
    const auto adj = pattern_adjacency(h);
    order_ = matching_order(h);
    std::vector<std::size_t> position(h.vertex_count);
    for (std::size_t i = 0; i < order_.size(); ++i) position[order_[i]] = i;

    back_.resize(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) {
      for (VertexId w : adj[order_[i]]) {
        if (position[w] < i) back_[i].push_back(position[w]);
      }
    }

    // Longest suffix of the order that is independent in H (never
    // including the root).
    prefix_ = order_.size();
    while (prefix_ > 1) {
      const std::size_t i = prefix_ - 1;
      bool independent = true;
      for (std::size_t k = prefix_; k < order_.size(); ++k) {
        if (std::find(back_[k].begin(), back_[k].end(), i) != back_[k].end()) independent = false;
      }
      if (!independent) break;
      --prefix_;
    }
    image_.assign(order_.size(), 0);
  }

  std::uint64_t run() {
    if (g_.vertex_count() == 0) return 0;
    extend(0);
    return total_;
  }

 private:
  void charge(std::uint64_t steps) {
    steps_ += steps;
    if (steps_ > budget_) {
      throw BudgetExceeded("homomorphism count exceeded budget of " + std::to_string(budget_) +
                           " extension steps");
    }
  }

  static std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("homomorphism count overflow");
    return out;
  }

  bool adjacent_to_placed(VertexId candidate, std::size_t position, std::size_t skip) const {
    for (std::size_t j : back_[position]) {
      if (j != skip && !g_.has_edge(image_[j], candidate)) return false;
    }
    return true;
  }

  // Anchor = placed neighbor whose image has the smallest adjacency list.
  std::size_t anchor(std::size_t position) const {
    std::size_t best = back_[position].front();
    for (std::size_t j : back_[position]) {
      if (g_.degree_unchecked(image_[j]) < g_.degree_unchecked(image_[best])) best = j;
    }
    return best;
  }

  std::uint64_t candidate_count(std::size_t position) {
    const std::size_t a = anchor(position);
    auto nbrs = g_.neighbors(image_[a]);
    if (back_[position].size() == 1) {
      charge(1);
      return nbrs.size();
    }
    charge(nbrs.size());
    std::uint64_t count = 0;
    for (VertexId c : nbrs) {
      if (adjacent_to_placed(c, position, a)) ++count;
    }
    return count;
  }

  void extend(std::size_t position) {
    if (position == prefix_) {
      std::uint64_t product = 1;
      for (std::size_t i = prefix_; i < order_.size() && product != 0; ++i) {
        product = checked_mul(product, candidate_count(i));
      }
      if (__builtin_add_overflow(total_, product, &total_)) {
        throw std::overflow_error("homomorphism count overflow");
      }
      return;
    }
    if (position == 0) {
      for (VertexId v = 0; v < g_.vertex_count(); ++v) {
        charge(1);
        image_[0] = v;
        extend(1);
      }
      return;
    }
    const std::size_t a = anchor(position);
    auto nbrs = g_.neighbors(image_[a]);
    charge(nbrs.size());
    for (VertexId c : nbrs) {
      if (!adjacent_to_placed(c, position, a)) continue;
      image_[position] = c;
      extend(position + 1);
    }
  }

  const Graph& g_;
  std::uint64_t budget_;
  std::vector<VertexId> order_;
  std::vector<std::vector<std::size_t>> back_;
  std::size_t prefix_ = 0;
  std::vector<VertexId> image_;
  std::uint64_t steps_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace

std::uint64_t count_homs(const Pattern& h, const Graph& g, std::uint64_t budget) {
  h.validate();
  return HomCounter(h, g, budget).run();
}

}  // namespace catbound
