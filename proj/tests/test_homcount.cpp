#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "catbound/errors.hpp"
#include "catbound/homcount.hpp"
#include "catbound/stats.hpp"
#include "support/oracles.hpp"

using namespace catbound;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

Pattern pattern(const std::string& name) {
  auto p = find_pattern(name);
  EXPECT_TRUE(p.has_value()) << name;
  return *p;
}

}  // namespace

TEST(Catalog, HasTwentyNineDistinctConnectedPatterns) {
  const auto& cat = catalog();
  ASSERT_EQ(cat.size(), 29u);
  std::set<std::vector<Edge>> forms;
  std::set<std::string> names;
  for (const auto& h : cat) {
    EXPECT_NO_THROW(h.validate()) << h.name;
    EXPECT_GE(h.vertex_count, 3u);
    EXPECT_LE(h.vertex_count, 5u);
    forms.insert(oracle::canonical_form(h));
    names.insert(h.name);
  }
  EXPECT_EQ(forms.size(), 29u) << "two catalog entries are isomorphic";
  EXPECT_EQ(names.size(), 29u);
}

TEST(Catalog, CoversEveryConnectedGraphOnThreeToFiveVertices) {
  // 2 + 6 + 21 connected graphs on 3, 4, 5 vertices.
  std::map<std::size_t, std::size_t> by_size;
  for (const auto& h : catalog()) ++by_size[h.vertex_count];
  EXPECT_EQ(by_size[3], 2u);
  EXPECT_EQ(by_size[4], 6u);
  EXPECT_EQ(by_size[5], 21u);
}

TEST(Catalog, Lookup) {
  EXPECT_TRUE(find_pattern("K5").has_value());
  EXPECT_FALSE(find_pattern("K6").has_value());
  EXPECT_EQ(pattern("path3").edges.size(), 2u);
  EXPECT_EQ(pattern("K5").edges.size(), 10u);
}

TEST(CountHoms, Examples) {
  EXPECT_EQ(count_homs(pattern("path3"), parse("a b\nb c")), 6u);
  EXPECT_EQ(count_homs(pattern("K3"), parse("a b\nb c\nc a")), 6u);
  EXPECT_EQ(count_homs(pattern("K3"), parse("a b\nb c\nc d")), 0u);
  EXPECT_EQ(count_homs(pattern("K4"), parse("a b\nb c\nc a")), 0u);
  EXPECT_EQ(count_homs(pattern("path3"), Graph{}), 0u);
}

TEST(CountHoms, MatchesBruteForceOnRandomHosts) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    auto g = oracle::random_small(rng, 25, 3, 8);
    for (const auto& h : catalog()) {
      ASSERT_EQ(count_homs(h, g), oracle::brute_homs(h, g)) << h.name << " trial " << trial;
    }
  }
}

TEST(CountHoms, PathsEqualCaterpillarMoments) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = oracle::random_small(rng, 60);
    EXPECT_EQ(static_cast<double>(count_homs(pattern("path3"), g)), cat_v(g, 0, 0, 0));
    EXPECT_EQ(static_cast<double>(count_homs(pattern("path4"), g)), cat_n(g, 0, 0, 0, 0));
    EXPECT_EQ(static_cast<double>(count_homs(pattern("path5"), g)), cat_w(g, 0, 0, 0, 0, 0));
  }
}

TEST(CountHoms, InvariantUnderRelabelling) {
  std::mt19937_64 rng(47);
  auto g = oracle::random_small(rng, 50, 8, 14);
  for (const auto& h : catalog()) {
    std::vector<VertexId> perm(h.vertex_count);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(count_homs(relabel(h, perm), g), count_homs(h, g)) << h.name;
  }
}

TEST(CountHoms, BudgetExceeded) {
  std::mt19937_64 rng(53);
  auto g = oracle::random_gnm(60, 400, rng);
  EXPECT_THROW(count_homs(pattern("K4"), g, 100), BudgetExceeded);
  EXPECT_NO_THROW(count_homs(pattern("K4"), g));
}

TEST(MatchingOrder, IsPermutationStartingAtMaxDegree) {
  for (const auto& h : catalog()) {
    auto order = matching_order(h);
    ASSERT_EQ(order.size(), h.vertex_count);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
    std::vector<std::size_t> deg(h.vertex_count, 0);
    for (auto [u, v] : h.edges) ++deg[u], ++deg[v];
    EXPECT_EQ(deg[order[0]], *std::max_element(deg.begin(), deg.end())) << h.name;
  }
}

TEST(Pattern, ValidationRejectsBadInput) {
  EXPECT_THROW((Pattern{"empty", 0, {}}).validate(), DomainError);
  EXPECT_THROW((Pattern{"loop", 2, {{0, 0}}}).validate(), DomainError);
  EXPECT_THROW((Pattern{"range", 2, {{0, 2}}}).validate(), DomainError);
  EXPECT_THROW((Pattern{"split", 4, {{0, 1}, {2, 3}}}).validate(), DomainError);
  EXPECT_THROW((Pattern{"dup", 2, {{0, 1}, {1, 0}}}).validate(), DomainError);
}

TEST(Pattern, LoadFromEdgeList) {
  std::istringstream in("x y\ny z\nz x\n");
  auto h = load_pattern(in, "tri");
  EXPECT_EQ(h.vertex_count, 3u);
  EXPECT_EQ(oracle::canonical_form(h), oracle::canonical_form(pattern("K3")));
  std::istringstream bad("x y\nz w\n");
  EXPECT_THROW(load_pattern(bad, "disconnected"), DomainError);
}
