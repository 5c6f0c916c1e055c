// Copyright 2026-present the beamgraph project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <map>

#include "beamgraph/build.hpp"
#include "beamgraph/search.hpp"
#include "beamgraph/synthetic.hpp"
#include "support.hpp"

using namespace beamgraph;

namespace {

GraphIndex complete_graph(std::size_t n, std::uint32_t R) {
  GraphIndex g(n, R);
  g.set_active_count(n);
  for (VertexId u = 0; u < n; ++u) {
    std::vector<VertexId> list;
    for (VertexId v = 0; v < n; ++v) {
      if (v != u) {
        list.push_back(v);
      }
    }
    g.set_neighbors(u, list);
  }
  return g;
}

GraphIndex path_graph(std::size_t n) {
  GraphIndex g(n, 2);
  g.set_active_count(n);
  for (VertexId u = 0; u < n; ++u) {
    std::vector<VertexId> list;
    if (u > 0) {
      list.push_back(u - 1);
    }
    if (u + 1 < n) {
      list.push_back(u + 1);
    }
    g.set_neighbors(u, list);
  }
  return g;
}

std::vector<VertexId> ids_of(const std::vector<Candidate> &c) {
  std::vector<VertexId> out;
  for (const auto &x : c) {
    out.push_back(x.id);
  }
  return out;
}

}  // namespace

TEST(BeamSearch, SingleVertex) {
  GraphIndex g(1, 4);
  g.set_active_count(1);
  auto data = VectorDataset::from_f32(2, {1, 1});
  const float q[2] = {0, 0};
  const auto r = beam_search(g, data, std::span<const float>(q), 4, 0);
  ASSERT_EQ(r.frontier.size(), 1u);
  EXPECT_EQ(r.frontier[0].id, 0u);
  EXPECT_EQ(r.frontier[0].dist, 2.0f);
  ASSERT_EQ(r.visited.size(), 1u);
  EXPECT_EQ(r.visited[0].id, 0u);
  EXPECT_EQ(r.stats.hops, 1u);
  EXPECT_EQ(r.stats.distance_evals, 1u);
}

TEST(BeamSearch, PathGraphHandTrace) {
  const auto g = path_graph(10);
  auto data = VectorDataset::from_f32(1, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const float q[1] = {9};
  const auto r = beam_search(g, data, std::span<const float>(q), 1, 0);
  std::vector<VertexId> order;
  for (const auto &c : r.visited) {
    order.push_back(c.id);
  }
  EXPECT_EQ(order, (std::vector<VertexId>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  ASSERT_EQ(r.frontier.size(), 1u);
  EXPECT_EQ(r.frontier[0].id, 9u);
  EXPECT_EQ(r.frontier[0].dist, 0.0f);
}

TEST(BeamSearch, CompleteGraphIsExact) {
  for (std::uint32_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 3 + seed % 15;
    auto data = bgtest::uniform_f32(n, 6, seed);
    auto queries = bgtest::uniform_f32(5, 6, seed + 1000);
    const auto g = complete_graph(n, static_cast<std::uint32_t>(n - 1));
    for (std::size_t qi = 0; qi < queries.count(); ++qi) {
      for (std::uint32_t k = 1; k <= n; k += 2) {
        const auto got = search_knn(g, data, queries.row_f32(qi), {k, k});
        EXPECT_EQ(ids_of(got), bgtest::brute_topk(data, queries.row_f32(qi), k));
      }
    }
  }
}

TEST(BeamSearch, FrontierAndVisitedInvariants) {
  auto data = gen_synthetic(3000, 12, 4, Distribution::kClustered);
  BuildParams params;
  params.degree_cap = 12;
  params.beam_width = 24;
  const auto g = build(data, params);
  auto queries = bgtest::uniform_f32(30, 12, 9);
  for (std::size_t qi = 0; qi < queries.count(); ++qi) {
    std::map<VertexId, int> calls;
    float last_kth = std::numeric_limits<float>::infinity();
    const std::uint32_t k = 10;
    const auto q = queries.row_f32(qi);
    const auto r = beam_search_with(
        g,
        [&](VertexId v) {
          ++calls[v];
          return sq_l2(q, data.row_f32(v));
        },
        32, g.entry_point(), [&](std::span<const Candidate> f) {
          if (f.size() >= k) {
            EXPECT_LE(f[k - 1].dist, last_kth);
            last_kth = f[k - 1].dist;
          }
        });
    for (const auto &[v, n] : calls) {
      ASSERT_EQ(n, 1) << "vertex " << v << " evaluated twice";
    }
    EXPECT_EQ(r.stats.distance_evals, calls.size());
    EXPECT_EQ(r.stats.hops, r.visited.size());
    EXPECT_TRUE(std::is_sorted(r.frontier.begin(), r.frontier.end(), closer));
    EXPECT_LE(r.frontier.size(), 32u);
    for (const auto &f : r.frontier) {
      EXPECT_NE(std::find(r.visited.begin(), r.visited.end(), f), r.visited.end());
    }
    for (std::size_t i = 1; i < r.frontier.size(); ++i) {
      EXPECT_NE(r.frontier[i].id, r.frontier[i - 1].id);
    }
  }
}

TEST(BeamSearch, Deterministic) {
  auto data = gen_synthetic(2000, 8, 6, Distribution::kGaussian);
  BuildParams params;
  params.degree_cap = 10;
  params.beam_width = 20;
  const auto g = build(data, params);
  const float q[8] = {0.1f, -0.3f, 0.5f, 0, 0, 1, -1, 0.2f};
  const auto a = beam_search(g, data, std::span<const float>(q), 40, g.entry_point());
  const auto b = beam_search(g, data, std::span<const float>(q), 40, g.entry_point());
  EXPECT_EQ(a.frontier, b.frontier);
  EXPECT_EQ(a.visited, b.visited);
  EXPECT_EQ(a.stats.distance_evals, b.stats.distance_evals);
}

TEST(SearchKnn, StoredVectorIsRankOne) {
  auto all = gen_synthetic(4000, 16, 8, Distribution::kClustered);
  BuildParams params;
  params.degree_cap = 16;
  params.beam_width = 32;
  params.two_pass = true;
  const auto g = build(all, params);
  for (std::size_t i = 0; i < all.count(); i += 97) {
    const auto got = search_knn(g, all, all.row_f32(i), {32, 1});
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0].id, i);
    EXPECT_EQ(got[0].dist, 0.0f);
  }
  std::size_t found = 0;
  for (std::size_t i = 0; i < all.count(); ++i) {
    found += search_knn(g, all, all.row_f32(i), {16, 1})[0].id == i;
  }
  EXPECT_GE(found, 0.995 * static_cast<double>(all.count()));
}

TEST(SearchKnn, KEqualsBeamReturnsFrontierAndRerankIsNoOp) {
  auto data = gen_synthetic(1500, 8, 10, Distribution::kClustered);
  BuildParams params;
  params.degree_cap = 8;
  params.beam_width = 16;
  const auto g = build(data, params);
  const auto q = data.row_f32(3);
  const auto full = beam_search(g, data, q, 20, g.entry_point());
  EXPECT_EQ(search_knn(g, data, q, {20, 20}), full.frontier);
  SearchParams on{20, 5, true}, off{20, 5, false};
  EXPECT_EQ(search_knn(g, data, q, on), search_knn(g, data, q, off));
}

TEST(SearchKnn, RecallGrowsWithBeam) {
  auto all = gen_synthetic(6000, 24, 12, Distribution::kClustered);
  auto data = all.slice(0, 5000);
  auto queries = all.slice(5000, 6000);
  BuildParams params;
  params.degree_cap = 16;
  params.beam_width = 32;
  const auto g = build(data, params);
  auto recall = [&](std::uint32_t beam) {
    double hits = 0.0;
    for (std::size_t qi = 0; qi < queries.count(); ++qi) {
      const auto truth = bgtest::brute_topk(data, queries.row_f32(qi), 10);
      const auto got = ids_of(search_knn(g, data, queries.row_f32(qi), {beam, 10}));
      for (VertexId id : got) {
        hits += std::find(truth.begin(), truth.end(), id) != truth.end();
      }
    }
    return hits / (10.0 * static_cast<double>(queries.count()));
  };
  const double r16 = recall(16);
  const double r128 = recall(128);
  EXPECT_GE(r128, r16);
  EXPECT_GT(r128, 0.9);
}

TEST(SearchKnn, U8Rows) {
  auto data = bgtest::uniform_u8(300, 8, 2);
  BuildParams params;
  params.degree_cap = 8;
  params.beam_width = 16;
  const auto g = build(data, params);
  const auto got = search_knn(g, data, data.row_u8(42), {16, 1});
  EXPECT_EQ(got[0].id, 42u);
  auto queries = data.slice(10, 11);
  EXPECT_EQ(search_knn_row(g, data, queries, 0, {16, 1})[0].id, 10u);
}

TEST(SearchKnn, Errors) {
  const auto g = complete_graph(4, 3);
  auto data = bgtest::uniform_f32(4, 3, 1);
  const float q3[3] = {0, 0, 0};
  const float q2[2] = {0, 0};
  const std::uint8_t u3[3] = {0, 0, 0};
  auto span3 = std::span<const float>(q3);
  EXPECT_ANY_THROW(search_knn(g, data, span3, {0, 0}));
  EXPECT_ANY_THROW(search_knn(g, data, span3, {1025, 10}));
  EXPECT_ANY_THROW(search_knn(g, data, span3, {4, 5}));
  EXPECT_ANY_THROW(search_knn(g, data, span3, {4, 0}));
  EXPECT_ANY_THROW(search_knn(g, data, std::span<const float>(q2), {4, 1}));
  EXPECT_ANY_THROW(search_knn(g, data, std::span<const std::uint8_t>(u3), {4, 1}));
  EXPECT_ANY_THROW(beam_search(g, data, span3, 4, 4));
  EXPECT_ANY_THROW(beam_search(GraphIndex(4, 3), data, span3, 4, 0));
}
