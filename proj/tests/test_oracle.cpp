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

#include <numeric>
#include <random>

#include "beamgraph/distance.hpp"
#include "beamgraph/mips.hpp"
#include "beamgraph/oracle.hpp"
#include "support.hpp"

using namespace beamgraph;

namespace {

// Second scan, written independently: full sort of (distance, id).
GroundTruth naive_knn(const VectorDataset &data, const VectorDataset &queries,
                      std::size_t k, DistanceKind kind) {
  GroundTruth gt;
  gt.query_count = queries.count();
  gt.k = k;
  for (std::size_t q = 0; q < queries.count(); ++q) {
    std::vector<std::pair<double, std::uint32_t>> all;
    for (std::size_t i = 0; i < data.count(); ++i) {
      const double d = kind == DistanceKind::kSquaredEuclidean
                           ? bgtest::sq_dist_f64(queries.row_f32(q), data.row_f32(i))
                           : -bgtest::dot_f64(queries.row_f32(q), data.row_f32(i));
      all.push_back({d, static_cast<std::uint32_t>(i)});
    }
    std::sort(all.begin(), all.end());
    for (std::size_t j = 0; j < k; ++j) {
      gt.ids.push_back(all[j].second);
      gt.distances.push_back(static_cast<float>(all[j].first));
    }
  }
  return gt;
}

}  // namespace

TEST(ExactKnn, FullRankingWhenKEqualsCount) {
  auto data = VectorDataset::from_f32(1, {5, 1, 3, 0});
  auto q = VectorDataset::from_f32(1, {2});
  const auto gt = exact_knn(data, q, 4, DistanceKind::kSquaredEuclidean);
  EXPECT_EQ(gt.ids, (std::vector<std::uint32_t>{1, 2, 3, 0}));
  EXPECT_EQ(gt.distances, (std::vector<float>{1, 1, 4, 9}));
}

TEST(ExactKnn, StoredVectorIsRankOne) {
  auto data = bgtest::uniform_f32(300, 12, 1);
  auto queries = data.slice(77, 78);
  const auto gt = exact_knn(data, queries, 5, DistanceKind::kSquaredEuclidean);
  EXPECT_EQ(gt.ids[0], 77u);
  EXPECT_EQ(gt.distances[0], 0.0f);
}

TEST(ExactKnn, MatchesIndependentScan) {
  auto data = bgtest::uniform_f32(1000, 32, 2);
  auto queries = bgtest::uniform_f32(50, 32, 3);
  for (auto kind : {DistanceKind::kSquaredEuclidean, DistanceKind::kInnerProduct}) {
    const auto a = exact_knn(data, queries, 10, kind);
    const auto b = naive_knn(data, queries, 10, kind);
    EXPECT_EQ(a.ids, b.ids);
    EXPECT_EQ(a.distances, b.distances);
    EXPECT_NO_THROW(a.validate());
    for (std::size_t q = 0; q < queries.count(); ++q) {
      for (std::size_t j = 0; j < 10; ++j) {
        EXPECT_EQ(static_cast<float>(exact_distance(data, a.row_ids(q)[j], queries, q, kind)),
                  a.row_distances(q)[j]);
      }
    }
  }
}

TEST(ExactKnn, U8Data) {
  auto data = bgtest::uniform_u8(200, 16, 4);
  auto queries = bgtest::uniform_u8(10, 16, 5);
  const auto gt = exact_knn(data, queries, 3, DistanceKind::kSquaredEuclidean);
  for (std::size_t q = 0; q < 10; ++q) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> all;
    for (std::size_t i = 0; i < 200; ++i) {
      all.push_back({sq_l2(queries.row_u8(q), data.row_u8(i)), static_cast<std::uint32_t>(i)});
    }
    std::sort(all.begin(), all.end());
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(gt.row_ids(q)[j], all[j].second);
    }
  }
}

TEST(ExactKnn, PermutationInvariant) {
  auto data = bgtest::uniform_f32(400, 8, 6);
  auto queries = bgtest::uniform_f32(20, 8, 7);
  std::vector<std::size_t> perm(400);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(8));
  VectorDataset shuffled(ElementKind::kF32, 8);
  for (std::size_t i : perm) {
    shuffled.push_back(data.row_f32(i));
  }
  const auto a = exact_knn(data, queries, 10, DistanceKind::kSquaredEuclidean);
  const auto b = exact_knn(shuffled, queries, 10, DistanceKind::kSquaredEuclidean);
  for (std::size_t q = 0; q < 20; ++q) {
    std::vector<std::uint32_t> x(a.row_ids(q).begin(), a.row_ids(q).end());
    std::vector<std::uint32_t> y;
    for (std::uint32_t id : b.row_ids(q)) {
      y.push_back(static_cast<std::uint32_t>(perm[id]));
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_EQ(x, y);
  }
}

TEST(ExactKnn, InnerProductMatchesAugmentedEuclidean) {
  for (std::uint32_t seed = 1; seed <= 10; ++seed) {
    auto data = bgtest::uniform_f32(500, 10, seed);
    auto queries = bgtest::uniform_f32(30, 10, seed + 100);
    auto [d, q] = mips_augment(data, queries);
    const auto ip = exact_knn(data, queries, 10, DistanceKind::kInnerProduct);
    const auto l2 = exact_knn(d.vectors, q.vectors, 10, DistanceKind::kSquaredEuclidean);
    EXPECT_EQ(ip.ids, l2.ids) << "seed " << seed;
  }
}

TEST(ExactKnn, Errors) {
  auto data = bgtest::uniform_f32(10, 4, 9);
  auto queries = bgtest::uniform_f32(2, 4, 10);
  EXPECT_ANY_THROW(exact_knn(data, queries, 0, DistanceKind::kSquaredEuclidean));
  EXPECT_ANY_THROW(exact_knn(data, queries, 11, DistanceKind::kSquaredEuclidean));
  EXPECT_ANY_THROW(exact_knn(data, bgtest::uniform_f32(2, 5, 1), 3,
                             DistanceKind::kSquaredEuclidean));
  EXPECT_ANY_THROW(exact_knn(bgtest::uniform_u8(10, 4, 1), queries, 3,
                             DistanceKind::kSquaredEuclidean));
}
