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

#include "beamgraph/oracle.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace beamgraph {

namespace {

template <typename T>
double pair_distance(const T *a, const T *b, std::size_t n, DistanceKind kind) {
  double acc = 0.0;
  if (kind == DistanceKind::kSquaredEuclidean) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
      acc += d * d;
    }
    return acc;
  }
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return -acc;
}

template <typename T>
void scan(const VectorDataset &data, const VectorDataset &queries,
          std::size_t k, DistanceKind kind, GroundTruth &gt) {
  const std::size_t n = data.count();
  const std::size_t d = data.dims();
  const T *base = data.values<T>().data();
  const long long qn = static_cast<long long>(queries.count());

#pragma omp parallel
  {
    std::vector<std::pair<double, std::uint32_t>> all(n);
#pragma omp for schedule(dynamic, 4)
    for (long long q = 0; q < qn; ++q) {
      const T *query = queries.row<T>(static_cast<std::size_t>(q)).data();
      for (std::size_t i = 0; i < n; ++i) {
        all[i] = {pair_distance(query, base + i * d, d, kind),
                  static_cast<std::uint32_t>(i)};
      }
      std::partial_sort(all.begin(), all.begin() + static_cast<long>(k),
                        all.end());
      for (std::size_t j = 0; j < k; ++j) {
        gt.ids[static_cast<std::size_t>(q) * k + j] = all[j].second;
        gt.distances[static_cast<std::size_t>(q) * k + j] =
            static_cast<float>(all[j].first);
      }
    }
  }
}

void check_pair(const VectorDataset &data, const VectorDataset &queries) {
  require(data.kind() == queries.kind(), ErrorCode::kInvalidArgument,
          "data and queries have different element kinds");
  require(data.dims() == queries.dims(), ErrorCode::kDimensionMismatch,
          "data and queries have different dims");
}

}  // namespace

GroundTruth exact_knn(const VectorDataset &data, const VectorDataset &queries,
                      std::size_t k, DistanceKind kind) {
  check_pair(data, queries);
  if (k < 1 || k > data.count()) {
    fail(ErrorCode::kOutOfRange, "k must be in [1, " +
                                     std::to_string(data.count()) + "], got " +
                                     std::to_string(k));
  }
  GroundTruth gt;
  gt.query_count = queries.count();
  gt.k = k;
  gt.ids.resize(gt.query_count * k);
  gt.distances.resize(gt.query_count * k);
  if (data.kind() == ElementKind::kF32) {
    scan<float>(data, queries, k, kind, gt);
  } else {
    scan<std::uint8_t>(data, queries, k, kind, gt);
  }
  return gt;
}

double exact_distance(const VectorDataset &data, std::size_t id,
                      const VectorDataset &queries, std::size_t q,
                      DistanceKind kind) {
  check_pair(data, queries);
  require(id < data.count() && q < queries.count(), ErrorCode::kOutOfRange,
          "row out of range");
  if (data.kind() == ElementKind::kF32) {
    return pair_distance(queries.row<float>(q).data(),
                         data.row<float>(id).data(), data.dims(), kind);
  }
  return pair_distance(queries.row<std::uint8_t>(q).data(),
                       data.row<std::uint8_t>(id).data(), data.dims(), kind);
}

}  // namespace beamgraph
