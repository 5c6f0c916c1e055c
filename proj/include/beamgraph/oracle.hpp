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

#pragma once

#include <cstddef>

#include "beamgraph/dataset.hpp"
#include "beamgraph/distance.hpp"
#include "beamgraph/io.hpp"

namespace beamgraph {

/*! Exhaustive top-k for every query row.
 *
 * Distances are accumulated in f64 and rows are ordered by (dist, id); for
 * kInnerProduct the stored distance is -<q, x>. Parallel over queries and
 * independent of the thread count.
 */
GroundTruth exact_knn(const VectorDataset &data, const VectorDataset &queries,
                      std::size_t k, DistanceKind kind);

//! f64 distance between data row `id` and query row `q` under `kind`, in the
//! same convention exact_knn stores.
double exact_distance(const VectorDataset &data, std::size_t id,
                      const VectorDataset &queries, std::size_t q,
                      DistanceKind kind);

}  // namespace beamgraph
