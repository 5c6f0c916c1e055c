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

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "beamgraph/dataset.hpp"
#include "beamgraph/distance.hpp"
#include "beamgraph/graph.hpp"
#include "beamgraph/io.hpp"

namespace beamgraph {

class RaBitQIndex;

struct SweepPoint {
  std::uint32_t beam_width = 0;
  std::size_t k = 0;
  double recall = 0.0;
  double qps = 0.0;
  double mean_latency_us = 0.0;
};

//! Exact distance of data row `id` to query `q`, in the ground truth's
//! convention (squared L2 or negated inner product).
using DistanceLookup = std::function<double(std::size_t q, VertexId id)>;

/*! Mean over queries of |{returned ids within the k-th exact distance}| / k.
 *
 * An id counts when its exact distance is at most gt[q][k-1] plus a 1e-6
 * relative slack, so ties at rank k are not penalized. Each result list must
 * hold at least k ids; only its first k are scored.
 */
double recall_at_k(std::span<const std::vector<VertexId>> results,
                   const GroundTruth &gt, std::size_t k,
                   const DistanceLookup &distance);

//! recall_at_k with distances recomputed from `data` and `queries`.
double recall_at_k(std::span<const std::vector<VertexId>> results,
                   const GroundTruth &gt, std::size_t k,
                   const VectorDataset &data, const VectorDataset &queries,
                   DistanceKind kind);

struct SweepConfig {
  std::size_t k = 10;
  std::vector<std::uint32_t> beam_widths;
  //! Worker threads for the query batch; 0 uses the OpenMP default.
  int threads = 0;
  //! When set, searches run on quantized estimates.
  const RaBitQIndex *quantizer = nullptr;
  bool rerank = true;

  void validate() const;
};

/*! For each beam width: one untimed pass over all queries, then a timed pass
 * issued as a parallel batch. QPS is queries over the timed pass wall time;
 * latency is the mean per-query time inside that pass.
 *
 * `data` and `queries` are what the graph indexes (augmented for MIPS);
 * `distance` scores recall against `gt`.
 */
std::vector<SweepPoint> sweep(const GraphIndex &graph, const VectorDataset &data,
                              const VectorDataset &queries,
                              const GroundTruth &gt,
                              const DistanceLookup &distance,
                              const SweepConfig &config);

//! Header `beam_width,k,recall,qps,mean_latency_us`, then one row per point.
void write_sweep_csv(std::ostream &out, std::span<const SweepPoint> points);
std::string sweep_csv(std::span<const SweepPoint> points);

}  // namespace beamgraph
