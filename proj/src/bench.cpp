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

#include "beamgraph/bench.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "beamgraph/oracle.hpp"
#include "beamgraph/rabitq.hpp"
#include "beamgraph/search.hpp"

namespace beamgraph {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<Candidate> run_query(const GraphIndex &graph,
                                 const VectorDataset &data,
                                 const VectorDataset &queries, std::size_t q,
                                 const SearchParams &params,
                                 const SweepConfig &config) {
  if (config.quantizer != nullptr) {
    return search_knn(graph, *config.quantizer, data, queries.row<float>(q),
                      params);
  }
  return search_knn_row(graph, data, queries, q, params);
}

// Runs every query once; returns per-query latencies summed in seconds.
double run_batch(const GraphIndex &graph, const VectorDataset &data,
                 const VectorDataset &queries, const SearchParams &params,
                 const SweepConfig &config,
                 std::vector<std::vector<VertexId>> &results) {
  const long long qn = static_cast<long long>(queries.count());
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
  double latency_sum = 0.0;
#pragma omp parallel for num_threads(threads) schedule(dynamic, 8) \
    reduction(+ : latency_sum)
  for (long long q = 0; q < qn; ++q) {
    const auto t0 = Clock::now();
    const auto found = run_query(graph, data, queries,
                                 static_cast<std::size_t>(q), params, config);
    latency_sum += std::chrono::duration<double>(Clock::now() - t0).count();
    auto &ids = results[static_cast<std::size_t>(q)];
    ids.clear();
    for (const auto &c : found) {
      ids.push_back(c.id);
    }
  }
  return latency_sum;
}

}  // namespace

double recall_at_k(std::span<const std::vector<VertexId>> results,
                   const GroundTruth &gt, std::size_t k,
                   const DistanceLookup &distance) {
  if (k < 1 || k > gt.k) {
    fail(ErrorCode::kOutOfRange, "recall k must be in [1, " +
                                     std::to_string(gt.k) + "], got " +
                                     std::to_string(k));
  }
  require(results.size() == gt.query_count, ErrorCode::kDimensionMismatch,
          "result count differs from the ground-truth query count");
  if (gt.query_count == 0) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t q = 0; q < gt.query_count; ++q) {
    require(results[q].size() >= k, ErrorCode::kInvalidArgument,
            "a result list holds fewer than k ids");
    const double bound = gt.row_distances(q)[k - 1];
    const double threshold = bound + 1e-6 * std::fabs(bound);
    std::size_t hits = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (distance(q, results[q][j]) <= threshold) {
        ++hits;
      }
    }
    total += static_cast<double>(hits) / static_cast<double>(k);
  }
  return total / static_cast<double>(gt.query_count);
}

double recall_at_k(std::span<const std::vector<VertexId>> results,
                   const GroundTruth &gt, std::size_t k,
                   const VectorDataset &data, const VectorDataset &queries,
                   DistanceKind kind) {
  return recall_at_k(results, gt, k, [&](std::size_t q, VertexId id) {
    return exact_distance(data, id, queries, q, kind);
  });
}

void SweepConfig::validate() const {
  require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  for (std::uint32_t b : beam_widths) {
    if (b < k || b > kMaxBeamWidth) {
      fail(ErrorCode::kInvalidArgument,
           "beam width " + std::to_string(b) + " must be in [k, " +
               std::to_string(kMaxBeamWidth) + "]");
    }
  }
  require(threads >= 0, ErrorCode::kInvalidArgument, "threads must be >= 0");
}

std::vector<SweepPoint> sweep(const GraphIndex &graph, const VectorDataset &data,
                              const VectorDataset &queries,
                              const GroundTruth &gt,
                              const DistanceLookup &distance,
                              const SweepConfig &config) {
  config.validate();
  require(gt.k >= config.k, ErrorCode::kInvalidArgument,
          "ground truth holds fewer than k neighbors per query");
  require(gt.query_count == queries.count(), ErrorCode::kDimensionMismatch,
          "ground truth and query file disagree on the query count");
  require(!graph.empty(), ErrorCode::kInvalidArgument, "graph is empty");
  if (config.quantizer != nullptr) {
    require(queries.kind() == ElementKind::kF32, ErrorCode::kInvalidArgument,
            "quantized search needs f32 queries");
  }

  std::vector<SweepPoint> points;
  std::vector<std::vector<VertexId>> results(queries.count());
  for (std::uint32_t beam : config.beam_widths) {
    SearchParams params;
    params.beam_width = beam;
    params.k = static_cast<std::uint32_t>(config.k);
    params.rerank = config.rerank;

    run_batch(graph, data, queries, params, config, results);
    const auto t0 = Clock::now();
    const double latency_sum =
        run_batch(graph, data, queries, params, config, results);
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();

    SweepPoint p;
    p.beam_width = beam;
    p.k = config.k;
    p.recall = recall_at_k(results, gt, config.k, distance);
    const double nq = static_cast<double>(queries.count());
    p.qps = nq / std::max(wall, 1e-9);
    p.mean_latency_us = latency_sum / nq * 1e6;
    points.push_back(p);
  }
  return points;
}

void write_sweep_csv(std::ostream &out, std::span<const SweepPoint> points) {
  out << "beam_width,k,recall,qps,mean_latency_us\n";
  char line[160];
  for (const auto &p : points) {
    std::snprintf(line, sizeof(line), "%u,%zu,%.6f,%.1f,%.3f\n", p.beam_width,
                  p.k, p.recall, p.qps, p.mean_latency_us);
    out << line;
  }
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::ostringstream out;
  write_sweep_csv(out, points);
  return out.str();
}

}  // namespace beamgraph
