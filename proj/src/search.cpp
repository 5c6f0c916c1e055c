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

#include "beamgraph/search.hpp"

namespace beamgraph {

namespace {

template <typename T>
SearchResult exact_beam_search(const GraphIndex &graph,
                               const VectorDataset &data,
                               std::span<const T> query,
                               std::uint32_t beam_width, VertexId start) {
  require(data.kind() == kind_of_v<T>, ErrorCode::kInvalidArgument,
          "query element kind differs from the dataset");
  require(query.size() == data.dims(), ErrorCode::kDimensionMismatch,
          "query dims differ from the dataset");
  require(graph.active_count() <= data.count(), ErrorCode::kInvalidArgument,
          "graph has more active vertices than the dataset has rows");
  const std::size_t dims = data.dims();
  const T *base = data.values<T>().data();
  const T *q = query.data();
  return beam_search_with(
      graph,
      [=](VertexId v) {
        return kernels::row_distance(q, base + static_cast<std::size_t>(v) * dims,
                                     dims);
      },
      beam_width, start);
}

template <typename T>
std::vector<Candidate> exact_knn_search(const GraphIndex &graph,
                                        const VectorDataset &data,
                                        std::span<const T> query,
                                        const SearchParams &params) {
  params.validate();
  auto result = exact_beam_search(graph, data, query, params.beam_width,
                                  graph.entry_point());
  auto &f = result.frontier;
  f.resize(std::min<std::size_t>(params.k, f.size()));
  return std::move(f);
}

}  // namespace

void SearchParams::validate() const {
  require(beam_width >= 1 && beam_width <= kMaxBeamWidth,
          ErrorCode::kInvalidArgument, "beam width must be in [1, 1024]");
  require(k >= 1 && k <= beam_width, ErrorCode::kInvalidArgument,
          "k must be in [1, beam width]");
}

SearchResult beam_search(const GraphIndex &graph, const VectorDataset &data,
                         std::span<const float> query, std::uint32_t beam_width,
                         VertexId start) {
  return exact_beam_search(graph, data, query, beam_width, start);
}

SearchResult beam_search(const GraphIndex &graph, const VectorDataset &data,
                         std::span<const std::uint8_t> query,
                         std::uint32_t beam_width, VertexId start) {
  return exact_beam_search(graph, data, query, beam_width, start);
}

std::vector<Candidate> search_knn(const GraphIndex &graph,
                                  const VectorDataset &data,
                                  std::span<const float> query,
                                  const SearchParams &params) {
  return exact_knn_search(graph, data, query, params);
}

std::vector<Candidate> search_knn(const GraphIndex &graph,
                                  const VectorDataset &data,
                                  std::span<const std::uint8_t> query,
                                  const SearchParams &params) {
  return exact_knn_search(graph, data, query, params);
}

std::vector<Candidate> search_knn_row(const GraphIndex &graph,
                                      const VectorDataset &data,
                                      const VectorDataset &queries,
                                      std::size_t q,
                                      const SearchParams &params) {
  require(q < queries.count(), ErrorCode::kOutOfRange, "query row out of range");
  if (queries.kind() == ElementKind::kF32) {
    return search_knn(graph, data, queries.row<float>(q), params);
  }
  return search_knn(graph, data, queries.row<std::uint8_t>(q), params);
}

}  // namespace beamgraph
