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

#include "beamgraph/build.hpp"

#include <algorithm>
#include <cmath>

#include "beamgraph/distance.hpp"
#include "beamgraph/rabitq.hpp"
#include "beamgraph/search.hpp"

namespace beamgraph {

namespace {

std::vector<VertexId> ids_of(std::span<const Candidate> cands) {
  std::vector<VertexId> ids(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    ids[i] = cands[i].id;
  }
  return ids;
}

template <typename T>
class Builder {
 public:
  Builder(GraphIndex &graph, const VectorDataset &data,
          const BuildParams &params, BuildObserver *observer,
          const RaBitQIndex *quantizer)
      : graph_(graph),
        data_(data),
        base_(data.values<T>().data()),
        dims_(data.dims()),
        params_(params),
        alpha_(params.alpha),
        observer_(observer),
        quantizer_(quantizer) {}

  void set_alpha(float alpha) {
    alpha_ = alpha;
  }

  //! Inserts [begin, end); begin == active_count.
  void insert(VertexId begin, VertexId end) {
    if (begin == end) {
      return;
    }
    if (graph_.empty()) {
      const VertexId seed_end = static_cast<VertexId>(
          std::min<std::size_t>(end, begin + seed_batch_size(params_)));
      run_batch(begin, seed_end, Mode::kSeed);
      begin = seed_end;
    }
    while (begin < end) {
      const VertexId stop = static_cast<VertexId>(
          std::min<std::size_t>(end, begin + params_.max_batch));
      run_batch(begin, stop, Mode::kInsert);
      begin = stop;
    }
  }

  //! Re-searches and re-prunes already-active vertices [begin, end).
  void refine(VertexId begin, VertexId end) {
    run_batch(begin, end, Mode::kRefine);
  }

 private:
  enum class Mode { kSeed, kInsert, kRefine };

  float dist(VertexId a, VertexId b) const {
    return kernels::row_distance(base_ + static_cast<std::size_t>(a) * dims_,
                                 base_ + static_cast<std::size_t>(b) * dims_,
                                 dims_);
  }

  //! A graph of at most R+1 vertices is kept complete unless always_prune.
  bool complete(VertexId end) const {
    return !params_.always_prune &&
           std::max<std::size_t>(end, graph_.active_count()) <=
               static_cast<std::size_t>(params_.degree_cap) + 1;
  }

  static std::vector<Candidate> sorted(std::vector<Candidate> pool) {
    std::sort(pool.begin(), pool.end(), closer);
    return pool;
  }

  std::vector<Candidate> prune(VertexId p, std::vector<Candidate> candidates) {
    auto d = [this](VertexId a, VertexId b) { return dist(a, b); };
    if (observer_ == nullptr) {
      return robust_prune(p, std::move(candidates), alpha_,
                          params_.degree_cap, d);
    }
    auto kept = robust_prune(p, candidates, alpha_, params_.degree_cap, d);
    observer_->on_prune(p, candidates, kept, alpha_);
    return kept;
  }

  void write(BuildPhase phase, VertexId u, std::span<const VertexId> list) {
    graph_.set_neighbors(u, list);
    if (observer_ != nullptr) {
      observer_->on_write(phase, u);
    }
  }

  void phase_begin(BuildPhase phase) {
    if (observer_ != nullptr) {
      observer_->on_phase_begin(phase, graph_);
    }
  }
  void phase_end(BuildPhase phase) {
    if (observer_ != nullptr) {
      observer_->on_phase_end(phase, graph_);
    }
  }

  //! Visited list of an insertion search for row x, with exact distances.
  std::vector<Candidate> search_candidates(VertexId x) const {
    const T *query = base_ + static_cast<std::size_t>(x) * dims_;
    std::vector<Candidate> visited;
    if constexpr (std::is_same_v<T, float>) {
      if (quantizer_ != nullptr) {
        const QueryPrep prep =
            prep_query(*quantizer_, std::span<const float>(query, dims_));
        visited = beam_search_with(
                      graph_,
                      [&](VertexId v) {
                        return estimate_sq_dist(*quantizer_, v, prep);
                      },
                      params_.beam_width, graph_.entry_point())
                      .visited;
        for (auto &c : visited) {
          c.dist = dist(x, c.id);
        }
        return visited;
      }
    }
    return beam_search_with(
               graph_,
               [&](VertexId v) {
                 return kernels::row_distance(
                     query, base_ + static_cast<std::size_t>(v) * dims_, dims_);
               },
               params_.beam_width, graph_.entry_point())
        .visited;
  }

  //! Phase 1 output for every x in the batch.
  std::vector<std::vector<Candidate>> gather(VertexId begin, VertexId end,
                                             Mode mode) {
    const std::size_t n = end - begin;
    std::vector<std::vector<Candidate>> pools(n);
    if (mode == Mode::kSeed || complete(end)) {
      const VertexId first = mode == Mode::kSeed ? begin : 0;
      const VertexId last = std::max<VertexId>(
          end, static_cast<VertexId>(graph_.active_count()));
#pragma omp parallel for schedule(dynamic, 8)
      for (std::size_t i = 0; i < n; ++i) {
        const VertexId x = begin + static_cast<VertexId>(i);
        auto &pool = pools[i];
        pool.reserve(last - first);
        for (VertexId y = first; y < last; ++y) {
          if (y != x) {
            pool.push_back({y, dist(x, y)});
          }
        }
      }
      return pools;
    }

#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < n; ++i) {
      const VertexId x = begin + static_cast<VertexId>(i);
      auto pool = search_candidates(x);
      if (mode == Mode::kRefine) {
        std::erase_if(pool, [x](const Candidate &c) { return c.id == x; });
        for (VertexId v : graph_.neighbor_view(x)) {
          if (std::none_of(pool.begin(), pool.end(),
                           [v](const Candidate &c) { return c.id == v; })) {
            pool.push_back({v, dist(x, v)});
          }
        }
      }
      pools[i] = std::move(pool);
    }
    return pools;
  }

  void run_batch(VertexId begin, VertexId end, Mode mode) {
    const std::size_t n = end - begin;

    phase_begin(BuildPhase::kSearch);
    auto pools = gather(begin, end, mode);
    phase_end(BuildPhase::kSearch);

    if (mode != Mode::kRefine) {
      graph_.set_active_count(end);
    }
    if (mode == Mode::kSeed) {
      graph_.set_entry_point(begin + medoid(data_.slice(begin, end)));
    }

    const bool wire_all = complete(end);
    phase_begin(BuildPhase::kWire);
    EdgeBuffer edges;
#pragma omp parallel
    {
      EdgeBuffer local;
#pragma omp for schedule(dynamic, 8)
      for (std::size_t i = 0; i < n; ++i) {
        const VertexId x = begin + static_cast<VertexId>(i);
        auto kept = wire_all ? sorted(pools[i]) : prune(x, pools[i]);
        write(BuildPhase::kWire, x, ids_of(kept));
        const auto &proposals = params_.reverse_all_visited ? pools[i] : kept;
        for (const Candidate &c : proposals) {
          local.push_back({c.id, x, c.dist});
        }
      }
#pragma omp critical(beamgraph_edge_buffer)
      edges.insert(edges.end(), local.begin(), local.end());
    }
    phase_end(BuildPhase::kWire);

    phase_begin(BuildPhase::kReverse);
    apply_reverse_edges(edges);
    phase_end(BuildPhase::kReverse);
  }

  void apply_reverse_edges(EdgeBuffer &edges) {
    sort_edge_buffer(edges);
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i == 0 || edges[i].target != edges[i - 1].target) {
        starts.push_back(i);
      }
    }
    starts.push_back(edges.size());
    const std::size_t groups = starts.size() - 1;
    const std::uint32_t R = params_.degree_cap;

#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t g = 0; g < groups; ++g) {
      const VertexId v = edges[starts[g]].target;
      const auto current = graph_.neighbor_view(v);
      std::vector<VertexId> merged(current.begin(), current.end());
      const std::size_t old_degree = merged.size();
      for (std::size_t i = starts[g]; i < starts[g + 1]; ++i) {
        const VertexId s = edges[i].source;
        if (std::find(merged.begin(), merged.end(), s) == merged.end()) {
          merged.push_back(s);
        }
      }
      if (merged.size() == old_degree && !params_.always_prune) {
        continue;
      }
      if (merged.size() <= R && !params_.always_prune) {
        write(BuildPhase::kReverse, v, merged);
        continue;
      }
      std::vector<Candidate> candidates;
      candidates.reserve(merged.size());
      for (std::size_t j = 0; j < old_degree; ++j) {
        candidates.push_back({merged[j], dist(v, merged[j])});
      }
      for (std::size_t i = starts[g]; i < starts[g + 1]; ++i) {
        const VertexId s = edges[i].source;
        if (std::find(current.begin(), current.end(), s) == current.end()) {
          candidates.push_back({s, edges[i].dist});
        }
      }
      const auto kept = prune(v, std::move(candidates));
      write(BuildPhase::kReverse, v, ids_of(kept));
    }
  }

  GraphIndex &graph_;
  const VectorDataset &data_;
  const T *base_;
  std::size_t dims_;
  const BuildParams &params_;
  float alpha_;
  BuildObserver *observer_;
  const RaBitQIndex *quantizer_;
};

void check_insert_range(const GraphIndex &graph, const VectorDataset &data,
                        VertexId begin, VertexId end) {
  require(begin <= end, ErrorCode::kInvalidArgument, "insert range is reversed");
  if (begin < graph.active_count()) {
    fail(ErrorCode::kInvalidArgument,
         "insert range overlaps active vertices (begin " +
             std::to_string(begin) + " < active " +
             std::to_string(graph.active_count()) + ")");
  }
  if (begin != end && begin > graph.active_count()) {
    fail(ErrorCode::kInvalidArgument,
         "insert range must start at the active count");
  }
  require(end <= data.count(), ErrorCode::kOutOfRange,
          "insert range exceeds the dataset");
  if (end > graph.capacity()) {
    fail(ErrorCode::kCapacity, "insert range exceeds graph capacity " +
                                   std::to_string(graph.capacity()));
  }
}

template <typename T>
void insert_range(GraphIndex &graph, const VectorDataset &data,
                  VertexId begin, VertexId end, const BuildParams &params,
                  BuildObserver *observer, const RaBitQIndex *quantizer) {
  Builder<T>(graph, data, params, observer, quantizer).insert(begin, end);
}

template <typename T>
GraphIndex build_impl(const VectorDataset &data, const BuildParams &params,
                      BuildObserver *observer, const RaBitQIndex *quantizer) {
  params.validate();
  require(!data.empty(), ErrorCode::kInvalidArgument, "build on an empty dataset");
  const VertexId global_medoid = medoid(data);

  GraphIndex graph(data.count(), params.degree_cap);
  Builder<T> builder(graph, data, params, observer, quantizer);
  if (params.two_pass) {
    builder.set_alpha(1.0f);
  }
  VertexId begin = 0;
  for (std::size_t size : batch_schedule(data.count(), params)) {
    const VertexId end = begin + static_cast<VertexId>(size);
    builder.insert(begin, end);
    if (global_medoid < graph.active_count()) {
      graph.set_entry_point(global_medoid);
    }
    begin = end;
  }
  if (params.two_pass) {
    builder.set_alpha(params.alpha);
    for (VertexId b = 0; b < data.count();) {
      const VertexId e = static_cast<VertexId>(
          std::min<std::size_t>(data.count(), b + params.max_batch));
      builder.refine(b, e);
      b = e;
    }
  }
  return graph;
}

}  // namespace

void BuildParams::validate() const {
  require(degree_cap >= 2, ErrorCode::kInvalidArgument,
          "degree cap R must be >= 2");
  require(beam_width >= 1 && beam_width <= kMaxBeamWidth,
          ErrorCode::kInvalidArgument, "build beam width must be in [1, 1024]");
  if (!(alpha >= 1.0f) || !std::isfinite(alpha)) {
    fail(ErrorCode::kInvalidArgument, "alpha must be finite and >= 1");
  }
  require(max_batch >= 1, ErrorCode::kInvalidArgument,
          "max batch must be >= 1");
}

std::vector<std::string> BuildParams::warnings() const {
  std::vector<std::string> out;
  if (beam_width < degree_cap) {
    out.push_back("build beam width " + std::to_string(beam_width) +
                  " is below the degree cap " + std::to_string(degree_cap) +
                  "; new vertices may end up with few neighbors");
  }
  return out;
}

std::size_t seed_batch_size(const BuildParams &params) {
  return std::max<std::size_t>(params.degree_cap + 1, 1000);
}

std::vector<std::size_t> batch_schedule(std::size_t count,
                                        const BuildParams &params) {
  std::vector<std::size_t> sizes;
  std::size_t next = std::min(seed_batch_size(params), params.max_batch);
  std::size_t done = 0;
  while (done < count) {
    const std::size_t size = std::min(next, count - done);
    sizes.push_back(size);
    done += size;
    next = std::min(next * 2, params.max_batch);
  }
  return sizes;
}

void sort_edge_buffer(EdgeBuffer &buffer) {
  std::sort(buffer.begin(), buffer.end(),
            [](const EdgeTriple &a, const EdgeTriple &b) {
              if (a.target != b.target) {
                return a.target < b.target;
              }
              if (a.dist != b.dist) {
                return a.dist < b.dist;
              }
              return a.source < b.source;
            });
}

void batch_insert(GraphIndex &graph, const VectorDataset &data, VertexId begin,
                  VertexId end, const BuildParams &params,
                  BuildObserver *observer) {
  params.validate();
  require(graph.degree_cap() == params.degree_cap, ErrorCode::kInvalidArgument,
          "graph degree cap differs from build parameters");
  check_insert_range(graph, data, begin, end);
  if (data.kind() == ElementKind::kF32) {
    insert_range<float>(graph, data, begin, end, params, observer, nullptr);
  } else {
    insert_range<std::uint8_t>(graph, data, begin, end, params, observer,
                               nullptr);
  }
}

GraphIndex build(const VectorDataset &data, const BuildParams &params,
                 BuildObserver *observer) {
  if (data.kind() == ElementKind::kF32) {
    return build_impl<float>(data, params, observer, nullptr);
  }
  return build_impl<std::uint8_t>(data, params, observer, nullptr);
}

GraphIndex build(const VectorDataset &data, const BuildParams &params,
                 const RaBitQIndex &search_quantizer, BuildObserver *observer) {
  require(data.kind() == ElementKind::kF32, ErrorCode::kInvalidArgument,
          "quantized build needs f32 data");
  require(search_quantizer.count() == data.count() &&
              search_quantizer.dims() == data.dims(),
          ErrorCode::kInvalidArgument,
          "quantizer was not fitted on this dataset");
  return build_impl<float>(data, params, observer, &search_quantizer);
}

void insert_stream(GraphIndex &graph, const VectorDataset &data, VertexId begin,
                   VertexId end, const BuildParams &params,
                   BuildObserver *observer) {
  if (begin == end) {
    return;
  }
  require(end <= data.count(), ErrorCode::kOutOfRange,
          "insert range exceeds the dataset");
  graph.reserve(end);
  batch_insert(graph, data, begin, end, params, observer);
}

}  // namespace beamgraph
