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

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "beamgraph/dataset.hpp"
#include "beamgraph/distance.hpp"
#include "beamgraph/graph.hpp"

namespace beamgraph {

inline constexpr std::uint32_t kMaxBeamWidth = 1024;

struct SearchParams {
  std::uint32_t beam_width = 64;
  std::uint32_t k = 10;
  //! Quantized search only: re-score the whole frontier with exact distances.
  bool rerank = false;

  //! Requires 1 <= k <= beam_width <= kMaxBeamWidth.
  void validate() const;
};

struct SearchStats {
  std::uint64_t hops = 0;            // vertices expanded
  std::uint64_t distance_evals = 0;  // calls to the distance function
};

struct SearchResult {
  std::vector<Candidate> frontier;  // sorted by (dist, id), <= beam_width
  std::vector<Candidate> visited;   // expansion order
  SearchStats stats;
};

namespace detail {

//! Exact membership over vertex ids, cleared in O(1) by bumping an epoch.
class SeenSet {
 public:
  void reset(std::size_t universe) {
    if (stamps_.size() < universe) {
      stamps_.resize(universe, 0);
    }
    if (++epoch_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), 0);
      epoch_ = 1;
    }
  }
  //! Returns true if v was not yet present.
  bool insert(VertexId v) {
    if (stamps_[v] == epoch_) {
      return false;
    }
    stamps_[v] = epoch_;
    return true;
  }
  bool contains(VertexId v) const {
    return stamps_[v] == epoch_;
  }

 private:
  std::vector<std::uint32_t> stamps_;
  std::uint32_t epoch_ = 0;
};

inline SeenSet &thread_seen_set() {
  thread_local SeenSet seen;
  return seen;
}

struct NoIterationHook {
  void operator()(std::span<const Candidate>) const noexcept {}
};

}  // namespace detail

/*! Greedy beam search from `start`, with `dist(v)` giving the distance from
 * the query to vertex v.
 *
 * The frontier is a sorted array of at most beam_width entries. Each round
 * expands the closest unexpanded frontier entry, evaluates its neighbors
 * that were never evaluated before in this search, merges them into the
 * frontier and truncates it back to beam_width by (dist, id). A neighbor
 * that only ties the current worst entry of a full frontier is not
 * admitted. The search ends once every frontier entry has been expanded.
 *
 * Every vertex is evaluated at most once. The seen set is exact, so a
 * vertex that was evaluated and later truncated away is not revisited; it
 * could never re-enter, since the frontier's worst entry only improves.
 *
 * `on_round` receives the frontier after each round's merge.
 */
template <typename DistFn, typename RoundHook = detail::NoIterationHook>
SearchResult beam_search_with(const GraphIndex &graph, DistFn &&dist,
                              std::uint32_t beam_width, VertexId start,
                              RoundHook &&on_round = {}) {
  require(!graph.empty(), ErrorCode::kInvalidArgument, "search on an empty graph");
  require(start < graph.active_count(), ErrorCode::kOutOfRange,
          "start vertex is not active");
  require(beam_width >= 1 && beam_width <= kMaxBeamWidth,
          ErrorCode::kInvalidArgument, "beam width must be in [1, 1024]");

  SearchResult result;
  auto &frontier = result.frontier;
  frontier.reserve(beam_width + 1);
  std::vector<char> expanded;
  expanded.reserve(beam_width + 1);

  detail::SeenSet &seen = detail::thread_seen_set();
  seen.reset(graph.capacity());

  seen.insert(start);
  frontier.push_back({start, dist(start)});
  expanded.push_back(0);
  result.stats.distance_evals = 1;

  std::size_t cursor = 0;  // no unexpanded entry sits before this index
  while (true) {
    while (cursor < frontier.size() && expanded[cursor]) {
      ++cursor;
    }
    if (cursor == frontier.size()) {
      break;
    }
    const Candidate current = frontier[cursor];
    expanded[cursor] = 1;
    result.visited.push_back(current);
    ++result.stats.hops;

    std::size_t lowest_insert = frontier.size();
    for (VertexId v : graph.neighbor_view(current.id)) {
      if (!seen.insert(v)) {
        continue;
      }
      const Candidate cand{v, dist(v)};
      ++result.stats.distance_evals;
      if (frontier.size() == beam_width && !closer(cand, frontier.back())) {
        continue;
      }
      const auto pos = static_cast<std::size_t>(
          std::upper_bound(frontier.begin(), frontier.end(), cand, closer) -
          frontier.begin());
      frontier.insert(frontier.begin() + pos, cand);
      expanded.insert(expanded.begin() + pos, 0);
      if (frontier.size() > beam_width) {
        frontier.pop_back();
        expanded.pop_back();
      }
      lowest_insert = std::min(lowest_insert, pos);
    }
    cursor = std::min(cursor, lowest_insert);
    on_round(std::span<const Candidate>(frontier));
  }
  return result;
}

//! Beam search with exact squared-L2 distances over dataset rows.
SearchResult beam_search(const GraphIndex &graph, const VectorDataset &data,
                         std::span<const float> query, std::uint32_t beam_width,
                         VertexId start);
SearchResult beam_search(const GraphIndex &graph, const VectorDataset &data,
                         std::span<const std::uint8_t> query,
                         std::uint32_t beam_width, VertexId start);

/*! Approximate k nearest neighbors from the graph's entry point: the first
 * min(k, frontier size) frontier entries. rerank has no effect here because
 * the frontier distances are already exact.
 */
std::vector<Candidate> search_knn(const GraphIndex &graph,
                                  const VectorDataset &data,
                                  std::span<const float> query,
                                  const SearchParams &params);
std::vector<Candidate> search_knn(const GraphIndex &graph,
                                  const VectorDataset &data,
                                  std::span<const std::uint8_t> query,
                                  const SearchParams &params);

//! search_knn for row `q` of a query set of the same element kind.
std::vector<Candidate> search_knn_row(const GraphIndex &graph,
                                      const VectorDataset &data,
                                      const VectorDataset &queries,
                                      std::size_t q,
                                      const SearchParams &params);

}  // namespace beamgraph
