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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "beamgraph/dataset.hpp"
#include "beamgraph/error.hpp"

namespace beamgraph {

using VertexId = std::uint32_t;

struct Candidate {
  VertexId id = 0;
  float dist = 0.0f;

  friend bool operator==(const Candidate &, const Candidate &) = default;
};

//! Total order used everywhere candidates are sorted: (dist, id) ascending.
inline bool closer(const Candidate &a, const Candidate &b) noexcept {
  return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
}

/*! Directed graph with out-degree capped at degree_cap().
 *
 * Adjacency lives in one slab with a fixed stride of degree_cap() ids per
 * vertex, so vertex u's list starts at u * degree_cap(). Vertices
 * [0, active_count()) are live; the rest of the capacity is reserved.
 *
 * Writers of distinct vertices may run concurrently. A reader must not touch
 * a vertex that is being written in the same phase; the build phases
 * guarantee this, nothing here locks.
 */
class GraphIndex {
 public:
  GraphIndex(std::size_t capacity, std::uint32_t degree_cap);

  std::size_t capacity() const noexcept {
    return degrees_.size();
  }
  std::uint32_t degree_cap() const noexcept {
    return degree_cap_;
  }
  std::size_t active_count() const noexcept {
    return active_count_;
  }
  bool empty() const noexcept {
    return active_count_ == 0;
  }
  VertexId entry_point() const noexcept {
    return entry_point_;
  }

  void set_entry_point(VertexId v);

  //! Marks [0, n) live. n may only grow and must fit the capacity.
  void set_active_count(std::size_t n);

  //! Grows the reserved capacity; existing adjacency is preserved.
  void reserve(std::size_t capacity);

  std::uint32_t degree(VertexId u) const {
    return degrees_[u];
  }

  //! Borrowed view of u's current list; invalidated by any write to u.
  std::span<const VertexId> neighbor_view(VertexId u) const {
    return {slab_.data() + static_cast<std::size_t>(u) * degree_cap_,
            degrees_[u]};
  }

  //! Stable snapshot copy.
  std::vector<VertexId> neighbors(VertexId u) const;

  /*! Replaces u's list. Throws kInvariant if the list is longer than the
   * degree cap, contains u, repeats an id, or names an inactive vertex.
   */
  void set_neighbors(VertexId u, std::span<const VertexId> list);

  //! Full scan of every invariant; throws kInvariant on the first breach.
  void check_invariants() const;

  friend bool operator==(const GraphIndex &a, const GraphIndex &b);

 private:
  friend GraphIndex load_graph(const std::filesystem::path &path);

  std::uint32_t degree_cap_;
  std::size_t active_count_ = 0;
  VertexId entry_point_ = 0;
  std::vector<std::uint32_t> degrees_;
  std::vector<VertexId> slab_;
};

/*! Graph file, little-endian:
 *   u32 magic "BGRF", u32 version, u32 degree_cap, u64 active_count,
 *   u32 entry_point, active_count x u32 degrees,
 *   active_count x degree_cap x u32 slab (unused slots hold 0xFFFFFFFF).
 */
void save_graph(const std::filesystem::path &path, const GraphIndex &graph);
GraphIndex load_graph(const std::filesystem::path &path);

//! Row minimizing the squared distance to the f64 mean; ties -> lowest id.
VertexId medoid(const VectorDataset &dataset);

/*! Alpha-robust pruning of candidate neighbors for vertex p.
 *
 * `candidates` carries each candidate's squared distance to p; it must not
 * contain p or repeat an id. `dist(a, b)` returns the squared distance
 * between two vertices. Candidates are taken closest first by (dist, id);
 * each kept p* discards every remaining p' with
 *   alpha * d^2(p*, p') <= d^2(p, p'),
 * i.e. alpha is applied to the squared distances the index works with, as
 * in the reference Vamana implementations. On true distances this is the
 * test with sqrt(alpha). Stops at R kept or when no candidates remain. The
 * result is in keep order, so it is sorted by (dist, id) and starts with
 * the closest candidate.
 */
template <typename DistFn>
std::vector<Candidate> robust_prune(VertexId p,
                                    std::vector<Candidate> candidates,
                                    float alpha, std::uint32_t R,
                                    DistFn &&dist) {
  if (!(alpha >= 1.0f)) {
    fail(ErrorCode::kInvalidArgument, "alpha must be >= 1");
  }
  require(R >= 1, ErrorCode::kInvalidArgument, "degree cap must be >= 1");

  std::sort(candidates.begin(), candidates.end(), closer);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].id == p) {
      fail(ErrorCode::kInvalidArgument, "candidates contain the pivot itself");
    }
    if (i > 0 && candidates[i].id == candidates[i - 1].id) {
      fail(ErrorCode::kInvalidArgument,
           "duplicate candidate id " + std::to_string(candidates[i].id));
    }
  }

  std::vector<Candidate> kept;
  kept.reserve(std::min<std::size_t>(R, candidates.size()));
  std::vector<char> discarded(candidates.size(), 0);

  for (std::size_t i = 0; i < candidates.size() && kept.size() < R; ++i) {
    if (discarded[i]) {
      continue;
    }
    const Candidate &star = candidates[i];
    kept.push_back(star);
    if (kept.size() == R) {
      break;
    }
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      if (discarded[j]) {
        continue;
      }
      const double via_star =
          static_cast<double>(alpha) * dist(star.id, candidates[j].id);
      if (via_star <= candidates[j].dist) {
        discarded[j] = 1;
      }
    }
  }
  return kept;
}

}  // namespace beamgraph
