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
#include <span>
#include <string>
#include <vector>

#include "beamgraph/dataset.hpp"
#include "beamgraph/graph.hpp"

namespace beamgraph {

class RaBitQIndex;

struct BuildParams {
  std::uint32_t degree_cap = 64;  // R
  std::uint32_t beam_width = 128;
  float alpha = 1.2f;
  std::size_t max_batch = 100000;
  //! Second refinement pass over every vertex; the first pass uses alpha 1.
  bool two_pass = false;
  //! Reverse pass prunes every touched vertex instead of only on overflow.
  bool always_prune = false;
  //! Reverse pass receives every visited vertex of a new node, not only the
  //! neighbors its prune kept.
  bool reverse_all_visited = false;

  //! Throws kInvalidArgument unless R >= 2, alpha >= 1 and the beam width
  //! and batch cap are in range.
  void validate() const;
  //! Non-fatal advice, e.g. a build beam narrower than R.
  std::vector<std::string> warnings() const;
};

//! Size of the bootstrap batch that is wired by all-pairs pruning.
std::size_t seed_batch_size(const BuildParams &params);

//! Batch sizes used by build(): seed_batch_size(), then doubling, each
//! capped at max_batch, summing to count.
std::vector<std::size_t> batch_schedule(std::size_t count,
                                        const BuildParams &params);

//! Reverse-edge proposal: `source` (a newly wired vertex) wants to appear in
//! the list of `target`; `dist` is their squared distance.
struct EdgeTriple {
  VertexId target = 0;
  VertexId source = 0;
  float dist = 0.0f;

  friend bool operator==(const EdgeTriple &, const EdgeTriple &) = default;
};

using EdgeBuffer = std::vector<EdgeTriple>;

//! Full sort by (target, dist, source), which groups proposals per target.
void sort_edge_buffer(EdgeBuffer &buffer);

enum class BuildPhase { kSearch, kWire, kReverse };

/*! Instrumentation hooks. on_prune and on_write are invoked from worker
 * threads and must be thread-safe; phase hooks run on the calling thread
 * between barriers.
 */
class BuildObserver {
 public:
  virtual ~BuildObserver() = default;

  virtual void on_phase_begin(BuildPhase, const GraphIndex &) {}
  virtual void on_phase_end(BuildPhase, const GraphIndex &) {}
  //! `candidates` is the full input of a robust_prune call for p.
  virtual void on_prune(VertexId /*p*/, std::span<const Candidate> /*candidates*/,
                        std::span<const Candidate> /*kept*/, float /*alpha*/) {}
  virtual void on_write(BuildPhase, VertexId) {}
};

/*! Inserts rows [begin, end) of `data` into `graph`.
 *
 * begin must equal graph.active_count() and end must fit the capacity. On
 * an empty graph the first seed_batch_size() rows are wired to each other by
 * pruning their all-pairs candidate lists and become the seed; any rest is
 * inserted normally. A normal batch runs three phases separated by barriers:
 *
 *  1. search: every new x runs a beam search over the unchanged graph;
 *  2. wire:   x's list becomes robust_prune(x, visited(x)) and x proposes
 *             itself to each kept neighbor through the edge buffer;
 *  3. reverse: the buffer is sorted by (target, dist, source) and each
 *             target is owned by one worker, which appends the proposals if
 *             they fit under R and otherwise prunes its old list together
 *             with the proposals.
 *
 * No locks are taken; exclusive ownership comes from the phase structure.
 */
void batch_insert(GraphIndex &graph, const VectorDataset &data, VertexId begin,
                  VertexId end, const BuildParams &params,
                  BuildObserver *observer = nullptr);

/*! Builds a graph over all of `data` with batch_schedule() batches. The entry
 * point ends up as medoid(data), switched in as soon as that row is live.
 */
GraphIndex build(const VectorDataset &data, const BuildParams &params,
                 BuildObserver *observer = nullptr);

//! build() whose insertion searches run on quantized distance estimates;
//! pruning still uses exact distances.
GraphIndex build(const VectorDataset &data, const BuildParams &params,
                 const RaBitQIndex &search_quantizer,
                 BuildObserver *observer = nullptr);

/*! Appends rows [begin, end) that arrived after the initial build, in
 * batches of at most max_batch. Grows the graph capacity as needed and keeps
 * the entry point. An empty range is a no-op.
 */
void insert_stream(GraphIndex &graph, const VectorDataset &data, VertexId begin,
                   VertexId end, const BuildParams &params,
                   BuildObserver *observer = nullptr);

}  // namespace beamgraph
