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

#include "beamgraph/graph.hpp"

#include <limits>

#include "beamgraph/io.hpp"

namespace beamgraph {

namespace {

constexpr std::uint32_t kGraphMagic = 0x46524742;  // "BGRF"
constexpr std::uint32_t kGraphVersion = 1;
constexpr VertexId kEmptySlot = 0xFFFFFFFFu;

template <typename T>
double squared_distance_to_mean(std::span<const T> row,
                                const std::vector<double> &mean) {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double d = static_cast<double>(row[j]) - mean[j];
    s += d * d;
  }
  return s;
}

template <typename T>
VertexId medoid_impl(const VectorDataset &ds) {
  const std::size_t n = ds.count();
  const std::size_t d = ds.dims();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ds.row<T>(i);
    for (std::size_t j = 0; j < d; ++j) {
      mean[j] += row[j];
    }
  }
  for (double &m : mean) {
    m /= static_cast<double>(n);
  }
  VertexId best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dist = squared_distance_to_mean(ds.row<T>(i), mean);
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<VertexId>(i);
    }
  }
  return best;
}

}  // namespace

GraphIndex::GraphIndex(std::size_t capacity, std::uint32_t degree_cap)
    : degree_cap_(degree_cap),
      degrees_(capacity, 0),
      slab_(capacity * degree_cap, kEmptySlot) {
  require(degree_cap >= 1, ErrorCode::kInvalidArgument,
          "degree cap must be >= 1");
  require(capacity <= kEmptySlot, ErrorCode::kCapacity,
          "capacity exceeds the 32-bit vertex id space");
}

void GraphIndex::set_entry_point(VertexId v) {
  require(v < active_count_, ErrorCode::kOutOfRange,
          "entry point must be an active vertex");
  entry_point_ = v;
}

void GraphIndex::set_active_count(std::size_t n) {
  require(n >= active_count_, ErrorCode::kInvalidArgument,
          "active count may only grow");
  require(n <= capacity(), ErrorCode::kCapacity,
          "active count exceeds graph capacity");
  active_count_ = n;
}

void GraphIndex::reserve(std::size_t capacity) {
  if (capacity <= this->capacity()) {
    return;
  }
  require(capacity <= kEmptySlot, ErrorCode::kCapacity,
          "capacity exceeds the 32-bit vertex id space");
  degrees_.resize(capacity, 0);
  slab_.resize(capacity * degree_cap_, kEmptySlot);
}

std::vector<VertexId> GraphIndex::neighbors(VertexId u) const {
  require(u < active_count_, ErrorCode::kOutOfRange, "inactive vertex");
  const auto view = neighbor_view(u);
  return {view.begin(), view.end()};
}

void GraphIndex::set_neighbors(VertexId u, std::span<const VertexId> list) {
  require(u < active_count_, ErrorCode::kOutOfRange, "inactive vertex");
  if (list.size() > degree_cap_) {
    fail(ErrorCode::kInvariant, "neighbor list of " + std::to_string(u) +
                                    " exceeds degree cap " +
                                    std::to_string(degree_cap_));
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    const VertexId v = list[i];
    if (v == u) {
      fail(ErrorCode::kInvariant, "self-loop on " + std::to_string(u));
    }
    if (v >= active_count_) {
      fail(ErrorCode::kInvariant, "neighbor " + std::to_string(v) +
                                      " of " + std::to_string(u) +
                                      " is not active");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (list[j] == v) {
        fail(ErrorCode::kInvariant, "duplicate neighbor " +
                                        std::to_string(v) + " of " +
                                        std::to_string(u));
      }
    }
  }
  VertexId *row = slab_.data() + static_cast<std::size_t>(u) * degree_cap_;
  std::copy(list.begin(), list.end(), row);
  std::fill(row + list.size(), row + degree_cap_, kEmptySlot);
  degrees_[u] = static_cast<std::uint32_t>(list.size());
}

void GraphIndex::check_invariants() const {
  if (active_count_ > 0 && entry_point_ >= active_count_) {
    fail(ErrorCode::kInvariant, "entry point is not active");
  }
  std::vector<std::uint32_t> stamp(active_count_, kEmptySlot);
  for (VertexId u = 0; u < active_count_; ++u) {
    if (degrees_[u] > degree_cap_) {
      fail(ErrorCode::kInvariant, "degree of " + std::to_string(u) +
                                      " exceeds the cap");
    }
    for (VertexId v : neighbor_view(u)) {
      if (v == u) {
        fail(ErrorCode::kInvariant, "self-loop on " + std::to_string(u));
      }
      if (v >= active_count_) {
        fail(ErrorCode::kInvariant, "edge to inactive vertex from " +
                                        std::to_string(u));
      }
      if (stamp[v] == u) {
        fail(ErrorCode::kInvariant, "duplicate neighbor in list of " +
                                        std::to_string(u));
      }
      stamp[v] = u;
    }
  }
}

bool operator==(const GraphIndex &a, const GraphIndex &b) {
  if (a.degree_cap_ != b.degree_cap_ || a.active_count_ != b.active_count_ ||
      a.entry_point_ != b.entry_point_) {
    return false;
  }
  for (VertexId u = 0; u < a.active_count_; ++u) {
    const auto x = a.neighbor_view(u);
    const auto y = b.neighbor_view(u);
    if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) {
      return false;
    }
  }
  return true;
}

void save_graph(const std::filesystem::path &path, const GraphIndex &graph) {
  ByteWriter w;
  w.u32(kGraphMagic);
  w.u32(kGraphVersion);
  w.u32(graph.degree_cap());
  w.u64(graph.active_count());
  w.u32(graph.entry_point());
  for (VertexId u = 0; u < graph.active_count(); ++u) {
    w.u32(graph.degree(u));
  }
  for (VertexId u = 0; u < graph.active_count(); ++u) {
    const auto view = graph.neighbor_view(u);
    for (std::uint32_t slot = 0; slot < graph.degree_cap(); ++slot) {
      w.u32(slot < view.size() ? view[slot] : kEmptySlot);
    }
  }
  write_file(path, w.buffer());
}

GraphIndex load_graph(const std::filesystem::path &path) {
  const auto file = read_file(path);
  ByteReader r(file, path.string());
  if (r.u32() != kGraphMagic) {
    fail(ErrorCode::kFormat, path.string() + ": not a graph file");
  }
  const std::uint32_t version = r.u32();
  if (version != kGraphVersion) {
    fail(ErrorCode::kFormat, path.string() + ": unsupported graph version " +
                                 std::to_string(version));
  }
  const std::uint32_t degree_cap = r.u32();
  const std::uint64_t active = r.u64();
  const VertexId entry = r.u32();
  if (degree_cap == 0) {
    fail(ErrorCode::kFormat, path.string() + ": zero degree cap");
  }
  // Each active vertex needs 4 + 4 * degree_cap bytes; check before allocating.
  const std::uint64_t per_vertex = 4ull * (1ull + degree_cap);
  if (active > r.remaining() / per_vertex ||
      active * per_vertex != r.remaining()) {
    fail(ErrorCode::kFormat, path.string() + ": size does not match header");
  }

  GraphIndex graph(active, degree_cap);
  graph.active_count_ = active;
  for (std::uint64_t u = 0; u < active; ++u) {
    graph.degrees_[u] = r.u32();
  }
  for (auto &slot : graph.slab_) {
    slot = r.u32();
  }
  r.expect_end();
  if (active > 0) {
    graph.entry_point_ = entry;
  }
  try {
    graph.check_invariants();
  } catch (const Error &e) {
    fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
  return graph;
}

VertexId medoid(const VectorDataset &dataset) {
  require(!dataset.empty(), ErrorCode::kInvalidArgument,
          "medoid of an empty dataset");
  if (dataset.kind() == ElementKind::kF32) {
    return medoid_impl<float>(dataset);
  }
  return medoid_impl<std::uint8_t>(dataset);
}

}  // namespace beamgraph
