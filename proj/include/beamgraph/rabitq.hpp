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

/// \file rabitq.hpp
/// \brief RaBitQ-style quantization: random rotation, per-vector m-bit
/// scalar codes and a table-free squared-distance estimator.
///
/// Notation: c is the dataset mean, r = v - c, o = P r / |r| for the seeded
/// orthonormal P, u the m-bit code of o, h = (2^m - 1) / 2 and
/// o_bar = delta * (u - h) with delta = 2 max_i |o_i| / (2^m - 1).
///
/// Estimator convention. With q' = P (q - c),
///
///   |q - v|^2 = |q - c|^2 + |r|^2 - 2 |r| <q', o>
///   <q', o>  ~= <q', o_bar> / <o, o_bar>
///             = delta * (<u, q'> - h * sum_i q'_i) / <o, o_bar>
///
/// so the stored and per-query terms are
///
///   data_add     = |r|^2
///   data_rescale = -2 |r| delta / <o, o_bar>
///   query_add    = |q - c|^2
///   query_sumq   = h * sum_i q'_i
///   estimate     = query_add + data_add + data_rescale * (<u, q'> - query_sumq)
///
/// Two consequences of centering the query before rotating it: data_add
/// carries no <c, o_bar> term, and data_rescale carries the |r| factor
/// explicitly (delta is defined on the unit vector o, not on r). The shift
/// in query_sumq is the half range (2^m - 1) / 2; the variant
/// (2^(m-1) - 1) / 2 is biased (it vanishes at m = 1) and fails the
/// estimator tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "beamgraph/dataset.hpp"
#include "beamgraph/graph.hpp"
#include "beamgraph/search.hpp"

namespace beamgraph {

bool is_supported_bits(unsigned bits) noexcept;

//! Seeded orthonormal D x D transform: a Gaussian matrix orthonormalized by
//! Gram-Schmidt in f64, stored row-major in f32.
class Rotation {
 public:
  Rotation(std::size_t dims, std::uint64_t seed);

  std::size_t dims() const noexcept {
    return dims_;
  }
  std::uint64_t seed() const noexcept {
    return seed_;
  }
  std::span<const float> matrix() const noexcept {
    return matrix_;
  }

  void apply(std::span<const float> in, std::span<float> out) const;
  std::vector<float> apply(std::span<const float> in) const;

 private:
  std::size_t dims_;
  std::uint64_t seed_;
  std::vector<float> matrix_;
};

//! Convenience for one-off use; materializes the rotation every call.
std::vector<float> rotate(std::uint64_t seed, std::span<const float> v);

inline std::size_t code_bytes(std::size_t dims, unsigned bits) {
  return (dims * bits + 7) / 8;
}

//! Element i occupies bits [i*bits, (i+1)*bits) of a little-endian bit
//! stream; values must be < 2^bits.
void pack_codes(std::span<const std::uint8_t> values, unsigned bits,
                std::span<std::uint8_t> out);
std::vector<std::uint8_t> unpack_codes(std::span<const std::uint8_t> packed,
                                       std::size_t dims, unsigned bits);

/*! Sum of code_i * query_i over a packed code, consuming exactly
 * code_bytes(query.size(), bits) bytes from `reader.next()` in order.
 * Templated on the byte source so tests can audit the access pattern.
 */
template <typename Reader>
float packed_code_dot(Reader &reader, std::span<const float> query,
                      unsigned bits) {
  const std::size_t dims = query.size();
  const unsigned per_byte = 8 / bits;
  const unsigned mask = (1u << bits) - 1u;
  const float *q = query.data();
  float acc[8] = {};
  std::size_t i = 0;
  const std::size_t full = dims / per_byte;
  for (std::size_t b = 0; b < full; ++b) {
    const unsigned byte = reader.next();
    for (unsigned t = 0; t < per_byte; ++t) {
      acc[t] += static_cast<float>((byte >> (t * bits)) & mask) * q[i + t];
    }
    i += per_byte;
  }
  if (i < dims) {
    const unsigned byte = reader.next();
    for (unsigned t = 0; i < dims; ++t, ++i) {
      acc[t] += static_cast<float>((byte >> (t * bits)) & mask) * q[i];
    }
  }
  float total = 0.0f;
  for (float a : acc) {
    total += a;
  }
  return total;
}

struct PointerCodeReader {
  const std::uint8_t *cursor;
  std::uint8_t next() {
    return *cursor++;
  }
};

struct VectorMeta {
  float data_add = 0.0f;
  float data_rescale = 0.0f;

  friend bool operator==(const VectorMeta &, const VectorMeta &) = default;
};

struct QueryPrep {
  std::vector<float> rotated_query;  // P (q - c)
  float query_add = 0.0f;            // |q - c|^2
  float query_sumq = 0.0f;           // h * sum(rotated_query)
};

//! Quantized copy of a dataset. Immutable after fit()/load and safe to share.
class RaBitQIndex {
 public:
  std::size_t dims() const noexcept {
    return dims_;
  }
  unsigned bits() const noexcept {
    return bits_;
  }
  std::size_t count() const noexcept {
    return meta_.size();
  }
  std::uint64_t seed() const noexcept {
    return rotation_.seed();
  }
  std::span<const float> centroid() const noexcept {
    return centroid_;
  }
  const Rotation &rotation() const noexcept {
    return rotation_;
  }
  std::size_t code_size() const noexcept {
    return code_size_;
  }
  //! Packed code bytes plus the two f32 metadata terms.
  std::size_t bytes_per_vector() const noexcept {
    return code_size_ + 2 * sizeof(float);
  }
  std::span<const std::uint8_t> code(std::size_t i) const {
    return {codes_.data() + i * code_size_, code_size_};
  }
  const VectorMeta &meta(std::size_t i) const {
    return meta_[i];
  }

  friend bool operator==(const RaBitQIndex &a, const RaBitQIndex &b);

 private:
  RaBitQIndex(std::size_t dims, unsigned bits, std::uint64_t seed);

  friend RaBitQIndex fit(const VectorDataset &, unsigned, std::uint64_t);
  friend RaBitQIndex load_rabitq(const std::filesystem::path &);

  std::size_t dims_;
  unsigned bits_;
  std::size_t code_size_;
  std::vector<float> centroid_;
  Rotation rotation_;
  std::vector<VectorMeta> meta_;
  std::vector<std::uint8_t> codes_;
};

/*! Quantizes every row of an f32 dataset with `bits` in {1, 2, 4, 8}. A row
 * equal to the centroid gets the all-midpoint code and zero metadata.
 */
RaBitQIndex fit(const VectorDataset &dataset, unsigned bits,
                std::uint64_t seed);

QueryPrep prep_query(const RaBitQIndex &index, std::span<const float> query);

//! One sequential pass over the packed code; no lookup tables.
float estimate_sq_dist(const RaBitQIndex &index, VertexId id,
                       const QueryPrep &prep);

/*! Quantized index file, little-endian:
 *   u32 magic "BRBQ", u32 version, u32 dims, u32 bits, u64 count, u64 seed,
 *   dims x f32 centroid, count x (f32 data_add, f32 data_rescale),
 *   count x code_size packed codes.
 * The rotation is regenerated from the seed on load.
 */
void save_rabitq(const std::filesystem::path &path, const RaBitQIndex &index);
RaBitQIndex load_rabitq(const std::filesystem::path &path);

//! Beam search driven by estimate_sq_dist.
SearchResult beam_search(const GraphIndex &graph, const RaBitQIndex &index,
                         const QueryPrep &prep, std::uint32_t beam_width,
                         VertexId start);

/*! Quantized k-NN from the entry point. With params.rerank the whole
 * frontier is re-scored against the unquantized rows of `exact` and the
 * closest k by exact distance are returned; otherwise the first k frontier
 * entries with their estimated distances.
 */
std::vector<Candidate> search_knn(const GraphIndex &graph,
                                  const RaBitQIndex &index,
                                  const VectorDataset &exact,
                                  std::span<const float> query,
                                  const SearchParams &params);

}  // namespace beamgraph
