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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beamgraph/dataset.hpp"

namespace beamgraph {

/*! Exact top-k reference: row-major query_count x k ids and distances.
 *
 * Distances are squared L2, or the negated inner product for inner-product
 * ground truth, so every row is non-decreasing in both cases.
 */
struct GroundTruth {
  std::size_t query_count = 0;
  std::size_t k = 0;
  std::vector<std::uint32_t> ids;
  std::vector<float> distances;

  std::span<const std::uint32_t> row_ids(std::size_t q) const {
    return {ids.data() + q * k, k};
  }
  std::span<const float> row_distances(std::size_t q) const {
    return {distances.data() + q * k, k};
  }

  //! Throws kInvariant on a row with duplicate ids or decreasing distances.
  void validate() const;

  friend bool operator==(const GroundTruth &, const GroundTruth &) = default;
};

//! .fbin -> f32, .u8bin -> u8, anything else -> nullopt.
std::optional<ElementKind> kind_from_extension(const std::filesystem::path &path);

/*! big-ann-benchmarks vector file: u32 count, u32 dims (both little-endian),
 * then count x dims row-major elements. Rejects short files, trailing bytes,
 * zero count/dims and sizes that overflow.
 */
VectorDataset read_vectors_bin(const std::filesystem::path &path,
                               ElementKind kind);
void write_vectors_bin(const std::filesystem::path &path,
                       const VectorDataset &dataset);

/*! Ground-truth file: u32 query_count, u32 k, query_count x k i32 ids, then
 * query_count x k f32 distances, all little-endian.
 */
GroundTruth read_ground_truth(const std::filesystem::path &path);
void write_ground_truth(const std::filesystem::path &path,
                        const GroundTruth &gt);

// Whole-file helpers shared by every persistence format.
std::vector<std::uint8_t> read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path,
                std::span<const std::uint8_t> bytes);

//! Appends little-endian scalars to a byte buffer.
class ByteWriter {
 public:
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v) {
    u32(static_cast<std::uint32_t>(v));
  }
  void f32(float v);
  void bytes(std::span<const std::uint8_t> b);

  const std::vector<std::uint8_t> &buffer() const noexcept {
    return buffer_;
  }

 private:
  std::vector<std::uint8_t> buffer_;
};

//! Consumes little-endian scalars; every read past the end throws kFormat.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32() {
    return static_cast<std::int32_t>(u32());
  }
  float f32();
  std::span<const std::uint8_t> bytes(std::size_t n);

  std::size_t remaining() const noexcept {
    return data_.size() - pos_;
  }
  //! Throws kFormat if any bytes are left.
  void expect_end() const;

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::string what_;
};

}  // namespace beamgraph
