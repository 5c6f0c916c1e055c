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

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

namespace beamgraph {

enum class ElementKind : std::uint8_t { kU8, kF32 };

std::size_t element_width(ElementKind kind) noexcept;
const char *to_string(ElementKind kind) noexcept;

template <typename T>
inline constexpr ElementKind kind_of_v =
    std::is_same_v<T, float> ? ElementKind::kF32 : ElementKind::kU8;

/*! Contiguous row-major store of `count` vectors of `dims` elements.
 *
 * Exactly one of the two element buffers is in use, selected by kind().
 * dims is fixed at construction and always >= 1; count may be zero. F32
 * values are checked for finiteness on every path that admits data.
 */
class VectorDataset {
 public:
  VectorDataset(ElementKind kind, std::size_t dims);

  static VectorDataset from_f32(std::size_t dims, std::vector<float> values);
  static VectorDataset from_u8(std::size_t dims,
                               std::vector<std::uint8_t> values);

  ElementKind kind() const noexcept {
    return kind_;
  }
  std::size_t dims() const noexcept {
    return dims_;
  }
  std::size_t count() const noexcept {
    return count_;
  }
  bool empty() const noexcept {
    return count_ == 0;
  }
  std::size_t byte_size() const noexcept {
    return count_ * dims_ * element_width(kind_);
  }

  template <typename T>
  std::span<const T> row(std::size_t i) const {
    return {values<T>().data() + i * dims_, dims_};
  }
  std::span<const float> row_f32(std::size_t i) const;
  std::span<const std::uint8_t> row_u8(std::size_t i) const;

  template <typename T>
  std::span<const T> values() const {
    if constexpr (std::is_same_v<T, float>) {
      return f32_;
    } else {
      return u8_;
    }
  }

  //! Raw little-endian element bytes (the host is required to be LE).
  std::span<const std::byte> bytes() const noexcept;

  //! Copy of rows [begin, end).
  VectorDataset slice(std::size_t begin, std::size_t end) const;

  //! Appends every row of `other`; kinds and dims must match.
  void append(const VectorDataset &other);

  void push_back(std::span<const float> row);
  void push_back(std::span<const std::uint8_t> row);

  friend bool operator==(const VectorDataset &a, const VectorDataset &b);

 private:
  ElementKind kind_;
  std::size_t dims_;
  std::size_t count_ = 0;
  std::vector<float> f32_;
  std::vector<std::uint8_t> u8_;
};

}  // namespace beamgraph
