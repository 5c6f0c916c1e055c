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

#include "beamgraph/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamgraph/error.hpp"

namespace beamgraph {

namespace {

void check_finite(std::span<const float> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      fail(ErrorCode::kInvalidArgument,
           "non-finite value at element " + std::to_string(i));
    }
  }
}

}  // namespace

std::size_t element_width(ElementKind kind) noexcept {
  return kind == ElementKind::kF32 ? sizeof(float) : sizeof(std::uint8_t);
}

const char *to_string(ElementKind kind) noexcept {
  return kind == ElementKind::kF32 ? "f32" : "u8";
}

VectorDataset::VectorDataset(ElementKind kind, std::size_t dims)
    : kind_(kind), dims_(dims) {
  require(dims >= 1, ErrorCode::kInvalidArgument, "dims must be >= 1");
}

VectorDataset VectorDataset::from_f32(std::size_t dims,
                                      std::vector<float> values) {
  VectorDataset ds(ElementKind::kF32, dims);
  require(values.size() % dims == 0, ErrorCode::kDimensionMismatch,
          "buffer length is not a multiple of dims");
  check_finite(values);
  ds.count_ = values.size() / dims;
  ds.f32_ = std::move(values);
  return ds;
}

VectorDataset VectorDataset::from_u8(std::size_t dims,
                                     std::vector<std::uint8_t> values) {
  VectorDataset ds(ElementKind::kU8, dims);
  require(values.size() % dims == 0, ErrorCode::kDimensionMismatch,
          "buffer length is not a multiple of dims");
  ds.count_ = values.size() / dims;
  ds.u8_ = std::move(values);
  return ds;
}

std::span<const float> VectorDataset::row_f32(std::size_t i) const {
  require(kind_ == ElementKind::kF32, ErrorCode::kInvalidArgument,
          "dataset is not f32");
  require(i < count_, ErrorCode::kOutOfRange, "row index out of range");
  return row<float>(i);
}

std::span<const std::uint8_t> VectorDataset::row_u8(std::size_t i) const {
  require(kind_ == ElementKind::kU8, ErrorCode::kInvalidArgument,
          "dataset is not u8");
  require(i < count_, ErrorCode::kOutOfRange, "row index out of range");
  return row<std::uint8_t>(i);
}

std::span<const std::byte> VectorDataset::bytes() const noexcept {
  if (kind_ == ElementKind::kF32) {
    return std::as_bytes(std::span<const float>(f32_));
  }
  return std::as_bytes(std::span<const std::uint8_t>(u8_));
}

VectorDataset VectorDataset::slice(std::size_t begin, std::size_t end) const {
  require(begin <= end && end <= count_, ErrorCode::kOutOfRange,
          "slice range out of bounds");
  VectorDataset out(kind_, dims_);
  out.count_ = end - begin;
  if (kind_ == ElementKind::kF32) {
    out.f32_.assign(f32_.begin() + begin * dims_, f32_.begin() + end * dims_);
  } else {
    out.u8_.assign(u8_.begin() + begin * dims_, u8_.begin() + end * dims_);
  }
  return out;
}

void VectorDataset::append(const VectorDataset &other) {
  require(other.kind_ == kind_, ErrorCode::kInvalidArgument,
          "element kind mismatch on append");
  require(other.dims_ == dims_, ErrorCode::kDimensionMismatch,
          "dims mismatch on append");
  f32_.insert(f32_.end(), other.f32_.begin(), other.f32_.end());
  u8_.insert(u8_.end(), other.u8_.begin(), other.u8_.end());
  count_ += other.count_;
}

void VectorDataset::push_back(std::span<const float> row) {
  require(kind_ == ElementKind::kF32, ErrorCode::kInvalidArgument,
          "dataset is not f32");
  require(row.size() == dims_, ErrorCode::kDimensionMismatch,
          "row length differs from dims");
  check_finite(row);
  f32_.insert(f32_.end(), row.begin(), row.end());
  ++count_;
}

void VectorDataset::push_back(std::span<const std::uint8_t> row) {
  require(kind_ == ElementKind::kU8, ErrorCode::kInvalidArgument,
          "dataset is not u8");
  require(row.size() == dims_, ErrorCode::kDimensionMismatch,
          "row length differs from dims");
  u8_.insert(u8_.end(), row.begin(), row.end());
  ++count_;
}

bool operator==(const VectorDataset &a, const VectorDataset &b) {
  if (a.kind_ != b.kind_ || a.dims_ != b.dims_ || a.count_ != b.count_) {
    return false;
  }
  const auto ab = a.bytes();
  const auto bb = b.bytes();
  return std::equal(ab.begin(), ab.end(), bb.begin(), bb.end());
}

}  // namespace beamgraph
