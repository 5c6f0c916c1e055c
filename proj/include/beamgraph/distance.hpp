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

#include "beamgraph/error.hpp"

namespace beamgraph {

enum class DistanceKind : std::uint8_t { kSquaredEuclidean, kInnerProduct };

const char *to_string(DistanceKind kind) noexcept;

namespace kernels {

// All float kernels accumulate into kLanes independent partial sums that are
// folded by a fixed pairwise tree, so the result depends only on the inputs
// and the build flags, never on thread count or call site.
inline constexpr std::size_t kLanes = 16;

inline float fold_lanes(float (&acc)[kLanes]) {
  for (std::size_t width = kLanes / 2; width > 0; width /= 2) {
    for (std::size_t l = 0; l < width; ++l) {
      acc[l] += acc[l + width];
    }
  }
  return acc[0];
}

inline float sq_l2_f32(const float *a, const float *b, std::size_t n) {
  float acc[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const float d = a[i + l] - b[i + l];
      acc[l] += d * d;
    }
  }
  float tail = 0.0f;
  for (; i < n; ++i) {
    const float d = a[i] - b[i];
    tail += d * d;
  }
  return fold_lanes(acc) + tail;
}

inline float dot_f32(const float *a, const float *b, std::size_t n) {
  float acc[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      acc[l] += a[i + l] * b[i + l];
    }
  }
  float tail = 0.0f;
  for (; i < n; ++i) {
    tail += a[i] * b[i];
  }
  return fold_lanes(acc) + tail;
}

//! Exact for any n: every partial is a 64-bit integer.
inline std::uint64_t sq_l2_u8(const std::uint8_t *a, const std::uint8_t *b,
                              std::size_t n) {
  std::int64_t acc[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const std::int64_t d = static_cast<std::int64_t>(a[i + l]) -
                             static_cast<std::int64_t>(b[i + l]);
      acc[l] += d * d;
    }
  }
  std::int64_t total = 0;
  for (; i < n; ++i) {
    const std::int64_t d =
        static_cast<std::int64_t>(a[i]) - static_cast<std::int64_t>(b[i]);
    total += d * d;
  }
  for (std::size_t l = 0; l < kLanes; ++l) {
    total += acc[l];
  }
  return static_cast<std::uint64_t>(total);
}

//! Squared distance as the float used by graph search and pruning.
inline float row_distance(const float *a, const float *b, std::size_t n) {
  return sq_l2_f32(a, b, n);
}
inline float row_distance(const std::uint8_t *a, const std::uint8_t *b,
                          std::size_t n) {
  return static_cast<float>(sq_l2_u8(a, b, n));
}

}  // namespace kernels

//! Squared Euclidean distance. No square root is taken anywhere in the
//! library; comparisons on squared values order identically.
float sq_l2(std::span<const float> a, std::span<const float> b);
std::uint64_t sq_l2(std::span<const std::uint8_t> a,
                    std::span<const std::uint8_t> b);

float dot(std::span<const float> a, std::span<const float> b);

}  // namespace beamgraph
