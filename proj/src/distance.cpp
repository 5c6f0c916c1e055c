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

#include "beamgraph/distance.hpp"

namespace beamgraph {

const char *to_string(DistanceKind kind) noexcept {
  return kind == DistanceKind::kSquaredEuclidean ? "l2" : "ip";
}

float sq_l2(std::span<const float> a, std::span<const float> b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch,
          "sq_l2 operands differ in length");
  return kernels::sq_l2_f32(a.data(), b.data(), a.size());
}

std::uint64_t sq_l2(std::span<const std::uint8_t> a,
                    std::span<const std::uint8_t> b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch,
          "sq_l2 operands differ in length");
  return kernels::sq_l2_u8(a.data(), b.data(), a.size());
}

float dot(std::span<const float> a, std::span<const float> b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch,
          "dot operands differ in length");
  return kernels::dot_f32(a.data(), b.data(), a.size());
}

}  // namespace beamgraph
