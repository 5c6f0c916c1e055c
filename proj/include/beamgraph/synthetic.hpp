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
#include <optional>
#include <string_view>

#include "beamgraph/dataset.hpp"

namespace beamgraph {

enum class Distribution { kGaussian, kClustered, kLowRank };

std::optional<Distribution> parse_distribution(std::string_view name);

inline constexpr std::size_t kSyntheticClusters = 16;
inline constexpr float kClusterCenterScale = 1.0f;
inline constexpr std::size_t kLowRankLatentDims = 32;
inline constexpr double kLowRankNoise = 0.3;

/*! Seeded f32 generator.
 *
 * kGaussian draws every coordinate from N(0, 1). kClustered first draws 16
 * centers with coordinates from N(0, kClusterCenterScale^2), then each row
 * picks a center uniformly and adds N(0, 1) noise per coordinate.
 *
 * kLowRank draws the same 16-cluster mixture in a latent space of
 * min(dims, 32) coordinates and embeds it with a seeded matrix whose columns
 * are orthogonal with norm sqrt(dims / latent), then adds N(0, 0.3^2) per
 * coordinate. High-dimensional real descriptors behave like this: their
 * intrinsic dimension is far below dims, so near neighbors stay meaningful.
 *
 * Generate data and queries in a single call and split with slice() so that
 * both share the same centers.
 */
VectorDataset gen_synthetic(std::size_t count, std::size_t dims,
                            std::uint64_t seed, Distribution distribution);

}  // namespace beamgraph
