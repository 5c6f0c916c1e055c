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

#include "beamgraph/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "beamgraph/error.hpp"
#include "beamgraph/random.hpp"

namespace beamgraph {

std::optional<Distribution> parse_distribution(std::string_view name) {
  if (name == "gaussian") {
    return Distribution::kGaussian;
  }
  if (name == "clustered") {
    return Distribution::kClustered;
  }
  if (name == "lowrank") {
    return Distribution::kLowRank;
  }
  return std::nullopt;
}

namespace {

std::vector<double> cluster_centers(Rng &rng, std::size_t dims) {
  std::vector<double> centers(kSyntheticClusters * dims);
  for (double &c : centers) {
    c = kClusterCenterScale * rng.normal();
  }
  return centers;
}

// dims x latent matrix, column-major, with orthogonal columns of norm
// sqrt(dims / latent).
std::vector<double> embedding(Rng &rng, std::size_t dims, std::size_t latent) {
  std::vector<double> cols(latent * dims);
  for (double &v : cols) {
    v = rng.normal();
  }
  const double scale = std::sqrt(static_cast<double>(dims) / latent);
  for (std::size_t c = 0; c < latent; ++c) {
    double *col = cols.data() + c * dims;
    for (std::size_t p = 0; p < c; ++p) {
      const double *prev = cols.data() + p * dims;
      double proj = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        proj += col[k] * prev[k];
      }
      proj /= scale * scale;
      for (std::size_t k = 0; k < dims; ++k) {
        col[k] -= proj * prev[k];
      }
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
      norm += col[k] * col[k];
    }
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < dims; ++k) {
      col[k] *= scale / norm;
    }
  }
  return cols;
}

}  // namespace

VectorDataset gen_synthetic(std::size_t count, std::size_t dims,
                            std::uint64_t seed, Distribution distribution) {
  require(count >= 1, ErrorCode::kInvalidArgument, "count must be >= 1");
  require(dims >= 1, ErrorCode::kInvalidArgument, "dims must be >= 1");

  Rng rng(seed);
  std::vector<float> values(count * dims);

  if (distribution == Distribution::kGaussian) {
    for (float &v : values) {
      v = static_cast<float>(rng.normal());
    }
    return VectorDataset::from_f32(dims, std::move(values));
  }

  if (distribution == Distribution::kLowRank) {
    const std::size_t latent = std::min(dims, kLowRankLatentDims);
    const auto centers = cluster_centers(rng, latent);
    const auto basis = embedding(rng, dims, latent);
    std::vector<double> z(latent);
    for (std::size_t i = 0; i < count; ++i) {
      const double *center =
          centers.data() + rng.below(kSyntheticClusters) * latent;
      for (std::size_t c = 0; c < latent; ++c) {
        z[c] = center[c] + rng.normal();
      }
      for (std::size_t j = 0; j < dims; ++j) {
        double v = kLowRankNoise * rng.normal();
        for (std::size_t c = 0; c < latent; ++c) {
          v += basis[c * dims + j] * z[c];
        }
        values[i * dims + j] = static_cast<float>(v);
      }
    }
    return VectorDataset::from_f32(dims, std::move(values));
  }

  const auto centers = cluster_centers(rng, dims);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t cluster = rng.below(kSyntheticClusters);
    const double *center = centers.data() + cluster * dims;
    for (std::size_t j = 0; j < dims; ++j) {
      values[i * dims + j] = static_cast<float>(center[j] + rng.normal());
    }
  }
  return VectorDataset::from_f32(dims, std::move(values));
}

}  // namespace beamgraph
