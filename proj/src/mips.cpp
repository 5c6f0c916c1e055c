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

#include "beamgraph/mips.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "beamgraph/error.hpp"

namespace beamgraph {

namespace {

double squared_norm(std::span<const float> row) {
  double s = 0.0;
  for (float v : row) {
    s += static_cast<double>(v) * v;
  }
  return s;
}

}  // namespace

namespace {

std::vector<double> row_norms(const VectorDataset &data) {
  require(data.kind() == ElementKind::kF32, ErrorCode::kInvalidArgument,
          "inner-product augmentation needs f32 data");
  require(!data.empty(), ErrorCode::kInvalidArgument,
          "inner-product augmentation needs non-empty data");
  std::vector<double> norms(data.count());
  for (std::size_t i = 0; i < data.count(); ++i) {
    norms[i] = squared_norm(data.row<float>(i));
    require(std::isfinite(norms[i]), ErrorCode::kInvalidArgument,
            "non-finite row norm");
  }
  return norms;
}

VectorDataset lift(const VectorDataset &data, const std::vector<double> &norms,
                   double max_sq) {
  const std::size_t d = data.dims();
  std::vector<float> out;
  out.reserve(data.count() * (d + 1));
  for (std::size_t i = 0; i < data.count(); ++i) {
    const auto row = data.row<float>(i);
    out.insert(out.end(), row.begin(), row.end());
    out.push_back(static_cast<float>(std::sqrt(std::max(0.0, max_sq - norms[i]))));
  }
  return VectorDataset::from_f32(d + 1, std::move(out));
}

}  // namespace

AugmentedDataset augment_data(const VectorDataset &data) {
  const auto norms = row_norms(data);
  const double max_sq = *std::max_element(norms.begin(), norms.end());
  return {lift(data, norms, max_sq), static_cast<float>(std::sqrt(max_sq))};
}

AugmentedDataset augment_data(const VectorDataset &data, float max_norm) {
  const auto norms = row_norms(data);
  const double max_sq = static_cast<double>(max_norm) * max_norm;
  for (double n : norms) {
    if (n > max_sq * (1.0 + 1e-6)) {
      fail(ErrorCode::kInvalidArgument,
           "row norm exceeds the augmentation bound " + std::to_string(max_norm));
    }
  }
  return {lift(data, norms, max_sq), max_norm};
}

AugmentedDataset augment_queries(const VectorDataset &queries,
                                 float max_norm) {
  require(queries.kind() == ElementKind::kF32, ErrorCode::kInvalidArgument,
          "inner-product augmentation needs f32 queries");
  const std::size_t d = queries.dims();
  std::vector<float> out;
  out.reserve(queries.count() * (d + 1));
  for (std::size_t i = 0; i < queries.count(); ++i) {
    const auto row = queries.row<float>(i);
    out.insert(out.end(), row.begin(), row.end());
    out.push_back(0.0f);
  }
  return {VectorDataset::from_f32(d + 1, std::move(out)), max_norm};
}

std::pair<AugmentedDataset, AugmentedDataset> mips_augment(
    const VectorDataset &data, const VectorDataset &queries) {
  require(data.dims() == queries.dims(), ErrorCode::kDimensionMismatch,
          "data and queries differ in dims");
  auto lifted = augment_data(data);
  auto lifted_queries = augment_queries(queries, lifted.max_norm);
  return {std::move(lifted), std::move(lifted_queries)};
}

}  // namespace beamgraph
