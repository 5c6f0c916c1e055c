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

#include <utility>

#include "beamgraph/dataset.hpp"

namespace beamgraph {

/*! A dataset lifted into one extra dimension so that inner-product ranking
 * becomes squared-Euclidean ranking.
 *
 * Data rows x become [x, sqrt(M^2 - |x|^2)] and therefore all have norm M;
 * query rows q become [q, 0]. Then |q' - x'|^2 = |q|^2 + M^2 - 2<q, x>, which
 * is strictly decreasing in <q, x> for a fixed query.
 */
struct AugmentedDataset {
  VectorDataset vectors;  // f32, dims = base dims + 1
  float max_norm = 0.0f;  // M, the largest data row norm
};

//! Augments data and queries together. M is taken from the data only.
std::pair<AugmentedDataset, AugmentedDataset> mips_augment(
    const VectorDataset &data, const VectorDataset &queries);

AugmentedDataset augment_data(const VectorDataset &data);
//! Lifts rows under a fixed bound M, e.g. rows appended to an existing
//! index; a row with norm above M is rejected.
AugmentedDataset augment_data(const VectorDataset &data, float max_norm);
AugmentedDataset augment_queries(const VectorDataset &queries, float max_norm);

}  // namespace beamgraph
