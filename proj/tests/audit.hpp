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


// Build observer shared by the unit tests and the acceptance binary.

#pragma once

#include <mutex>
#include <set>
#include <span>
#include <vector>

#include "beamgraph/build.hpp"
#include "support.hpp"

namespace bgtest {

using namespace beamgraph;

// Checks every prune call against its own candidate list and records which
// vertices each phase wrote.
class AuditObserver : public BuildObserver {
 public:
  explicit AuditObserver(const VectorDataset &data) : data_(data) {}

  void on_phase_begin(BuildPhase phase, const GraphIndex &g) override {
    phase_ = phase;
    written_.clear();
    if (phase == BuildPhase::kSearch) {
      snapshot_ = snapshot(g);
    }
  }
  void on_phase_end(BuildPhase phase, const GraphIndex &g) override {
    if (phase == BuildPhase::kSearch) {
      if (snapshot(g) != snapshot_) {
        ++search_phase_mutations;
      }
    }
  }
  void on_prune(VertexId p, std::span<const Candidate> candidates,
                std::span<const Candidate> kept, float alpha) override {
    const bool ok = dominated_ok(p, candidates, kept, alpha);
    std::lock_guard<std::mutex> lock(mu_);
    ++prunes;
    if (!ok) {
      ++domination_failures;
    }
  }
  void on_write(BuildPhase phase, VertexId u) override {
    std::lock_guard<std::mutex> lock(mu_);
    if (phase != phase_ || phase == BuildPhase::kSearch) {
      ++foreign_writes;
    }
    if (!written_.insert(u).second) {
      ++double_writes;
    }
  }

  int prunes = 0;
  int domination_failures = 0;
  int foreign_writes = 0;
  int double_writes = 0;
  int search_phase_mutations = 0;

 private:
  double d(VertexId a, VertexId b) const {
    if (data_.kind() == ElementKind::kU8) {
      double s = 0.0;
      for (std::size_t j = 0; j < data_.dims(); ++j) {
        const double x = static_cast<double>(data_.row_u8(a)[j]) - data_.row_u8(b)[j];
        s += x * x;
      }
      return s;
    }
    return sq_dist_f64(data_.row_f32(a), data_.row_f32(b));
  }

  // Every kept pair is undominated and every discarded candidate that sorts
  // before the last kept one is dominated by an earlier kept candidate.
  bool dominated_ok(VertexId p, std::span<const Candidate> candidates,
                    std::span<const Candidate> kept, float alpha) const {
    const double a = alpha;
    const double slack = 1e-4;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i].id == p) {
        return false;
      }
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        if (a * d(kept[i].id, kept[j].id) <= kept[j].dist * (1.0 - slack)) {
          return false;
        }
      }
    }
    std::set<VertexId> kept_ids;
    for (const auto &k : kept) {
      kept_ids.insert(k.id);
    }
    for (const auto &c : candidates) {
      if (kept_ids.count(c.id) || kept.empty() || !closer(c, kept.back())) {
        continue;
      }
      bool dominated = false;
      for (const auto &k : kept) {
        if (closer(k, c) && a * d(k.id, c.id) <= c.dist * (1.0 + slack)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) {
        return false;
      }
    }
    return true;
  }

  static std::vector<std::vector<VertexId>> snapshot(const GraphIndex &g) {
    std::vector<std::vector<VertexId>> s;
    for (VertexId u = 0; u < g.active_count(); ++u) {
      s.push_back(g.neighbors(u));
    }
    return s;
  }

  const VectorDataset &data_;
  std::mutex mu_;
  BuildPhase phase_ = BuildPhase::kSearch;
  std::set<VertexId> written_;
  std::vector<std::vector<VertexId>> snapshot_;
};

}  // namespace bgtest
