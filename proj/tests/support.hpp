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

// Helpers shared by the unit tests and the acceptance binary. Everything
// here is deliberately naive (f64, straight loops) so it can serve as an
// oracle for the optimized library code.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include "beamgraph/dataset.hpp"
#include "beamgraph/graph.hpp"

namespace bgtest {

using namespace beamgraph;

inline double sq_dist_f64(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return s;
}

inline double dot_f64(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return s;
}

//! Uniform [-1, 1) f32 rows from std::mt19937 (independent of the library RNG).
inline VectorDataset uniform_f32(std::size_t count, std::size_t dims,
                                 std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> v(count * dims);
  for (float &x : v) {
    x = u(gen);
  }
  return VectorDataset::from_f32(dims, std::move(v));
}

inline VectorDataset uniform_u8(std::size_t count, std::size_t dims,
                                std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> u(0, 255);
  std::vector<std::uint8_t> v(count * dims);
  for (auto &x : v) {
    x = static_cast<std::uint8_t>(u(gen));
  }
  return VectorDataset::from_u8(dims, std::move(v));
}

//! Brute-force top-k ids by (f64 squared distance, id).
inline std::vector<VertexId> brute_topk(const VectorDataset &data,
                                        std::span<const float> q,
                                        std::size_t k) {
  std::vector<std::pair<double, VertexId>> all;
  for (std::size_t i = 0; i < data.count(); ++i) {
    all.push_back({sq_dist_f64(q, data.row<float>(i)),
                   static_cast<VertexId>(i)});
  }
  std::sort(all.begin(), all.end());
  std::vector<VertexId> ids;
  for (std::size_t i = 0; i < k && i < all.size(); ++i) {
    ids.push_back(all[i].second);
  }
  return ids;
}

//! Vertices reachable from the entry point.
inline std::size_t reachable_count(const GraphIndex &g) {
  if (g.empty()) {
    return 0;
  }
  std::vector<char> seen(g.active_count(), 0);
  std::vector<VertexId> stack{g.entry_point()};
  seen[g.entry_point()] = 1;
  std::size_t n = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (VertexId v : g.neighbor_view(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++n;
        stack.push_back(v);
      }
    }
  }
  return n;
}

//! Average-rank Spearman correlation.
inline double spearman(const std::vector<double> &x,
                       const std::vector<double> &y) {
  auto ranks = [](const std::vector<double> &v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
        ++j;
      }
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) {
        r[idx[t]] = avg;
      }
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

//! Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("beamgraph_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::filesystem::path operator/(const std::string &name) const {
    return path_ / name;
  }
  const std::filesystem::path &path() const {
    return path_;
  }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::uint8_t> file_bytes(const std::filesystem::path &p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void put_bytes(const std::filesystem::path &p,
                      const std::vector<std::uint8_t> &bytes) {
  std::ofstream f(p, std::ios::binary);
  f.write(reinterpret_cast<const char *>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

}  // namespace bgtest
