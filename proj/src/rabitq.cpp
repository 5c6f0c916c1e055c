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

#include "beamgraph/rabitq.hpp"

#include <algorithm>
#include <cmath>

#include "beamgraph/distance.hpp"
#include "beamgraph/io.hpp"
#include "beamgraph/random.hpp"

namespace beamgraph {

namespace {

constexpr std::uint32_t kRaBitQMagic = 0x51425242;  // "BRBQ"
constexpr std::uint32_t kRaBitQVersion = 1;

void check_bits(unsigned bits) {
  if (!is_supported_bits(bits)) {
    fail(ErrorCode::kInvalidArgument,
         "bits per dimension must be 1, 2, 4 or 8 (got " +
             std::to_string(bits) + ")");
  }
}

//! Rows of a seeded Gaussian matrix, orthonormalized by modified
//! Gram-Schmidt with one re-orthogonalization sweep.
std::vector<float> orthonormal_matrix(std::size_t dims, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> m(dims * dims);
  for (double &x : m) {
    x = rng.normal();
  }
  for (std::size_t i = 0; i < dims; ++i) {
    double *row = m.data() + i * dims;
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (std::size_t j = 0; j < i; ++j) {
        const double *prev = m.data() + j * dims;
        double proj = 0.0;
        for (std::size_t k = 0; k < dims; ++k) {
          proj += row[k] * prev[k];
        }
        for (std::size_t k = 0; k < dims; ++k) {
          row[k] -= proj * prev[k];
        }
      }
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
      norm += row[k] * row[k];
    }
    norm = std::sqrt(norm);
    require(norm > 1e-12, ErrorCode::kInvariant,
            "degenerate rotation draw; choose another seed");
    for (std::size_t k = 0; k < dims; ++k) {
      row[k] /= norm;
    }
  }
  return {m.begin(), m.end()};
}

}  // namespace

bool is_supported_bits(unsigned bits) noexcept {
  return bits == 1 || bits == 2 || bits == 4 || bits == 8;
}

Rotation::Rotation(std::size_t dims, std::uint64_t seed)
    : dims_(dims), seed_(seed) {
  require(dims >= 1, ErrorCode::kInvalidArgument, "dims must be >= 1");
  matrix_ = orthonormal_matrix(dims, seed);
}

void Rotation::apply(std::span<const float> in, std::span<float> out) const {
  require(in.size() == dims_ && out.size() == dims_,
          ErrorCode::kDimensionMismatch, "rotation dims mismatch");
  for (std::size_t i = 0; i < dims_; ++i) {
    out[i] = kernels::dot_f32(matrix_.data() + i * dims_, in.data(), dims_);
  }
}

std::vector<float> Rotation::apply(std::span<const float> in) const {
  std::vector<float> out(dims_);
  apply(in, out);
  return out;
}

std::vector<float> rotate(std::uint64_t seed, std::span<const float> v) {
  return Rotation(v.size(), seed).apply(v);
}

void pack_codes(std::span<const std::uint8_t> values, unsigned bits,
                std::span<std::uint8_t> out) {
  check_bits(bits);
  require(out.size() == code_bytes(values.size(), bits),
          ErrorCode::kDimensionMismatch, "packed buffer has the wrong size");
  std::fill(out.begin(), out.end(), 0);
  const unsigned per_byte = 8 / bits;
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(values[i] < (1u << bits), ErrorCode::kOutOfRange,
            "code value does not fit the bit width");
    out[i / per_byte] |=
        static_cast<std::uint8_t>(values[i] << ((i % per_byte) * bits));
  }
}

std::vector<std::uint8_t> unpack_codes(std::span<const std::uint8_t> packed,
                                       std::size_t dims, unsigned bits) {
  check_bits(bits);
  require(packed.size() == code_bytes(dims, bits),
          ErrorCode::kDimensionMismatch, "packed buffer has the wrong size");
  const unsigned per_byte = 8 / bits;
  const unsigned mask = (1u << bits) - 1u;
  std::vector<std::uint8_t> out(dims);
  for (std::size_t i = 0; i < dims; ++i) {
    out[i] = static_cast<std::uint8_t>(
        (packed[i / per_byte] >> ((i % per_byte) * bits)) & mask);
  }
  return out;
}

RaBitQIndex::RaBitQIndex(std::size_t dims, unsigned bits, std::uint64_t seed)
    : dims_(dims),
      bits_(bits),
      code_size_(code_bytes(dims, bits)),
      centroid_(dims, 0.0f),
      rotation_(dims, seed) {}

bool operator==(const RaBitQIndex &a, const RaBitQIndex &b) {
  return a.dims_ == b.dims_ && a.bits_ == b.bits_ && a.seed() == b.seed() &&
         a.centroid_ == b.centroid_ && a.meta_ == b.meta_ &&
         a.codes_ == b.codes_;
}

RaBitQIndex fit(const VectorDataset &dataset, unsigned bits,
                std::uint64_t seed) {
  check_bits(bits);
  require(dataset.kind() == ElementKind::kF32, ErrorCode::kInvalidArgument,
          "quantization needs an f32 dataset");
  require(!dataset.empty(), ErrorCode::kInvalidArgument,
          "quantization needs a non-empty dataset");

  const std::size_t n = dataset.count();
  const std::size_t d = dataset.dims();
  RaBitQIndex index(d, bits, seed);

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = dataset.row<float>(i);
    for (std::size_t j = 0; j < d; ++j) {
      mean[j] += row[j];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    index.centroid_[j] = static_cast<float>(mean[j] / static_cast<double>(n));
  }

  index.meta_.resize(n);
  index.codes_.assign(n * index.code_size_, 0);
  const std::uint32_t levels = (1u << bits) - 1u;
  const double half_range = levels / 2.0;
  const std::uint8_t midpoint = static_cast<std::uint8_t>(1u << (bits - 1));

#pragma omp parallel
  {
    std::vector<float> unit(d);
    std::vector<float> rotated(d);
    std::vector<std::uint8_t> values(d);
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = dataset.row<float>(i);
      double norm_sq = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double r = static_cast<double>(row[j]) - index.centroid_[j];
        norm_sq += r * r;
      }
      auto packed = std::span<std::uint8_t>(
          index.codes_.data() + i * index.code_size_, index.code_size_);
      if (norm_sq == 0.0) {
        std::fill(values.begin(), values.end(), midpoint);
        pack_codes(values, bits, packed);
        index.meta_[i] = {0.0f, 0.0f};
        continue;
      }
      const double norm = std::sqrt(norm_sq);
      for (std::size_t j = 0; j < d; ++j) {
        unit[j] = static_cast<float>(
            (static_cast<double>(row[j]) - index.centroid_[j]) / norm);
      }
      index.rotation_.apply(unit, rotated);

      double max_abs = 0.0;
      for (float o : rotated) {
        max_abs = std::max(max_abs, std::fabs(static_cast<double>(o)));
      }
      const double delta = 2.0 * max_abs / levels;
      // <o, u - h>; <o, o_bar> is delta times this.
      double o_dot_shifted = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double scaled = rotated[j] / delta + half_range;
        const double u = std::clamp(std::round(scaled), 0.0,
                                    static_cast<double>(levels));
        values[j] = static_cast<std::uint8_t>(u);
        o_dot_shifted += rotated[j] * (u - half_range);
      }
      pack_codes(values, bits, packed);
      index.meta_[i] = {static_cast<float>(norm_sq),
                        static_cast<float>(-2.0 * norm / o_dot_shifted)};
    }
  }
  return index;
}

QueryPrep prep_query(const RaBitQIndex &index, std::span<const float> query) {
  require(query.size() == index.dims(), ErrorCode::kDimensionMismatch,
          "query dims differ from the quantized index");
  const std::size_t d = index.dims();
  std::vector<float> centered(d);
  double add = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    centered[j] = query[j] - index.centroid()[j];
    add += static_cast<double>(centered[j]) * centered[j];
  }
  QueryPrep prep;
  prep.rotated_query = index.rotation().apply(centered);
  prep.query_add = static_cast<float>(add);
  double sum = 0.0;
  for (float v : prep.rotated_query) {
    sum += v;
  }
  const double half_range = ((1u << index.bits()) - 1u) / 2.0;
  prep.query_sumq = static_cast<float>(half_range * sum);
  return prep;
}

float estimate_sq_dist(const RaBitQIndex &index, VertexId id,
                       const QueryPrep &prep) {
  require(id < index.count(), ErrorCode::kOutOfRange,
          "vector id out of range for the quantized index");
  PointerCodeReader reader{index.code(id).data()};
  const float code_dot =
      packed_code_dot(reader, prep.rotated_query, index.bits());
  const VectorMeta &m = index.meta(id);
  return prep.query_add + m.data_add +
         m.data_rescale * (code_dot - prep.query_sumq);
}

void save_rabitq(const std::filesystem::path &path, const RaBitQIndex &index) {
  ByteWriter w;
  w.u32(kRaBitQMagic);
  w.u32(kRaBitQVersion);
  w.u32(static_cast<std::uint32_t>(index.dims()));
  w.u32(index.bits());
  w.u64(index.count());
  w.u64(index.seed());
  for (float c : index.centroid()) {
    w.f32(c);
  }
  for (std::size_t i = 0; i < index.count(); ++i) {
    w.f32(index.meta(i).data_add);
    w.f32(index.meta(i).data_rescale);
  }
  for (std::size_t i = 0; i < index.count(); ++i) {
    w.bytes(index.code(i));
  }
  write_file(path, w.buffer());
}

RaBitQIndex load_rabitq(const std::filesystem::path &path) {
  const auto file = read_file(path);
  ByteReader r(file, path.string());
  if (r.u32() != kRaBitQMagic) {
    fail(ErrorCode::kFormat, path.string() + ": not a quantized index file");
  }
  const std::uint32_t version = r.u32();
  if (version != kRaBitQVersion) {
    fail(ErrorCode::kFormat, path.string() + ": unsupported version " +
                                 std::to_string(version));
  }
  const std::uint32_t dims = r.u32();
  const std::uint32_t bits = r.u32();
  const std::uint64_t count = r.u64();
  const std::uint64_t seed = r.u64();
  if (dims == 0 || !is_supported_bits(bits)) {
    fail(ErrorCode::kFormat, path.string() + ": invalid dims or bit width");
  }
  const std::uint64_t per_vector = 8 + code_bytes(dims, bits);
  if (r.remaining() < 4ull * dims ||
      count > (r.remaining() - 4ull * dims) / per_vector ||
      4ull * dims + count * per_vector != r.remaining()) {
    fail(ErrorCode::kFormat, path.string() + ": size does not match header");
  }

  RaBitQIndex index(dims, bits, seed);
  for (auto &c : index.centroid_) {
    c = r.f32();
  }
  index.meta_.resize(count);
  for (auto &m : index.meta_) {
    m.data_add = r.f32();
    m.data_rescale = r.f32();
  }
  const auto codes = r.bytes(count * index.code_size_);
  index.codes_.assign(codes.begin(), codes.end());
  r.expect_end();
  return index;
}

SearchResult beam_search(const GraphIndex &graph, const RaBitQIndex &index,
                         const QueryPrep &prep, std::uint32_t beam_width,
                         VertexId start) {
  require(graph.active_count() <= index.count(), ErrorCode::kInvalidArgument,
          "graph has more active vertices than the quantized index");
  require(prep.rotated_query.size() == index.dims(),
          ErrorCode::kDimensionMismatch, "query prep does not match the index");
  const std::uint8_t *codes = index.code(0).data();
  const std::size_t stride = index.code_size();
  const unsigned bits = index.bits();
  std::span<const float> rq(prep.rotated_query);
  return beam_search_with(
      graph,
      [&](VertexId v) {
        PointerCodeReader reader{codes + static_cast<std::size_t>(v) * stride};
        const VectorMeta &m = index.meta(v);
        return prep.query_add + m.data_add +
               m.data_rescale *
                   (packed_code_dot(reader, rq, bits) - prep.query_sumq);
      },
      beam_width, start);
}

std::vector<Candidate> search_knn(const GraphIndex &graph,
                                  const RaBitQIndex &index,
                                  const VectorDataset &exact,
                                  std::span<const float> query,
                                  const SearchParams &params) {
  params.validate();
  const QueryPrep prep = prep_query(index, query);
  auto frontier =
      beam_search(graph, index, prep, params.beam_width, graph.entry_point())
          .frontier;
  if (params.rerank) {
    require(exact.kind() == ElementKind::kF32 && exact.dims() == index.dims() &&
                exact.count() >= graph.active_count(),
            ErrorCode::kInvalidArgument,
            "rerank needs the unquantized f32 rows of the index");
    for (auto &c : frontier) {
      c.dist = kernels::sq_l2_f32(query.data(), exact.row<float>(c.id).data(),
                                  query.size());
    }
    std::sort(frontier.begin(), frontier.end(), closer);
  }
  frontier.resize(std::min<std::size_t>(params.k, frontier.size()));
  return frontier;
}

}  // namespace beamgraph
