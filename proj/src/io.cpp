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

#include "beamgraph/io.hpp"

#include <bit>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "beamgraph/error.hpp"

namespace beamgraph {

namespace {

std::string io_message(const std::filesystem::path &path, const char *verb) {
  return std::string("cannot ") + verb + " '" + path.string() +
         "': " + std::strerror(errno);
}

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t *out) {
  return __builtin_mul_overflow(a, b, out);
}

}  // namespace

void GroundTruth::validate() const {
  require(ids.size() == query_count * k && distances.size() == query_count * k,
          ErrorCode::kInvariant, "ground truth buffers do not match header");
  std::unordered_set<std::uint32_t> seen;
  for (std::size_t q = 0; q < query_count; ++q) {
    const auto d = row_distances(q);
    for (std::size_t j = 1; j < k; ++j) {
      if (!(d[j - 1] <= d[j])) {
        fail(ErrorCode::kInvariant, "ground truth row " + std::to_string(q) +
                                        " is not sorted by distance");
      }
    }
    seen.clear();
    for (std::uint32_t id : row_ids(q)) {
      if (!seen.insert(id).second) {
        fail(ErrorCode::kInvariant, "ground truth row " + std::to_string(q) +
                                        " repeats id " + std::to_string(id));
      }
    }
  }
}

std::optional<ElementKind> kind_from_extension(
    const std::filesystem::path &path) {
  const auto ext = path.extension();
  if (ext == ".fbin") {
    return ElementKind::kF32;
  }
  if (ext == ".u8bin") {
    return ElementKind::kU8;
  }
  return std::nullopt;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::kIo, io_message(path, "open"));
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    fail(ErrorCode::kIo, io_message(path, "read"));
  }
  return bytes;
}

void write_file(const std::filesystem::path &path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorCode::kIo, io_message(path, "open"));
  }
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    fail(ErrorCode::kIo, io_message(path, "write"));
  }
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    buffer_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    buffer_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::f32(float v) {
  u32(std::bit_cast<std::uint32_t>(v));
}

void ByteWriter::bytes(std::span<const std::uint8_t> b) {
  buffer_.insert(buffer_.end(), b.begin(), b.end());
}

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) {
    fail(ErrorCode::kFormat, what_ + ": unexpected end of data (need " +
                                 std::to_string(n) + " bytes at offset " +
                                 std::to_string(pos_) + ")");
  }
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
  }
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
  }
  pos_ += 8;
  return v;
}

float ByteReader::f32() {
  return std::bit_cast<float>(u32());
}

std::span<const std::uint8_t> ByteReader::bytes(std::size_t n) {
  need(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::expect_end() const {
  if (remaining() != 0) {
    fail(ErrorCode::kFormat,
         what_ + ": " + std::to_string(remaining()) + " trailing bytes");
  }
}

VectorDataset read_vectors_bin(const std::filesystem::path &path,
                               ElementKind kind) {
  const auto file = read_file(path);
  ByteReader reader(file, path.string());
  const std::uint32_t count = reader.u32();
  const std::uint32_t dims = reader.u32();
  if (count == 0 || dims == 0) {
    fail(ErrorCode::kFormat, path.string() + ": zero count or dims in header");
  }
  std::uint64_t elements = 0;
  std::uint64_t payload = 0;
  if (mul_overflows(count, dims, &elements) ||
      mul_overflows(elements, element_width(kind), &payload)) {
    fail(ErrorCode::kFormat, path.string() + ": payload size overflows");
  }
  if (reader.remaining() < payload) {
    fail(ErrorCode::kFormat, path.string() + ": short file, header promises " +
                                 std::to_string(payload) + " payload bytes, found " +
                                 std::to_string(reader.remaining()));
  }
  const auto body = reader.bytes(payload);
  reader.expect_end();

  if (kind == ElementKind::kU8) {
    return VectorDataset::from_u8(dims,
                                  std::vector<std::uint8_t>(body.begin(), body.end()));
  }
  ByteReader values(body, path.string());
  std::vector<float> out(elements);
  for (float &v : out) {
    v = values.f32();
  }
  return VectorDataset::from_f32(dims, std::move(out));
}

void write_vectors_bin(const std::filesystem::path &path,
                       const VectorDataset &dataset) {
  require(dataset.count() <= UINT32_MAX && dataset.dims() <= UINT32_MAX,
          ErrorCode::kFormat, "dataset too large for a u32 header");
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(dataset.count()));
  w.u32(static_cast<std::uint32_t>(dataset.dims()));
  if (dataset.kind() == ElementKind::kU8) {
    w.bytes(dataset.values<std::uint8_t>());
  } else {
    for (float v : dataset.values<float>()) {
      w.f32(v);
    }
  }
  write_file(path, w.buffer());
}

GroundTruth read_ground_truth(const std::filesystem::path &path) {
  const auto file = read_file(path);
  ByteReader reader(file, path.string());
  GroundTruth gt;
  gt.query_count = reader.u32();
  gt.k = reader.u32();
  std::uint64_t cells = 0;
  std::uint64_t payload = 0;
  if (mul_overflows(gt.query_count, gt.k, &cells) ||
      mul_overflows(cells, 8, &payload)) {
    fail(ErrorCode::kFormat, path.string() + ": payload size overflows");
  }
  if (reader.remaining() != payload) {
    fail(ErrorCode::kFormat,
         path.string() + ": expected " + std::to_string(payload) +
             " payload bytes, found " + std::to_string(reader.remaining()));
  }
  gt.ids.resize(cells);
  gt.distances.resize(cells);
  for (auto &id : gt.ids) {
    const std::int32_t raw = reader.i32();
    if (raw < 0) {
      fail(ErrorCode::kFormat, path.string() + ": negative id in ground truth");
    }
    id = static_cast<std::uint32_t>(raw);
  }
  for (auto &d : gt.distances) {
    d = reader.f32();
  }
  reader.expect_end();
  gt.validate();
  return gt;
}

void write_ground_truth(const std::filesystem::path &path,
                        const GroundTruth &gt) {
  require(gt.ids.size() == gt.query_count * gt.k &&
              gt.distances.size() == gt.query_count * gt.k,
          ErrorCode::kInvariant, "ground truth buffers do not match header");
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(gt.query_count));
  w.u32(static_cast<std::uint32_t>(gt.k));
  for (std::uint32_t id : gt.ids) {
    require(id <= static_cast<std::uint32_t>(INT32_MAX), ErrorCode::kFormat,
            "id does not fit the signed 32-bit ground-truth format");
    w.i32(static_cast<std::int32_t>(id));
  }
  for (float d : gt.distances) {
    w.f32(d);
  }
  write_file(path, w.buffer());
}

}  // namespace beamgraph
