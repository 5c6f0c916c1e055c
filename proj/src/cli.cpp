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

#include "beamgraph/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "beamgraph/bench.hpp"
#include "beamgraph/build.hpp"
#include "beamgraph/io.hpp"
#include "beamgraph/mips.hpp"
#include "beamgraph/oracle.hpp"
#include "beamgraph/rabitq.hpp"
#include "beamgraph/search.hpp"
#include "beamgraph/synthetic.hpp"

namespace beamgraph {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kManifestVersion = 1;

//! Contents of <index>/manifest.json.
struct Manifest {
  ElementKind kind = ElementKind::kF32;
  DistanceKind metric = DistanceKind::kSquaredEuclidean;
  std::size_t base_dims = 0;  // dims of the user's vectors
  std::size_t count = 0;
  float max_norm = 0.0f;  // inner-product indexes only
  BuildParams params;
  std::optional<unsigned> quant_bits;
  std::uint64_t quant_seed = 0;
};

fs::path manifest_path(const fs::path &dir) {
  return dir / "manifest.json";
}
fs::path graph_path(const fs::path &dir) {
  return dir / "graph.bin";
}
fs::path data_path(const fs::path &dir, ElementKind kind) {
  return dir / (kind == ElementKind::kU8 ? "data.u8bin" : "data.fbin");
}
fs::path quant_path(const fs::path &dir) {
  return dir / "rabitq.bin";
}

void save_manifest(const fs::path &dir, const Manifest &m) {
  json j;
  j["version"] = kManifestVersion;
  j["element"] = to_string(m.kind);
  j["metric"] = to_string(m.metric);
  j["dims"] = m.base_dims;
  j["count"] = m.count;
  j["max_norm"] = m.max_norm;
  j["R"] = m.params.degree_cap;
  j["beam"] = m.params.beam_width;
  j["alpha"] = m.params.alpha;
  j["max_batch"] = m.params.max_batch;
  j["two_pass"] = m.params.two_pass;
  if (m.quant_bits) {
    j["quantizer"] = {{"bits", *m.quant_bits}, {"seed", m.quant_seed}};
  }
  std::ofstream f(manifest_path(dir));
  f << j.dump(2) << '\n';
  if (!f) {
    fail(ErrorCode::kIo, manifest_path(dir).string() + ": write failed");
  }
}

Manifest load_manifest(const fs::path &dir) {
  std::ifstream f(manifest_path(dir));
  if (!f) {
    fail(ErrorCode::kIo, manifest_path(dir).string() + ": cannot open");
  }
  try {
    const json j = json::parse(f);
    if (j.at("version").get<int>() != kManifestVersion) {
      fail(ErrorCode::kFormat, "unsupported manifest version");
    }
    Manifest m;
    const auto element = j.at("element").get<std::string>();
    if (element != "f32" && element != "u8") {
      fail(ErrorCode::kFormat, "unknown element kind " + element);
    }
    m.kind = element == "u8" ? ElementKind::kU8 : ElementKind::kF32;
    m.metric = j.at("metric").get<std::string>() == "ip"
                   ? DistanceKind::kInnerProduct
                   : DistanceKind::kSquaredEuclidean;
    m.base_dims = j.at("dims").get<std::size_t>();
    m.count = j.at("count").get<std::size_t>();
    m.max_norm = j.at("max_norm").get<float>();
    m.params.degree_cap = j.at("R").get<std::uint32_t>();
    m.params.beam_width = j.at("beam").get<std::uint32_t>();
    m.params.alpha = j.at("alpha").get<float>();
    m.params.max_batch = j.at("max_batch").get<std::size_t>();
    m.params.two_pass = j.at("two_pass").get<bool>();
    if (j.contains("quantizer")) {
      m.quant_bits = j["quantizer"].at("bits").get<unsigned>();
      m.quant_seed = j["quantizer"].at("seed").get<std::uint64_t>();
    }
    return m;
  } catch (const json::exception &e) {
    fail(ErrorCode::kFormat,
         manifest_path(dir).string() + ": " + std::string(e.what()));
  }
}

VectorDataset load_vectors(const fs::path &path) {
  const auto kind = kind_from_extension(path);
  if (!kind) {
    fail(ErrorCode::kInvalidArgument,
         path.string() + ": expected a .fbin or .u8bin file");
  }
  return read_vectors_bin(path, *kind);
}

std::optional<DistanceKind> parse_metric(const std::string &name) {
  if (name == "l2") return DistanceKind::kSquaredEuclidean;
  if (name == "ip") return DistanceKind::kInnerProduct;
  return std::nullopt;
}

void set_threads(int threads) {
  if (threads > 0) {
    omp_set_num_threads(threads);
  }
}

//! Queries in the space the graph was built in.
VectorDataset index_queries(const Manifest &m, const VectorDataset &queries) {
  require(queries.dims() == m.base_dims, ErrorCode::kDimensionMismatch,
          "query dims differ from the index");
  if (m.metric == DistanceKind::kInnerProduct) {
    return augment_queries(queries, m.max_norm).vectors;
  }
  return queries;
}

//! Distance used to score recall, in the ground-truth convention.
DistanceLookup recall_lookup(const Manifest &m, const VectorDataset &data,
                             const VectorDataset &queries) {
  if (m.metric == DistanceKind::kInnerProduct) {
    return [&data, &queries, d = m.base_dims](std::size_t q, VertexId id) {
      const auto x = data.row<float>(id);
      const auto y = queries.row<float>(q);
      double ip = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        ip += static_cast<double>(x[i]) * y[i];
      }
      return -ip;
    };
  }
  return [&data, &queries](std::size_t q, VertexId id) {
    return exact_distance(data, id, queries, q,
                          DistanceKind::kSquaredEuclidean);
  };
}

struct Options {
  // gen
  std::size_t count = 0;
  std::size_t dims = 0;
  std::size_t query_count = 0;
  std::string distribution = "clustered";
  std::string queries_out;
  // shared
  std::string input;
  std::string out;
  std::string index;
  std::string queries;
  std::string data;
  std::string gt;
  std::string metric = "l2";
  std::uint64_t seed = 1;
  int threads = 0;
  std::size_t k = 10;
  // build
  std::uint32_t degree_cap = 64;
  std::uint32_t build_beam = 128;
  float alpha = 1.2f;
  std::size_t max_batch = 100000;
  bool two_pass = false;
  // insert
  double batch_pct = 2.0;
  // search / sweep
  std::uint32_t beam = 64;
  std::vector<std::uint32_t> beams;
  bool quantized = false;
  bool no_rerank = false;
  // quantize
  unsigned bits = 4;
};

int cmd_gen(const Options &o, std::ostream &out) {
  const auto dist = parse_distribution(o.distribution);
  if (!dist) {
    fail(ErrorCode::kInvalidArgument,
         "unknown distribution '" + o.distribution + "'");
  }
  const auto all = gen_synthetic(o.count + o.query_count, o.dims, o.seed, *dist);
  write_vectors_bin(o.out, all.slice(0, o.count));
  if (o.query_count > 0) {
    require(!o.queries_out.empty(), ErrorCode::kInvalidArgument,
            "--queries needs --queries-out");
    write_vectors_bin(o.queries_out, all.slice(o.count, all.count()));
  }
  out << "wrote " << o.count << " x " << o.dims << " to " << o.out << '\n';
  return 0;
}

int cmd_build(const Options &o, std::ostream &out, std::ostream &err) {
  const auto metric = parse_metric(o.metric);
  if (!metric) {
    fail(ErrorCode::kInvalidArgument, "metric must be l2 or ip");
  }
  Manifest m;
  m.metric = *metric;
  m.params.degree_cap = o.degree_cap;
  m.params.beam_width = o.build_beam;
  m.params.alpha = o.alpha;
  m.params.max_batch = o.max_batch;
  m.params.two_pass = o.two_pass;
  m.params.validate();
  for (const auto &w : m.params.warnings()) {
    err << "warning: " << w << '\n';
  }

  const auto input = load_vectors(o.input);
  m.kind = input.kind();
  m.base_dims = input.dims();
  m.count = input.count();
  std::optional<VectorDataset> augmented;
  if (m.metric == DistanceKind::kInnerProduct) {
    auto a = augment_data(input);
    m.max_norm = a.max_norm;
    augmented.emplace(std::move(a.vectors));
  }
  const VectorDataset &indexed = augmented ? *augmented : input;

  const auto t0 = std::chrono::steady_clock::now();
  const GraphIndex graph = build(indexed, m.params);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_vectors_bin(data_path(dir, indexed.kind()), indexed);
  save_graph(graph_path(dir), graph);
  save_manifest(dir, m);
  out << "built " << m.count << " vectors in " << secs << " s ("
      << static_cast<double>(m.count) / std::max(secs, 1e-9)
      << " inserts/s) -> " << dir.string() << '\n';
  return 0;
}

int cmd_insert(const Options &o, std::ostream &out) {
  require(o.batch_pct > 0.0 && o.batch_pct <= 100.0,
          ErrorCode::kInvalidArgument, "--batch-pct must be in (0, 100]");
  const fs::path dir(o.index);
  Manifest m = load_manifest(dir);
  VectorDataset data = read_vectors_bin(data_path(dir, m.kind), m.kind);
  GraphIndex graph = load_graph(graph_path(dir));

  auto more = load_vectors(o.input);
  require(more.kind() == m.kind && more.dims() == m.base_dims,
          ErrorCode::kDimensionMismatch,
          "new rows differ in element kind or dims from the index");
  if (m.metric == DistanceKind::kInnerProduct) {
    more = augment_data(more, m.max_norm).vectors;
  }

  const std::size_t begin = data.count();
  data.append(more);
  const std::size_t total = data.count();
  BuildParams params = m.params;
  params.max_batch = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(o.batch_pct / 100.0 *
                                            static_cast<double>(total))));

  const auto t0 = std::chrono::steady_clock::now();
  insert_stream(graph, data, static_cast<VertexId>(begin),
                static_cast<VertexId>(total), params);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  m.count = total;
  m.quant_bits.reset();
  fs::remove(quant_path(dir));
  write_vectors_bin(data_path(dir, m.kind), data);
  save_graph(graph_path(dir), graph);
  save_manifest(dir, m);
  out << "inserted " << total - begin << " vectors in " << secs << " s ("
      << static_cast<double>(total - begin) / std::max(secs, 1e-9)
      << " inserts/s)\n";
  return 0;
}

int cmd_gt(const Options &o, std::ostream &out) {
  const auto metric = parse_metric(o.metric);
  if (!metric) {
    fail(ErrorCode::kInvalidArgument, "metric must be l2 or ip");
  }
  const auto data = load_vectors(o.data);
  const auto queries = load_vectors(o.queries);
  const auto gt = exact_knn(data, queries, o.k, *metric);
  write_ground_truth(o.out, gt);
  out << "wrote ground truth " << gt.query_count << " x " << gt.k << " to "
      << o.out << '\n';
  return 0;
}

struct LoadedIndex {
  Manifest manifest;
  VectorDataset data;
  GraphIndex graph;
  std::optional<RaBitQIndex> quantizer;
};

LoadedIndex open_index(const fs::path &dir, bool want_quantizer) {
  Manifest m = load_manifest(dir);
  VectorDataset data = read_vectors_bin(data_path(dir, m.kind), m.kind);
  GraphIndex graph = load_graph(graph_path(dir));
  require(graph.active_count() == data.count(), ErrorCode::kFormat,
          "graph and data files disagree on the vector count");
  std::optional<RaBitQIndex> q;
  if (want_quantizer) {
    require(m.quant_bits.has_value(), ErrorCode::kInvalidArgument,
            "index has no quantizer; run `quantize` first");
    q.emplace(load_rabitq(quant_path(dir)));
    require(q->count() == data.count(), ErrorCode::kFormat,
            "quantizer and data files disagree on the vector count");
  }
  return {std::move(m), std::move(data), std::move(graph), std::move(q)};
}

int cmd_search(const Options &o, std::ostream &out) {
  const auto idx = open_index(o.index, o.quantized);
  const auto raw = load_vectors(o.queries);
  const auto queries = index_queries(idx.manifest, raw);
  SearchParams params;
  params.beam_width = o.beam;
  params.k = static_cast<std::uint32_t>(o.k);
  params.rerank = !o.no_rerank;
  params.validate();

  GroundTruth result;
  result.query_count = queries.count();
  result.k = o.k;
  const auto lookup = recall_lookup(idx.manifest, idx.data, raw);
  for (std::size_t q = 0; q < queries.count(); ++q) {
    const auto found =
        idx.quantizer
            ? search_knn(idx.graph, *idx.quantizer, idx.data,
                         queries.row<float>(q), params)
            : search_knn_row(idx.graph, idx.data, queries, q, params);
    require(found.size() == o.k, ErrorCode::kInvalidArgument,
            "index holds fewer than k vectors");
    for (const auto &c : found) {
      result.ids.push_back(c.id);
      result.distances.push_back(static_cast<float>(lookup(q, c.id)));
    }
  }
  if (!o.out.empty()) {
    write_ground_truth(o.out, result);
  } else {
    for (std::size_t q = 0; q < result.query_count; ++q) {
      const auto ids = result.row_ids(q);
      for (std::size_t j = 0; j < ids.size(); ++j) {
        out << (j ? " " : "") << ids[j];
      }
      out << '\n';
    }
  }
  return 0;
}

int cmd_sweep(const Options &o, std::ostream &out) {
  for (std::uint32_t b : o.beams) {
    require(b > 0, ErrorCode::kInvalidArgument, "--beams must not contain 0");
  }
  const auto idx = open_index(o.index, o.quantized);
  const auto raw = load_vectors(o.queries);
  const auto queries = index_queries(idx.manifest, raw);
  const auto gt = read_ground_truth(o.gt);

  SweepConfig config;
  config.k = o.k;
  config.beam_widths = o.beams;
  config.threads = o.threads;
  config.quantizer = idx.quantizer ? &*idx.quantizer : nullptr;
  config.rerank = !o.no_rerank;
  const auto points =
      sweep(idx.graph, idx.data, queries, gt,
            recall_lookup(idx.manifest, idx.data, raw), config);
  if (o.out.empty()) {
    write_sweep_csv(out, points);
  } else {
    std::ofstream f(o.out);
    write_sweep_csv(f, points);
    if (!f) {
      fail(ErrorCode::kIo, o.out + ": write failed");
    }
  }
  return 0;
}

int cmd_quantize(const Options &o, std::ostream &out) {
  const fs::path dir(o.index);
  Manifest m = load_manifest(dir);
  require(m.kind == ElementKind::kF32, ErrorCode::kInvalidArgument,
          "quantization needs an f32 index");
  const auto data = read_vectors_bin(data_path(dir, m.kind), m.kind);
  const auto index = fit(data, o.bits, o.seed);
  save_rabitq(quant_path(dir), index);
  m.quant_bits = o.bits;
  m.quant_seed = o.seed;
  save_manifest(dir, m);
  out << "quantized " << index.count() << " vectors at " << o.bits
      << " bits: " << index.bytes_per_vector() << " bytes/vector vs "
      << data.dims() * sizeof(float) << " exact\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"beamgraph: batch-built proximity graph index for k-NN search"};
  app.require_subcommand(1);
  Options o;

  auto *gen = app.add_subcommand("gen", "Write a seeded synthetic dataset");
  gen->add_option("--count", o.count, "Data rows")->required()->check(CLI::PositiveNumber);
  gen->add_option("--dims", o.dims, "Dimensions")->required()->check(CLI::PositiveNumber);
  gen->add_option("--dist", o.distribution, "gaussian, clustered or lowrank");
  gen->add_option("--queries", o.query_count, "Extra query rows from the same distribution");
  gen->add_option("--queries-out", o.queries_out, "Query output .fbin");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--out", o.out, "Data output .fbin")->required();

  auto *bld = app.add_subcommand("build", "Build an index directory");
  bld->add_option("--input", o.input, ".fbin or .u8bin data")->required();
  bld->add_option("--R", o.degree_cap, "Degree cap (>= 2)");
  bld->add_option("--beam", o.build_beam, "Insertion beam width");
  bld->add_option("--alpha", o.alpha, "Prune alpha (>= 1)");
  bld->add_option("--max-batch", o.max_batch, "Largest insertion batch");
  bld->add_flag("--two-pass", o.two_pass, "Refine with a second pass");
  bld->add_option("--metric", o.metric, "l2 or ip");
  bld->add_option("--threads", o.threads, "Worker threads (0 = default)");
  bld->add_option("--out", o.out, "Index directory")->required();

  auto *ins = app.add_subcommand("insert", "Append rows to an index");
  ins->add_option("--index", o.index, "Index directory")->required();
  ins->add_option("--input", o.input, "New rows")->required();
  ins->add_option("--batch-pct", o.batch_pct, "Batch size in percent of the final count");
  ins->add_option("--threads", o.threads, "Worker threads (0 = default)");

  auto *gtc = app.add_subcommand("gt", "Exact ground truth by brute force");
  gtc->add_option("--data", o.data, "Data file")->required();
  gtc->add_option("--queries", o.queries, "Query file")->required();
  gtc->add_option("--k", o.k, "Neighbors per query")->check(CLI::PositiveNumber);
  gtc->add_option("--metric", o.metric, "l2 or ip");
  gtc->add_option("--threads", o.threads, "Worker threads (0 = default)");
  gtc->add_option("--out", o.out, "Ground-truth output file")->required();

  auto *src = app.add_subcommand("search", "k-NN search for a query file");
  src->add_option("--index", o.index, "Index directory")->required();
  src->add_option("--queries", o.queries, "Query file")->required();
  src->add_option("--k", o.k, "Neighbors per query")->check(CLI::PositiveNumber);
  src->add_option("--beam", o.beam, "Beam width");
  src->add_flag("--quantized", o.quantized, "Search on quantized distances");
  src->add_flag("--no-rerank", o.no_rerank, "Skip exact re-ranking");
  src->add_option("--out", o.out, "Write results in ground-truth format");

  auto *swp = app.add_subcommand("sweep", "Recall/QPS sweep over beam widths as CSV");
  swp->add_option("--index", o.index, "Index directory")->required();
  swp->add_option("--queries", o.queries, "Query file")->required();
  swp->add_option("--gt", o.gt, "Ground-truth file")->required();
  swp->add_option("--k", o.k, "Recall@k")->check(CLI::PositiveNumber);
  swp->add_option("--beams", o.beams, "Comma-separated beam widths")
      ->delimiter(',')
      ->required();
  swp->add_option("--threads", o.threads, "Query workers (0 = default)");
  swp->add_flag("--quantized", o.quantized, "Search on quantized distances");
  swp->add_flag("--no-rerank", o.no_rerank, "Skip exact re-ranking");
  swp->add_option("--out", o.out, "CSV output (default stdout)");

  auto *qnt = app.add_subcommand("quantize", "Fit the quantizer of an index");
  qnt->add_option("--index", o.index, "Index directory")->required();
  qnt->add_option("--bits", o.bits, "Bits per dimension: 1, 2, 4 or 8");
  qnt->add_option("--seed", o.seed, "Rotation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err);
  }

  try {
    set_threads(o.threads);
    if (*gen) return cmd_gen(o, out);
    if (*bld) return cmd_build(o, out, err);
    if (*ins) return cmd_insert(o, out);
    if (*gtc) return cmd_gt(o, out);
    if (*src) return cmd_search(o, out);
    if (*swp) return cmd_sweep(o, out);
    if (*qnt) return cmd_quantize(o, out);
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error &e) {
    err << "error: io: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace beamgraph
