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


#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "beamgraph/bench.hpp"
#include "beamgraph/cli.hpp"
#include "beamgraph/graph.hpp"
#include "beamgraph/io.hpp"
#include "beamgraph/oracle.hpp"
#include "beamgraph/rabitq.hpp"
#include "support.hpp"

using namespace beamgraph;
using bgtest::TempDir;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "beamgraph");
  std::vector<const char *> argv;
  for (const auto &a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string p(const std::filesystem::path &path) {
  return path.string();
}

}  // namespace

TEST(Cli, EndToEndL2) {
  TempDir dir("cli");
  ASSERT_EQ(cli({"gen", "--count", "3000", "--dims", "16", "--dist", "clustered",
                 "--queries", "100", "--queries-out", p(dir / "q.fbin"), "--seed",
                 "4", "--out", p(dir / "all.fbin")})
                .code,
            0);
  auto all = read_vectors_bin(dir / "all.fbin", ElementKind::kF32);
  ASSERT_EQ(all.count(), 3000u);
  ASSERT_EQ(read_vectors_bin(dir / "q.fbin", ElementKind::kF32).count(), 100u);
  write_vectors_bin(dir / "base.fbin", all.slice(0, 2500));
  write_vectors_bin(dir / "more.fbin", all.slice(2500, 3000));

  auto r = cli({"build", "--input", p(dir / "base.fbin"), "--R", "16", "--beam",
                "32", "--alpha", "1.2", "--out", p(dir / "idx")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "idx" / "manifest.json"));
  EXPECT_EQ(load_graph(dir / "idx" / "graph.bin").active_count(), 2500u);

  r = cli({"insert", "--index", p(dir / "idx"), "--input", p(dir / "more.fbin"),
           "--batch-pct", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto g = load_graph(dir / "idx" / "graph.bin");
  EXPECT_EQ(g.active_count(), 3000u);
  g.check_invariants();

  r = cli({"gt", "--data", p(dir / "all.fbin"), "--queries", p(dir / "q.fbin"),
           "--k", "10", "--out", p(dir / "gt.bin")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto gt = read_ground_truth(dir / "gt.bin");
  EXPECT_EQ(gt.query_count, 100u);
  EXPECT_EQ(gt.k, 10u);

  r = cli({"search", "--index", p(dir / "idx"), "--queries", p(dir / "q.fbin"),
           "--k", "10", "--beam", "64", "--out", p(dir / "res.bin")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = read_ground_truth(dir / "res.bin");
  std::vector<std::vector<VertexId>> ids;
  for (std::size_t q = 0; q < res.query_count; ++q) {
    ids.emplace_back(res.row_ids(q).begin(), res.row_ids(q).end());
  }
  auto queries = read_vectors_bin(dir / "q.fbin", ElementKind::kF32);
  EXPECT_GT(recall_at_k(ids, gt, 10, all, queries, DistanceKind::kSquaredEuclidean), 0.9);

  r = cli({"sweep", "--index", p(dir / "idx"), "--queries", p(dir / "q.fbin"),
           "--gt", p(dir / "gt.bin"), "--k", "10", "--beams", "16,64",
           "--threads", "1", "--out", p(dir / "sweep.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream csv(dir / "sweep.csv");
  std::string header, row1, row2, extra;
  std::getline(csv, header);
  std::getline(csv, row1);
  std::getline(csv, row2);
  EXPECT_EQ(header, "beam_width,k,recall,qps,mean_latency_us");
  EXPECT_EQ(row1.rfind("16,10,", 0), 0u);
  EXPECT_EQ(row2.rfind("64,10,", 0), 0u);
  EXPECT_FALSE(std::getline(csv, extra));

  r = cli({"quantize", "--index", p(dir / "idx"), "--bits", "4", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_rabitq(dir / "idx" / "rabitq.bin").bits(), 4u);
  r = cli({"sweep", "--index", p(dir / "idx"), "--queries", p(dir / "q.fbin"),
           "--gt", p(dir / "gt.bin"), "--beams", "32", "--quantized"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("32,10,"), std::string::npos);
}

TEST(Cli, InnerProductIndex) {
  TempDir dir("cli");
  auto data = bgtest::uniform_f32(1500, 8, 1);
  auto queries = bgtest::uniform_f32(50, 8, 2);
  write_vectors_bin(dir / "d.fbin", data);
  write_vectors_bin(dir / "q.fbin", queries);
  ASSERT_EQ(cli({"build", "--input", p(dir / "d.fbin"), "--R", "16", "--beam", "32",
                 "--metric", "ip", "--out", p(dir / "idx")})
                .code,
            0);
  ASSERT_EQ(cli({"gt", "--data", p(dir / "d.fbin"), "--queries", p(dir / "q.fbin"),
                 "--k", "10", "--metric", "ip", "--out", p(dir / "gt.bin")})
                .code,
            0);
  const auto gt = read_ground_truth(dir / "gt.bin");
  EXPECT_EQ(gt, exact_knn(data, queries, 10, DistanceKind::kInnerProduct));
  auto r = cli({"search", "--index", p(dir / "idx"), "--queries", p(dir / "q.fbin"),
                "--k", "10", "--beam", "128", "--out", p(dir / "res.bin")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = read_ground_truth(dir / "res.bin");
  std::vector<std::vector<VertexId>> ids;
  for (std::size_t q = 0; q < res.query_count; ++q) {
    ids.emplace_back(res.row_ids(q).begin(), res.row_ids(q).end());
  }
  EXPECT_GT(recall_at_k(ids, gt, 10, data, queries, DistanceKind::kInnerProduct), 0.9);
}

TEST(Cli, ValidationErrorsExitNonzero) {
  TempDir dir("cli");
  write_vectors_bin(dir / "d.fbin", bgtest::uniform_f32(100, 4, 1));
  auto r = cli({"build", "--input", p(dir / "d.fbin"), "--R", "1", "--out", p(dir / "idx")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("error"), std::string::npos);

  ASSERT_EQ(cli({"build", "--input", p(dir / "d.fbin"), "--R", "8", "--beam", "16",
                 "--out", p(dir / "idx")})
                .code,
            0);
  ASSERT_EQ(cli({"gt", "--data", p(dir / "d.fbin"), "--queries", p(dir / "d.fbin"),
                 "--k", "10", "--out", p(dir / "gt.bin")})
                .code,
            0);
  r = cli({"sweep", "--index", p(dir / "idx"), "--queries", p(dir / "d.fbin"),
           "--gt", p(dir / "gt.bin"), "--beams", "16,0"});
  EXPECT_NE(r.code, 0);

  EXPECT_NE(cli({"build", "--input", p(dir / "missing.fbin"), "--out", p(dir / "x")}).code, 0);
  EXPECT_NE(cli({"build", "--input", p(dir / "d.fbin"), "--alpha", "0.5", "--out",
                 p(dir / "y")})
                .code,
            0);
  EXPECT_NE(cli({"quantize", "--index", p(dir / "idx"), "--bits", "3"}).code, 0);
  EXPECT_NE(cli({"gen", "--count", "10", "--dims", "4", "--dist", "uniform", "--out",
                 p(dir / "g.fbin")})
                .code,
            0);
  EXPECT_NE(cli({"frobnicate"}).code, 0);
}
