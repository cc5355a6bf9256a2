// Copyright 2026 The modl-cocluster Authors.
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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("modl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  CliRun Modl(const std::string& args) const {
    const std::string cmd = std::string(MODL_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static void Spit(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

  fs::path dir_;
};

TEST_F(CliTest, GenerateWritesHeaderAndEdges) {
  const std::string g = Path("c.tsv");
  ASSERT_EQ(Modl("generate circular -o " + g + " --m 100000 --seed 4").code, 0);
  std::ifstream in(g);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# modl 0.1.0 seed=4");
  int64_t edges = 0;
  while (std::getline(in, line)) {
    ASSERT_NE(line.find('\t'), std::string::npos);
    ++edges;
  }
  EXPECT_EQ(edges, 100000);
  const auto spec = nlohmann::json::parse(Slurp(g + ".spec.json"));
  EXPECT_EQ(spec["family"], "circular");
  EXPECT_EQ(spec["seed"], 4);
  EXPECT_TRUE(fs::exists(g + ".labels.tsv"));

  ASSERT_EQ(Modl("generate circular -o " + Path("d.tsv") + " --m 100000 --seed 4").code, 0);
  EXPECT_EQ(Slurp(g), Slurp(Path("d.tsv")));
}

TEST_F(CliTest, FitIsDeterministicAcrossThreads) {
  const std::string g = Path("b.tsv");
  ASSERT_EQ(Modl("generate blockmodel -o " + g + " --m 1000 --seed 3").code, 0);
  const CliRun one = Modl("fit " + g + " -o " + Path("m1.json") + " --seed 9 --rounds 4 --threads 1");
  ASSERT_EQ(one.code, 0) << one.out;
  EXPECT_NE(one.out.find("clusters: k_s=3 k_t=3"), std::string::npos) << one.out;
  ASSERT_EQ(Modl("fit " + g + " -o " + Path("m2.json") + " --seed 9 --rounds 4 --threads 3 --quiet")
                .code,
            0);
  EXPECT_EQ(Slurp(Path("m1.json")), Slurp(Path("m2.json")));
  const auto model = nlohmann::json::parse(Slurp(Path("m1.json")));
  EXPECT_EQ(model["schema"], "modl-coclustering/1");
  EXPECT_EQ(model["seed"], 9);
  EXPECT_EQ(model["fit_log"]["rounds"].size(), 4u);
}

TEST_F(CliTest, ReportAndCoarsen) {
  const std::string g = Path("b.tsv"), m = Path("m.json");
  ASSERT_EQ(Modl("generate blockmodel -o " + g + " --m 1000 --seed 3").code, 0);
  ASSERT_EQ(Modl("fit " + g + " -o " + m + " --seed 1 --rounds 2 --quiet").code, 0);

  const CliRun root = Modl("coarsen " + m + " " + g + " --clusters 1,1");
  ASSERT_EQ(root.code, 0) << root.out;
  EXPECT_NE(root.out.find("S1\t100.00% (1000)\t100.00% (1000)\n"), std::string::npos) << root.out;

  const CliRun table = Modl("report " + m + " " + g + " --coarsen 3,3");
  ASSERT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("total\t"), std::string::npos);
  EXPECT_NE(table.out.find("100.00% (1000)"), std::string::npos);

  const CliRun metrics = Modl("report " + m + " " + g + " --metrics");
  ASSERT_EQ(metrics.code, 0);
  const auto j = nlohmann::json::parse(metrics.out);
  EXPECT_GT(j["mutual_information"].get<double>(), 0.0);
  EXPECT_GE(j["modl_mi_likelihood"].get<double>(), j["modl_mi_full"].get<double>());

  const CliRun cell = Modl("density " + m + " " + g + " --cell v0,v1");
  ASSERT_EQ(cell.code, 0);
  EXPECT_NE(cell.out.find("v0\tv1\t"), std::string::npos);

  const CliRun dendro = Modl("report " + m + " " + g + " --coarsen 2,2 --dendrogram " + Path("d.json"));
  ASSERT_EQ(dendro.code, 0) << dendro.out;
  const auto d = nlohmann::json::parse(Slurp(Path("d.json")));
  EXPECT_EQ(d["schema"], "modl-dendrogram/1");
  EXPECT_EQ(d["merges"].size(), 4u);
}

TEST_F(CliTest, ExitCodes) {
  Spit(Path("empty.tsv"), "# nothing\n");
  const CliRun empty = Modl("fit " + Path("empty.tsv"));
  EXPECT_EQ(empty.code, 2);
  EXPECT_NE(empty.out.find("no edges"), std::string::npos);

  Spit(Path("bad.tsv"), "a\tb\nc\n");
  EXPECT_EQ(Modl("fit " + Path("bad.tsv")).code, 2);

  EXPECT_EQ(Modl("fit " + Path("missing.tsv")).code, 3);
  EXPECT_EQ(Modl("generate nope -o " + Path("x.tsv")).code, 2);

  const std::string g = Path("b.tsv"), m = Path("m.json");
  ASSERT_EQ(Modl("generate blockmodel -o " + g + " --m 500 --seed 2").code, 0);
  ASSERT_EQ(Modl("fit " + g + " -o " + m + " --seed 1 --rounds 1 --quiet").code, 0);
  std::string edges = Slurp(g);
  edges += "v0\tv1\n";
  Spit(Path("tampered.tsv"), edges);
  const CliRun audit = Modl("evaluate " + m + " " + Path("tampered.tsv"));
  EXPECT_EQ(audit.code, 4);
  EXPECT_NE(audit.out.find("consistency"), std::string::npos);

  EXPECT_EQ(Modl("coarsen " + m + " " + g + " --clusters 0,1").code, 2);
  EXPECT_EQ(Modl("--version").code, 0);
}

TEST_F(CliTest, BenchWritesCsv) {
  const std::string out = Path("bench.csv");
  const CliRun r =
      Modl("bench pure-10-2 --sizes 200,400 --reps 2 --rounds 2 --seed 1 -o " + out);
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string csv = Slurp(out);
  EXPECT_NE(csv.find("size,rep,k_s,k_t,seconds,recovered"), std::string::npos);
  EXPECT_NE(csv.find("400,mean,"), std::string::npos);
}

}  // namespace
