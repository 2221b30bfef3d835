// Copyright 2026 The elfz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <map>
#include <string>
#include <vector>

#include "elfz/evolution.hpp"
#include "elfz/subprocess.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace elfz {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::fixture;
using testing::python_runner;

size_t bin_files(const fs::path& dir) {
  size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ".bin";
  return n;
}

TEST(ProduceTest, SingleFuzzerCount) {
  TempDir dir("elfz-corpus");
  std::vector<SurvivorSource> f{{"fa", fixture("fa")}};
  ProduceReport rep = produce(f, python_runner(), {100, 0, 100, 3}, dir.path());
  EXPECT_EQ(rep.cases, 100u);
  EXPECT_TRUE(rep.failed_fuzzers.empty());
  EXPECT_EQ(bin_files(dir.path()), 100u);
  json m = json::parse(read_file(dir.path() / "manifest.json"));
  ASSERT_EQ(m["cases"].size(), 100u);
  EXPECT_EQ(m["cases"][0]["file"], "000000.bin");
  EXPECT_EQ(m["cases"][99]["file"], "000099.bin");
  EXPECT_EQ(m["cases"][7]["fuzzer"], "fa");
  EXPECT_EQ(m["cases"][7]["index"], 7);
}

TEST(ProduceTest, TwoFuzzersRoundRobin) {
  TempDir dir("elfz-corpus");
  std::vector<SurvivorSource> f{{"fb", fixture("fb")}, {"fd", fixture("fd")}};
  ProduceReport rep = produce(f, python_runner(), {10, 0, 100, 3}, dir.path());
  EXPECT_EQ(rep.cases, 10u);
  json m = json::parse(read_file(dir.path() / "manifest.json"));
  std::map<std::string, int> per;
  for (size_t i = 0; i < m["cases"].size(); ++i) {
    const auto& c = m["cases"][i];
    ++per[c["fuzzer"].get<std::string>()];
    EXPECT_EQ(c["fuzzer"], i % 2 == 0 ? "fb" : "fd");
    // Every case can be regenerated from its manifest entry.
    const std::string data = read_file(dir.path() / c["file"].get<std::string>());
    const std::string src = c["fuzzer"] == "fb" ? fixture("fb") : fixture("fd");
    RunOutcome again = run_candidate(src, python_runner(), c["seed"].get<uint64_t>(),
                                     c["index"].get<size_t>() + 1);
    EXPECT_EQ(std::get<TestCases>(again).back(), data);
  }
  EXPECT_EQ(per["fb"], 5);
  EXPECT_EQ(per["fd"], 5);
}

TEST(ProduceTest, FailingFuzzerIsReportedAndSkipped) {
  TempDir dir("elfz-corpus");
  std::vector<SurvivorSource> f{{"fj", fixture("fj")}, {"fe", fixture("fe")}};
  ProduceReport rep = produce(f, python_runner(), {10, 0, 100, 3}, dir.path());
  EXPECT_EQ(rep.failed_fuzzers, std::vector<NodeId>{"fj"});
  EXPECT_EQ(rep.cases, 5u);
}

TEST(ProduceTest, DurationMode) {
  TempDir dir("elfz-corpus");
  std::vector<SurvivorSource> f{{"fa", fixture("fa")}, {"fb", fixture("fb")}};
  ProduceReport rep = produce(f, python_runner(), {0, 1.0, 20, 5}, dir.path());
  EXPECT_GE(rep.cases, 20u);
  EXPECT_EQ(rep.cases % 20, 0u);
  EXPECT_EQ(bin_files(dir.path()), rep.cases);
}

TEST(ProduceTest, Errors) {
  TempDir dir("elfz-corpus");
  std::vector<SurvivorSource> f{{"fa", fixture("fa")}};
  EXPECT_THROW(produce({}, python_runner(), {10, 0, 100, 0}, dir.path()), std::invalid_argument);
  EXPECT_THROW(produce(f, python_runner(), {0, 0, 100, 0}, dir.path()), std::invalid_argument);
}

}  // namespace
}  // namespace elfz
