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

#include "elfz/harness.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <string>
#include <vector>

#include "elfz/rng.hpp"
#include "elfz/toy_sut.hpp"
#include "test_support.hpp"

namespace elfz {
namespace {

using testing::fixture;
using testing::python_runner;

const CoverageBackend kToy = CoverageBackend::toy("balanced_parens");

CoverageBackend byte_harness(const std::string& script = "byte_harness.py") {
  return CoverageBackend::external(
      {"python3", "-S", (testing::fixtures_dir() / "harness" / script).string(), "{testcase_path}"});
}

std::vector<std::string> strings(std::initializer_list<const char*> l) {
  return {l.begin(), l.end()};
}

TEST(ToySutTest, SingleInputs) {
  BalancedParens sut;
  EXPECT_EQ(cover_from_mask(sut.trace("")), (CoverSet{1, 2, 3, 13}));
  EXPECT_EQ(cover_from_mask(sut.trace("(")), (CoverSet{1, 2, 3, 4, 5, 13}));
  EXPECT_EQ(cover_from_mask(sut.trace("()")), (CoverSet{1, 2, 3, 4, 5, 6, 7, 8, 13}));
  EXPECT_EQ(cover_from_mask(sut.trace(")")), (CoverSet{1, 2, 3, 4, 6, 7, 9, 10}));
  EXPECT_EQ(cover_from_mask(sut.trace("*")), (CoverSet{1, 2, 3, 4, 6, 11, 12}));
  EXPECT_EQ(BalancedParens::verdict("(()())"), true);
  EXPECT_EQ(BalancedParens::verdict("(("), false);
  EXPECT_EQ(BalancedParens::verdict(")("), false);
  EXPECT_EQ(BalancedParens::verdict("(*"), std::nullopt);
}

TEST(MeasureCoverTest, Examples) {
  EXPECT_EQ(measure_cover(strings({"(", "((", ""}), kToy), (CoverSet{1, 2, 3, 4, 5, 13}));
  // The checker returns False at ")" before the loop ends, but "(" reaches
  // line 13.
  EXPECT_EQ(measure_cover(strings({"(", ")", ")("}), kToy),
            (CoverSet{1, 2, 3, 4, 5, 6, 7, 9, 10, 13}));
  EXPECT_EQ(measure_cover({}, kToy), CoverSet{});
}

TEST(MeasureCoverTest, EveryLineIsReachable) {
  std::vector<std::string> all;
  const std::string alphabet = "()*";
  for (int len = 0; len <= 3; ++len) {
    size_t total = 1;
    for (int i = 0; i < len; ++i) total *= 3;
    for (size_t k = 0; k < total; ++k) {
      std::string s;
      for (size_t x = k, i = 0; i < static_cast<size_t>(len); ++i, x /= 3) s += alphabet[x % 3];
      all.push_back(s);
    }
  }
  EXPECT_EQ(measure_cover(all, kToy), CoverSet::range(1, 13));
}

TEST(MeasureCoverTest, ParallelMatchesSerialAndUnionOfSingles) {
  BalancedParens sut;
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> cases(uniform(rng, 0, 300));
    for (auto& c : cases) {
      const size_t len = uniform(rng, 0, 10);
      for (size_t i = 0; i < len; ++i) c += "()*x"[uniform(rng, 0, 3)];
    }
    CoverSet expect;
    for (const auto& c : cases) expect.unite(cover_from_mask(sut.trace(c)));
    EXPECT_EQ(toy_cover(sut, cases), expect);
    EXPECT_EQ(toy_cover_serial(sut, cases), expect);
  }
}

TEST(MeasureCoverTest, ExternalHarness) {
  MeasureStats st;
  std::vector<std::string> cases = strings({"ab", "b", "", "!boom"});
  CoverSet c = measure_cover(cases, byte_harness(), &st);
  EXPECT_EQ(c, (CoverSet{97, 98, 1000}));
  EXPECT_EQ(st.failed_cases, 1u);
  MeasureStats st2;
  EXPECT_EQ(measure_cover_serial(cases, byte_harness(), &st2), c);
  EXPECT_EQ(st2.failed_cases, 1u);
  auto bad = case_cover("x", byte_harness("garbage_harness.py"));
  ASSERT_TRUE(std::holds_alternative<std::string>(bad));
  EXPECT_EQ(std::get<std::string>(bad), "malformed harness output");
}

TEST(ParseCoverageLinesTest, Format) {
  EXPECT_EQ(*parse_coverage_lines("3\n1\n3\n"), (CoverSet{1, 3}));
  EXPECT_EQ(*parse_coverage_lines(""), CoverSet{});
  EXPECT_FALSE(parse_coverage_lines("3\n1"));
  EXPECT_FALSE(parse_coverage_lines("3\n\n"));
  EXPECT_FALSE(parse_coverage_lines("-1\n"));
  EXPECT_FALSE(parse_coverage_lines("0x10\n"));
  EXPECT_FALSE(parse_coverage_lines("1 \n"));
}

TEST(BackendTest, Validation) {
  EXPECT_THROW(CoverageBackend::toy("nope").validate(), std::invalid_argument);
  EXPECT_THROW(CoverageBackend::external({"prog"}).validate(), std::invalid_argument);
  RunnerConfig r = python_runner();
  EXPECT_NO_THROW(r.validate());
  r.command.pop_back();
  EXPECT_THROW(r.validate(), std::invalid_argument);
}

TEST(RunCandidateTest, EmptyStringsAreCases) {
  RunOutcome out = run_candidate(fixture("fe"), python_runner(), 1, 5);
  ASSERT_TRUE(std::holds_alternative<TestCases>(out));
  EXPECT_EQ(std::get<TestCases>(out), TestCases(5, ""));
}

TEST(RunCandidateTest, TypeErrorIsCrash) {
  RunOutcome out = run_candidate(fixture("fj"), python_runner(), 1, 50);
  ASSERT_TRUE(std::holds_alternative<ExecutionFailure>(out));
  const auto& f = std::get<ExecutionFailure>(out);
  EXPECT_EQ(f.kind, ExecutionFailure::Kind::Crash);
  EXPECT_NE(f.detail.find("TypeError"), std::string::npos);
}

TEST(RunCandidateTest, Timeout) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out = run_candidate(fixture("hang"), python_runner(0.5), 1, 1);
  ASSERT_TRUE(std::holds_alternative<ExecutionFailure>(out));
  EXPECT_EQ(std::get<ExecutionFailure>(out).kind, ExecutionFailure::Kind::Timeout);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(RunCandidateTest, NoOutputIsEmptyOutput) {
  RunnerConfig r;
  r.command = {"true", "{source_path}", "{seed}", "{count}", "{out_dir}"};
  RunOutcome out = run_candidate("x", r, 1, 3);
  ASSERT_TRUE(std::holds_alternative<ExecutionFailure>(out));
  EXPECT_EQ(std::get<ExecutionFailure>(out).kind, ExecutionFailure::Kind::EmptyOutput);
}

TEST(RunCandidateTest, MissingRunnerIsCrash) {
  RunnerConfig r;
  r.command = {"/nonexistent/elfz-runner", "{source_path}", "{seed}", "{count}", "{out_dir}"};
  RunOutcome out = run_candidate("x", r, 1, 3);
  ASSERT_TRUE(std::holds_alternative<ExecutionFailure>(out));
  EXPECT_EQ(std::get<ExecutionFailure>(out).kind, ExecutionFailure::Kind::Crash);
}

TEST(RunCandidateTest, OversizedCasesAreTruncated) {
  RunnerConfig r = python_runner();
  r.max_testcase_bytes = 4;
  const std::string src = "def gen_big(rng, output):\n    output.write('x' * 100)\n";
  RunOutcome out = run_candidate(src, r, 1, 2);
  ASSERT_TRUE(std::holds_alternative<TestCases>(out));
  EXPECT_EQ(std::get<TestCases>(out), TestCases(2, "xxxx"));
}

TEST(ApproxCovTest, FaCoversEverything) {
  CoverOutcome out = approx_cov(fixture("fa"), python_runner(), kToy, {1000, 60}, 7);
  ASSERT_TRUE(std::holds_alternative<CoverSet>(out));
  EXPECT_EQ(std::get<CoverSet>(out), CoverSet::range(1, 13));
}

TEST(ApproxCovTest, FaPrimeIsEquivalentToFa) {
  CoverOutcome a = approx_cov(fixture("fa"), python_runner(), kToy, {1000, 60}, 1);
  CoverOutcome b = approx_cov(fixture("fa_prime"), python_runner(), kToy, {1000, 60}, 2);
  EXPECT_EQ(compare_strength(std::get<CoverSet>(a), std::get<CoverSet>(b)), Strength::Equivalent);
}

TEST(ApproxCovTest, AsteriskOnlyGenerator) {
  CoverOutcome out = approx_cov(fixture("fd"), python_runner(), kToy, {1000, 60}, 7);
  ASSERT_TRUE(std::holds_alternative<CoverSet>(out));
  EXPECT_EQ(std::get<CoverSet>(out), (CoverSet{1, 2, 3, 4, 6, 11, 12, 13}));
}

TEST(ApproxCovTest, SingleInputIsReproducible) {
  CoverOutcome a = approx_cov(fixture("fa"), python_runner(), kToy, {1, 60}, 42);
  CoverOutcome b = approx_cov(fixture("fa"), python_runner(), kToy, {1, 60}, 42);
  ASSERT_TRUE(std::holds_alternative<CoverSet>(a));
  EXPECT_EQ(std::get<CoverSet>(a), std::get<CoverSet>(b));
  RunOutcome run = run_candidate(fixture("fa"), python_runner(), 42, 1);
  EXPECT_EQ(std::get<CoverSet>(a), measure_cover(std::get<TestCases>(run), kToy));
}

TEST(ApproxCovTest, FailuresAreData) {
  CoverOutcome out = approx_cov(fixture("fj"), python_runner(), kToy, {200, 60}, 1);
  EXPECT_TRUE(std::holds_alternative<ExecutionFailure>(out));
}

}  // namespace
}  // namespace elfz
