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

#include "elfz/mutation.hpp"

#include <gtest/gtest.h>

#include <map>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace elfz {
namespace {

using testing::fixture;

std::string lines_of(const std::string& src, size_t from, size_t to) {
  auto lines = split_lines(src);
  std::string out;
  for (size_t i = from; i < to; ++i) out.append(lines[i]);
  return out;
}

// Pearson statistic against a uniform distribution.
double chi_square(const std::vector<size_t>& counts) {
  size_t total = 0;
  for (size_t c : counts) total += c;
  const double expected = static_cast<double>(total) / counts.size();
  double stat = 0;
  for (size_t c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

// Upper 1% points of the chi-square distribution.
double chi_square_critical_1pct(size_t df) {
  static const std::map<size_t, double> table{{1, 6.635}, {2, 9.210},  {3, 11.345},
                                              {7, 18.475}, {8, 20.090}, {11, 24.725},
                                              {12, 26.217}};
  return table.at(df);
}

TEST(SplitLinesTest, KeepsNewlines) {
  auto l = split_lines("a\nb\n\nc");
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "a\n");
  EXPECT_EQ(l[2], "\n");
  EXPECT_EQ(l[3], "c");
  EXPECT_TRUE(split_lines("").empty());
}

TEST(SignatureLineTest, FindsEntryPoint) {
  std::string src = "import random\n\ndef helper():\n    pass\ndef gen_xml(rng, out):\n    pass\n";
  auto lines = split_lines(src);
  EXPECT_EQ(signature_line(lines, {}), 4u);
  std::string none = "x = 1\ny = 2\n";
  auto l2 = split_lines(none);
  EXPECT_EQ(signature_line(l2, {}), 0u);
}

TEST(CompletionTest, FdWithoutItsLastLine) {
  const std::string fd = fixture("fd");
  MutationRequest r = make_completion_at(fd, 8, {"parens", ""});
  EXPECT_EQ(r.kind, MutatorKind::Completion);
  EXPECT_FALSE(r.is_fim());
  EXPECT_EQ(r.prefix, lines_of(fd, 0, 8));
  EXPECT_EQ(r.prompt_header.find("#"), 0u);
  EXPECT_NE(r.prompt_header.find("parens"), std::string::npos);
  EXPECT_EQ(r.wire_prefix(), r.prompt_header + r.prefix);
}

TEST(CompletionTest, TwoLineSourceHasOneLegalCut) {
  const std::string src = "def gen_x(rng, out):\n    out.write('a')\n";
  for (uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    EXPECT_EQ(make_completion(src, {}, rng).prefix, "def gen_x(rng, out):\n");
  }
  EXPECT_THROW(make_completion_at(src, 0, {}), MutationError);
  EXPECT_THROW(make_completion_at(src, 2, {}), MutationError);
  Rng rng(0);
  EXPECT_THROW(make_completion("def gen_x(rng, out): pass\n", {}, rng), MutationError);
}

TEST(CompletionTest, DeterministicForFixedSeed) {
  const std::string fa = fixture("fa");
  Rng a(99), b(99);
  EXPECT_EQ(make_completion(fa, {}, a).prefix, make_completion(fa, {}, b).prefix);
}

TEST(CompletionTest, CutIsUniformOverLegalPoints) {
  const std::string fa = fixture("fa");  // 13 lines, signature on line 0
  std::vector<size_t> counts(12, 0);
  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    MutationRequest r = make_completion(fa, {}, rng);
    const size_t cut = split_lines(r.prefix).size();
    ASSERT_GE(cut, 1u);
    ASSERT_LE(cut, 12u);
    ++counts[cut - 1];
  }
  EXPECT_LT(chi_square(counts), chi_square_critical_1pct(11));
}

TEST(InfillingTest, FbLineSixHole) {
  const std::string fb = fixture("fb");
  MutationRequest r = make_infilling_at(fb, 5, 1, {});
  ASSERT_TRUE(r.is_fim());
  EXPECT_EQ(r.prefix, lines_of(fb, 0, 5));
  EXPECT_EQ(*r.suffix, lines_of(fb, 6, 9));
  EXPECT_EQ(split_lines(fb)[5], "            random_sequence += \"(\"\n");
}

TEST(InfillingTest, SpanAtLastLineKeepsEmptySuffix) {
  const std::string fb = fixture("fb");
  MutationRequest r = make_infilling_at(fb, 8, 1, {});
  ASSERT_TRUE(r.is_fim());
  EXPECT_EQ(*r.suffix, "");
}

TEST(InfillingTest, MaxOneLine) {
  const std::string fa = fixture("fa");
  MutationOptions opts;
  opts.infill_max_lines = 1;
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    MutationRequest r = make_infilling(fa, {}, rng, opts);
    EXPECT_EQ(split_lines(r.prefix).size() + split_lines(*r.suffix).size(), 12u);
  }
  EXPECT_THROW(make_infilling_at(fa, 3, 2, {}, opts), MutationError);
}

TEST(InfillingTest, NeverRemovesSignature) {
  const std::string fa = fixture("fa");
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    MutationRequest r = make_infilling(fa, {}, rng);
    EXPECT_EQ(r.prefix.rfind("def fuzzer_fa(", 0), 0u);
    const size_t removed = 13 - split_lines(r.prefix).size() - split_lines(*r.suffix).size();
    EXPECT_GE(removed, 1u);
    EXPECT_LE(removed, 3u);
  }
  EXPECT_THROW(make_infilling_at(fa, 0, 1, {}), MutationError);
}

TEST(InfillingTest, StartIsUniform) {
  const std::string fb = fixture("fb");  // 9 lines, starts 1..8
  MutationOptions opts;
  opts.infill_max_lines = 1;
  std::vector<size_t> counts(8, 0);
  Rng rng(77);
  for (int i = 0; i < 10000; ++i)
    ++counts[split_lines(make_infilling(fb, {}, rng, opts).prefix).size() - 1];
  EXPECT_LT(chi_square(counts), chi_square_critical_1pct(7));
}

TEST(SplicingTest, FbHeadFdTailGivesFgShape) {
  const std::string fb = fixture("fb");
  const std::string fd = fixture("fd");
  MutationRequest r = make_splicing_at(fb, fd, 6, 5, {});
  EXPECT_EQ(r.kind, MutatorKind::Splicing);
  EXPECT_EQ(r.prefix, lines_of(fb, 0, 6));
  EXPECT_EQ(*r.suffix, lines_of(fd, 5, 9));
  auto src = assemble(testing::kGlueFG, r);
  ASSERT_TRUE(src);
  const std::string expected =
      "def fuzzer_fb(random: Random) -> str:\n"
      "    random_sequence = \"\"\n"
      "    while len(random_sequence) < MAX_LEN:\n"
      "        choice = random.randint(0, CHOICE_RANGE)\n"
      "        if choice == 0:\n"
      "            random_sequence += \"(\"\n"
      "        elif choice == 1:\n"
      "            random_sequence += \"*\"\n"
      "        else:\n"
      "            break\n"
      "    return random_sequence\n";
  EXPECT_EQ(*src, expected);
}

TEST(SplicingTest, SelfSpliceAndExtremeCuts) {
  const std::string fb = fixture("fb");
  MutationRequest self = make_splicing_at(fb, fb, 5, 6, {});
  EXPECT_EQ(self.prefix + *self.suffix, lines_of(fb, 0, 5) + lines_of(fb, 6, 9));
  MutationRequest full = make_splicing_at(fb, fb, 9, 9, {});
  EXPECT_EQ(full.prefix, fb);
  ASSERT_TRUE(full.is_fim());
  EXPECT_EQ(*full.suffix, "");
  EXPECT_THROW(make_splicing_at(fb, fb, 0, 3, {}), MutationError);
  EXPECT_THROW(make_splicing_at(fb, fb, 3, 10, {}), MutationError);
}

TEST(AssembleTest, Concatenation) {
  MutationRequest r;
  r.prompt_header = "# header\n";
  r.prefix = "A\n";
  EXPECT_EQ(*assemble("B\n", r), "A\nB\n");
  r.suffix = "C\n";
  EXPECT_EQ(*assemble("B\n", r), "A\nB\nC\n");
  EXPECT_EQ(*assemble("# header\nB\n", r), "A\nB\nC\n");
  EXPECT_FALSE(assemble("", r));
}

TEST(PlanMutationsTest, RoundRobinKindsAndIds) {
  std::vector<SurvivorSource> s{{"fb", fixture("fb")}, {"fd", fixture("fd")}};
  Rng rng(1);
  auto plan = plan_mutations(s, kAllMutators, 9, {}, rng, {}, "i0001-");
  ASSERT_EQ(plan.size(), 9u);
  for (size_t i = 0; i < plan.size(); ++i) {
    EXPECT_EQ(plan[i].kind, kAllMutators[i % 3]);
    ASSERT_TRUE(plan[i].request);
    EXPECT_EQ(plan[i].request->kind, plan[i].kind);
    char id[16];
    std::snprintf(id, sizeof id, "i0001-%04zu", i);
    EXPECT_EQ(plan[i].request->id, id);
  }
  EXPECT_EQ(plan[0].request->parents.size(), 2u);
  EXPECT_NE(plan[0].request->parents[0], plan[0].request->parents[1]);
}

TEST(PlanMutationsTest, CompletionOnly) {
  std::vector<SurvivorSource> s{{"fb", fixture("fb")}};
  const MutatorKind only[] = {MutatorKind::Completion};
  Rng rng(2);
  for (const auto& pm : plan_mutations(s, only, 20, {}, rng, {}, "x"))
    EXPECT_FALSE(pm.request->is_fim());
}

TEST(PlanMutationsTest, ParentsUniform) {
  std::vector<SurvivorSource> s{{"a", fixture("fa")}, {"b", fixture("fb")}, {"c", fixture("fc")}};
  const MutatorKind only[] = {MutatorKind::Infilling};
  Rng rng(3);
  std::vector<size_t> counts(3, 0);
  for (const auto& pm : plan_mutations(s, only, 6000, {}, rng, {}, "p"))
    ++counts[pm.request->parents[0][0] - 'a'];
  EXPECT_LT(chi_square(counts), chi_square_critical_1pct(2));
}

TEST(PlanMutationsTest, ShortParentBecomesPlanError) {
  std::vector<SurvivorSource> s{{"tiny", "def gen_x(rng, out): pass\n"}};
  Rng rng(4);
  auto plan = plan_mutations(s, kAllMutators, 3, {}, rng, {}, "t");
  for (const auto& pm : plan) {
    EXPECT_FALSE(pm.request);
    EXPECT_FALSE(pm.error.empty());
  }
  EXPECT_THROW(plan_mutations({}, kAllMutators, 1, {}, rng, {}, "t"), std::invalid_argument);
}

}  // namespace
}  // namespace elfz
