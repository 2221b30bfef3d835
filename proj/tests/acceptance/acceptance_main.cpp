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

// Acceptance checks. Each criterion prints one PASS or FAIL line; with no
// arguments every criterion runs, otherwise only the named ones. The exit
// status is non-zero when any criterion that ran failed.

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "elfz/config.hpp"
#include "elfz/evolution.hpp"
#include "elfz/harness.hpp"
#include "elfz/report.hpp"
#include "elfz/selection.hpp"
#include "elfz/subprocess.hpp"
#include "elfz/toy_sut.hpp"
#include "elfz/zest.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace elfz {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

const CoverageBackend kToy = CoverageBackend::toy("balanced_parens");

Verdict golden_explore() {
  const auto start = Clock::now();
  testing::GoldenScenario g = testing::run_golden_scenario();
  const double took = seconds_since(start);
  std::ostringstream why;
  bool ok = true;

  std::set<NodeId> admitted(g.report.explore.admitted.begin(), g.report.explore.admitted.end());
  if (admitted != std::set<NodeId>{"fg", "fh", "fk"}) {
    ok = false;
    why << " admitted set wrong;";
  }
  std::map<NodeId, DiscardReason> discarded;
  for (const Discarded& d : g.report.explore.discarded) discarded[d.id] = d.reason;
  if (discarded != std::map<NodeId, DiscardReason>{{"fi", DiscardReason::WeakerOrEquivalent},
                                                   {"fj", DiscardReason::Invalid}}) {
    ok = false;
    why << " discards wrong;";
  }
  const std::set<FuzzerSpace::Arrow> expected{
      {"fb", "fg"}, {"fd", "fg"}, {"fb", "fh"}, {"fd", "fh"}, {"fg", "fh"}};
  std::set<FuzzerSpace::Arrow> arrows(g.state.space.arrows().begin(), g.state.space.arrows().end());
  if (arrows != expected) {
    ok = false;
    why << " arrows:";
    for (const auto& [a, b] : arrows) why << ' ' << a << "->" << b;
    why << ';';
  }
  if (took >= 5.0) {
    ok = false;
    why << " too slow;";
  }
  return {ok, "admitted {fg,fh,fk}, fi weaker, fj invalid, arrows fb->fg fd->fg fb->fh fd->fh "
              "(+ fg->fh), none at fk, " + fmt_seconds(took) + why.str()};
}

Verdict cover_set_table() {
  auto strings = [](std::initializer_list<const char*> l) { return std::vector<std::string>(l.begin(), l.end()); };
  struct Row {
    const char* name;
    std::vector<std::string> inputs;
    CoverSet expected;
  };
  std::vector<Row> rows{
      {"F_B", strings({"(", "((", ""}), {1, 2, 3, 4, 5, 13}},
      {"F_D", strings({"*", "**", ""}), {1, 2, 3, 11, 12, 13}},
      {"F_G", strings({"(", "*", ""}), {1, 2, 3, 4, 5, 6, 11, 12, 13}},
      {"F_I", strings({""}), {1, 2, 3, 13}},
      {"F_K", strings({"(", ")", ")("}), {1, 2, 3, 4, 5, 6, 7, 9, 10}},
  };
  // F_A's inputs are whatever the generator emits.
  RunOutcome fa = run_candidate(testing::fixture("fa"), testing::python_runner(), 1, 1000);
  if (std::holds_alternative<ExecutionFailure>(fa)) return {false, "F_A did not run"};
  rows.push_back({"F_A", std::get<TestCases>(fa), CoverSet::range(1, 13)});

  bool ok = true;
  std::ostringstream detail;
  for (const Row& r : rows) {
    const CoverSet got = measure_cover(r.inputs, kToy);
    const bool match = got == r.expected;
    ok = ok && match;
    detail << ' ' << r.name << (match ? " ok" : " got " + got.to_string() + " want " + r.expected.to_string())
           << ';';
  }
  return {ok, detail.str()};
}

Verdict selection_oracle() {
  const auto start = Clock::now();
  Rng gen(20260301);
  size_t optimal = 0, exceeded = 0;
  const size_t instances = 1000;
  for (size_t t = 0; t < instances; ++t) {
    const size_t m = uniform(gen, 1, 12);
    const size_t n = uniform(gen, 1, std::min<size_t>(4, m));
    const CoverageUnit universe = uniform(gen, 1, 16);
    const double density = std::uniform_real_distribution<double>(0.05, 0.6)(gen);
    std::vector<Candidate> pool;
    for (size_t i = 0; i < m; ++i) {
      CoverSet c;
      for (CoverageUnit u = 0; u < universe; ++u)
        if (bernoulli(gen, density)) c.insert(u);
      pool.push_back({"c" + std::to_string(100 + i), c});
    }
    const size_t approx = approx_max(pool, {n, 10, gen()}).union_size;
    const size_t best = brute_force_max(pool, n).union_size;
    optimal += approx == best;
    exceeded += approx > best;
  }
  const double took = seconds_since(start);
  const double rate = static_cast<double>(optimal) / instances;
  char buf[160];
  std::snprintf(buf, sizeof buf, "optimum in %zu/%zu instances (%.1f%%), exceeded %zu times, %s",
                optimal, instances, 100 * rate, exceeded, fmt_seconds(took).c_str());
  return {rate >= 0.95 && exceeded == 0 && took < 60.0, buf};
}

std::string seed_template() {
  return read_file(testing::source_dir() / "templates" / "seed_template.py");
}

Verdict end_to_end() {
  TempDir dir("elfz-e2e");
  const auto start = Clock::now();
  ProcessResult r = run_process({testing::cli_path().string(), "evolve", "-c",
                                 (testing::source_dir() / "configs" / "toy.json").string(), "-o",
                                 dir.path().string()},
                                std::chrono::minutes(10));
  const double took = seconds_since(start);
  if (!r.ok()) return {false, "evolve failed: " + r.err.substr(r.err.size() > 2000 ? r.err.size() - 2000 : 0)};
  auto rows = read_trend_csv(dir.path() / "trend.csv");
  ordered_json m = ordered_json::parse(read_file(dir.path() / "fuzzers.json"));
  const CoverSet uni(m["survivor_union"].get<std::vector<CoverageUnit>>());
  const bool monotone = is_non_decreasing(rows);
  size_t first_full = 0;
  for (const TrendRow& row : rows)
    if (!first_full && row.survivor_union_size == 13) first_full = static_cast<size_t>(row.iteration);
  std::ostringstream d;
  d << rows.size() << " iterations, final union " << uni.to_string() << " (13 units from iteration "
    << first_full << "), trend " << (monotone ? "non-decreasing" : "DECREASES") << ", mock LLM, "
    << fmt_seconds(took);
  return {rows.size() <= 30 && !rows.empty() && uni == CoverSet::range(1, 13) && monotone && took < 120.0,
          d.str()};
}

std::vector<NodeId> top_k(const FuzzerSpace& space, std::vector<NodeId> pool, size_t k) {
  std::sort(pool.begin(), pool.end(), [&](const NodeId& a, const NodeId& b) {
    const size_t sa = space.at(a).cover.size(), sb = space.at(b).cover.size();
    return sa != sb ? sa > sb : a < b;
  });
  pool.resize(std::min(k, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

Verdict ablation_nofs() {
  TempDir dir("elfz-nofs");
  EngineConfig ec = testing::toy_config({{"evolution.ablation", "noFS"}});
  auto client = make_llm_client(ec.evolution.llm);
  std::vector<NodeId> prev;
  size_t steps = 0, mismatches = 0, decreases = 0;
  size_t last_union = 0;
  RunOptions opts{dir.path(), false, ec.document, {}};
  opts.on_step = [&](const EvolutionState& st, const StepReport& rep) {
    std::vector<NodeId> pool = prev.empty() ? std::vector<NodeId>{kSeedId} : prev;
    pool.insert(pool.end(), rep.explore.admitted.begin(), rep.explore.admitted.end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    std::vector<NodeId> got = st.survivors;
    std::sort(got.begin(), got.end());
    std::vector<NodeId> want = rep.explore.admitted.empty() ? (prev.empty() ? std::vector<NodeId>{kSeedId} : prev)
                                                           : top_k(st.space, pool, ec.evolution.survivors);
    std::sort(want.begin(), want.end());
    mismatches += got != want;
    if (steps > 0 && rep.row.survivor_union_size < last_union) ++decreases;
    last_union = rep.row.survivor_union_size;
    prev = got;
    ++steps;
  };
  EvolutionState st = run(ec.evolution, seed_template(), *client, opts);
  std::ostringstream d;
  d << steps << " iterations with top-k-by-|cover| selection, " << mismatches
    << " selections differing from top-k; trend " << (decreases ? "decreased " : "did not decrease ")
    << "(" << decreases << " drops; no monotonicity asserted)";
  return {steps == static_cast<size_t>(ec.evolution.iterations) && mismatches == 0 &&
              st.trend.size() == steps,
          d.str()};
}

Verdict determinism() {
  const std::vector<ConfigOverride> ov{{"evolution.iterations", 10}};
  EngineConfig ten = testing::toy_config(ov);
  EngineConfig five = testing::toy_config({{"evolution.iterations", 5}});
  TempDir a("elfz-det-a"), b("elfz-det-b"), c("elfz-det-c");
  auto go = [&](const EngineConfig& ec, const fs::path& out, bool resume) {
    auto client = make_llm_client(ec.evolution.llm);
    run(ec.evolution, seed_template(), *client, {out, resume, ec.document, {}});
  };
  go(ten, a.path(), false);
  go(ten, b.path(), false);
  go(five, c.path(), false);
  go(ten, c.path(), true);
  auto state_of = [](const fs::path& p) {
    ordered_json j = ordered_json::parse(read_file(p));
    j.erase("config");
    return j.dump();
  };
  const bool same_trend = read_file(a.path() / "trend.csv") == read_file(b.path() / "trend.csv");
  const bool same_export = read_file(a.path() / "fuzzers.json") == read_file(b.path() / "fuzzers.json");
  const bool resume_state = state_of(a.path() / "state_10.json") == state_of(c.path() / "state_10.json");
  const bool resume_files = read_file(a.path() / "trend.csv") == read_file(c.path() / "trend.csv") &&
                            read_file(a.path() / "fuzzers.json") == read_file(c.path() / "fuzzers.json");
  std::ostringstream d;
  d << "repeat run: trend.csv " << (same_trend ? "identical" : "DIFFERS") << ", fuzzers.json "
    << (same_export ? "identical" : "DIFFERS") << "; resume 5->10 vs uninterrupted 10: state "
    << (resume_state ? "identical" : "DIFFERS") << ", outputs " << (resume_files ? "identical" : "DIFFER");
  return {same_trend && same_export && resume_state && resume_files, d.str()};
}

Verdict zest_replay() {
  const std::vector<std::string> sources{
      testing::fixture("fa"), testing::fixture("fa_prime"), testing::fixture("fb"),
      testing::fixture("fc"), testing::fixture("fd"),       testing::fixture("fe"),
      testing::fixture("bytes_gen"),
      [] {
        std::string s = builtin_seed_template();
        s.replace(s.find("<FORMAT>"), 8, "parens");
        return s;
      }()};
  const RunnerConfig runner = testing::python_runner();
  Rng rng(4242);
  size_t identical = 0, failures = 0;
  for (int i = 0; i < 100; ++i) {
    const std::string& src = sources[uniform(rng, 0, sources.size() - 1)];
    Bytes bytes(uniform(rng, 1, 64));
    for (uint8_t& b : bytes) b = static_cast<uint8_t>(uniform(rng, 0, 255));
    auto x = replay(src, bytes, runner);
    auto y = replay(src, bytes, runner);
    if (std::holds_alternative<ExecutionFailure>(x) || std::holds_alternative<ExecutionFailure>(y)) {
      ++failures;
      continue;
    }
    identical += std::get<std::string>(x) == std::get<std::string>(y);
  }

  ZestConfig zc;
  zc.population = 3;
  zc.backend = kToy;
  zc.runner = runner;
  zc.rng_seed = 11;
  const auto start = Clock::now();
  ZestResult zr = zest_loop(testing::fixture("fa"), zc, 500);
  const double took = seconds_since(start);
  const bool monotone = std::is_sorted(zr.covs.begin(), zr.covs.end());
  const bool constant = std::all_of(zr.population.begin(), zr.population.end(),
                                    [](size_t p) { return p == 3; });
  BalancedParens sut;
  const size_t seed_cover = cover_from_mask(sut.trace(zr.corpus.front())).size();
  const bool grew = !zr.covs.empty() && zr.covs.back() >= seed_cover;
  std::ostringstream d;
  d << identical << "/100 replays identical (" << failures << " failed); zest budget 500: union "
    << seed_cover << " -> " << (zr.covs.empty() ? 0 : zr.covs.back()) << ", "
    << (monotone ? "non-decreasing" : "DECREASES") << ", population "
    << (constant ? "constant 3" : "NOT constant") << ", " << zr.corpus.size() - 1 << " admitted, "
    << fmt_seconds(took);
  return {identical == 100 && monotone && constant && grew && zr.covs.size() == 500, d.str()};
}

Verdict minimize_oracle() {
  Rng rng(777);
  BalancedParens sut;
  size_t good = 0, shrunk = 0;
  const size_t corpora = 200;
  for (size_t t = 0; t < corpora; ++t) {
    std::vector<std::string> cases(uniform(rng, 1, 60));
    for (auto& c : cases) {
      const size_t len = uniform(rng, 0, 8);
      for (size_t i = 0; i < len; ++i) c += "()*"[uniform(rng, 0, 2)];
    }
    CoverSet all;
    for (const auto& c : cases) all.unite(cover_from_mask(sut.trace(c)));
    MinimizeReport r = minimize(cases, kToy);
    CoverSet kept;
    for (size_t i : r.kept) kept.unite(cover_from_mask(sut.trace(cases[i])));
    good += r.complete && kept == all && r.kept.size() <= cases.size();
    shrunk += r.kept.size() < cases.size();
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu/%zu corpora keep their exact union with no growth (%zu shrank)",
                good, corpora, shrunk);
  return {good == corpora, buf};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Verdict()>>> all{
      {"golden_explore", golden_explore},   {"cover_set_table", cover_set_table},
      {"selection_oracle", selection_oracle}, {"end_to_end", end_to_end},
      {"ablation_nofs", ablation_nofs},     {"determinism", determinism},
      {"zest_replay", zest_replay},         {"minimize_oracle", minimize_oracle},
  };
  return all;
}

}  // namespace
}  // namespace elfz

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  std::set<std::string> wanted(argv + 1, argv + argc);
  for (const std::string& w : wanted) {
    const auto& all = elfz::criteria();
    if (std::none_of(all.begin(), all.end(), [&](const auto& c) { return c.first == w; })) {
      std::fprintf(stderr, "unknown criterion %s\n", w.c_str());
      return 2;
    }
  }
  int failed = 0;
  for (const auto& [name, check] : elfz::criteria()) {
    if (!wanted.empty() && !wanted.count(name)) continue;
    elfz::Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
