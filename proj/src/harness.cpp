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

#include <omp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "elfz/subprocess.hpp"
#include "elfz/toy_sut.hpp"

namespace elfz {
namespace fs = std::filesystem;

namespace {

bool mentions(const std::vector<std::string>& argv, std::string_view key) {
  return std::any_of(argv.begin(), argv.end(), [&](const std::string& a) {
    return a.find(key) != std::string::npos;
  });
}

std::chrono::milliseconds to_ms(double seconds) {
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0));
}

std::string case_name(size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu.bin", i);
  return buf;
}

ExecutionFailure failure_from(const ProcessResult& r) {
  if (r.timed_out) return {ExecutionFailure::Kind::Timeout, "runner exceeded timeout"};
  std::string detail;
  if (r.spawn_failed) detail = "spawn failed: ";
  else if (r.term_signal) detail = "killed by signal " + std::to_string(r.term_signal) + ": ";
  else detail = "exit " + std::to_string(r.exit_code) + ": ";
  // Keep the tail of stderr; tracebacks end with the useful line.
  std::string err = r.err;
  if (err.size() > 2000) err = err.substr(err.size() - 2000);
  return {ExecutionFailure::Kind::Crash, detail + err};
}

}  // namespace

void RunnerConfig::validate() const {
  if (command.empty()) throw std::invalid_argument("runner command is empty");
  for (const char* key : {"{source_path}", "{seed}", "{count}", "{out_dir}"}) {
    if (!mentions(command, key))
      throw std::invalid_argument(std::string("runner command lacks placeholder ") + key);
  }
  if (!(timeout_s > 0)) throw std::invalid_argument("runner timeout must be > 0");
  if (max_testcase_bytes == 0) throw std::invalid_argument("max_testcase_bytes must be > 0");
}

CoverageBackend CoverageBackend::toy(std::string name) {
  CoverageBackend b;
  b.kind = Kind::Toy;
  b.toy_name = std::move(name);
  return b;
}

CoverageBackend CoverageBackend::external(std::vector<std::string> argv) {
  CoverageBackend b;
  b.kind = Kind::External;
  b.harness = std::move(argv);
  return b;
}

void CoverageBackend::validate() const {
  if (kind == Kind::Toy) {
    if (!find_toy_sut(toy_name)) throw std::invalid_argument("unknown toy SUT: " + toy_name);
    return;
  }
  if (harness.empty()) throw std::invalid_argument("external harness argv is empty");
  if (!mentions(harness, "{testcase_path}"))
    throw std::invalid_argument("external harness argv lacks {testcase_path}");
  if (!(harness_timeout_s > 0)) throw std::invalid_argument("harness timeout must be > 0");
}

std::string CoverageBackend::describe() const {
  if (kind == Kind::Toy) return "toy:" + toy_name;
  std::string s = "external:";
  for (const std::string& a : harness) s += " " + a;
  return s;
}

RunOutcome run_candidate(std::string_view source, const RunnerConfig& runner,
                         uint64_t seed, size_t count) {
  if (source.empty()) return ExecutionFailure{ExecutionFailure::Kind::Crash, "empty source"};
  TempDir dir("elfz-run");
  const fs::path src = dir.path() / "candidate.py";
  const fs::path out = dir.path() / "out";
  fs::create_directory(out);
  write_file(src, source);
  auto argv = expand_argv(runner.command, {{"source_path", src.string()},
                                           {"seed", std::to_string(seed)},
                                           {"count", std::to_string(count)},
                                           {"out_dir", out.string()}});
  ProcessResult r = run_process(argv, to_ms(runner.timeout_s));
  if (!r.ok()) return failure_from(r);

  TestCases cases;
  for (size_t i = 0; i < count; ++i) {
    const fs::path p = out / case_name(i);
    if (!fs::exists(p)) break;
    std::string data = read_file(p);
    if (data.size() > runner.max_testcase_bytes) {
      spdlog::warn("test case {} is {} bytes, truncating to {}", i, data.size(),
                   runner.max_testcase_bytes);
      data.resize(runner.max_testcase_bytes);
    }
    cases.push_back(std::move(data));
  }
  if (cases.empty())
    return ExecutionFailure{ExecutionFailure::Kind::EmptyOutput, "runner produced no test cases"};
  return cases;
}

std::variant<std::string, ExecutionFailure> run_candidate_bytes(
    std::string_view source, const RunnerConfig& runner,
    std::span<const uint8_t> bytes) {
  if (bytes.empty()) throw std::invalid_argument("byte-mode replay needs a non-empty byte array");
  if (source.empty()) return ExecutionFailure{ExecutionFailure::Kind::Crash, "empty source"};
  TempDir dir("elfz-replay");
  const fs::path src = dir.path() / "candidate.py";
  const fs::path out = dir.path() / "out";
  const fs::path choice = dir.path() / "choices.bin";
  fs::create_directory(out);
  write_file(src, source);
  write_file(choice, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  std::vector<std::string> tmpl = runner.command;
  tmpl.insert(tmpl.end(), runner.bytes_args.begin(), runner.bytes_args.end());
  auto argv = expand_argv(tmpl, {{"source_path", src.string()},
                                 {"seed", "0"},
                                 {"count", "1"},
                                 {"out_dir", out.string()},
                                 {"bytes_path", choice.string()}});
  ProcessResult r = run_process(argv, to_ms(runner.timeout_s));
  if (!r.ok()) return failure_from(r);
  const fs::path p = out / case_name(0);
  if (!fs::exists(p))
    return ExecutionFailure{ExecutionFailure::Kind::EmptyOutput, "runner produced no test case"};
  std::string data = read_file(p);
  if (data.size() > runner.max_testcase_bytes) data.resize(runner.max_testcase_bytes);
  return data;
}

std::optional<CoverSet> parse_coverage_lines(std::string_view text) {
  std::vector<CoverageUnit> units;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) return std::nullopt;  // must be LF-terminated
    std::string_view line = text.substr(pos, nl - pos);
    if (line.empty()) return std::nullopt;
    CoverageUnit u = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), u);
    if (ec != std::errc() || ptr != line.data() + line.size()) return std::nullopt;
    units.push_back(u);
    pos = nl + 1;
  }
  return CoverSet(std::move(units));
}

namespace {

std::variant<CoverSet, std::string> external_case_cover(const std::string& testcase,
                                                        const CoverageBackend& backend,
                                                        const fs::path& file) {
  write_file(file, testcase);
  auto argv = expand_argv(backend.harness, {{"testcase_path", file.string()}});
  ProcessResult r = run_process(argv, to_ms(backend.harness_timeout_s));
  if (!r.ok()) {
    if (r.timed_out) return std::string("harness timed out");
    return "harness failed (exit " + std::to_string(r.exit_code) + "): " + r.err;
  }
  auto cover = parse_coverage_lines(r.out);
  if (!cover) return std::string("malformed harness output");
  return *cover;
}

}  // namespace

std::variant<CoverSet, std::string> case_cover(const std::string& testcase,
                                               const CoverageBackend& backend) {
  if (backend.kind == CoverageBackend::Kind::Toy) {
    const ToySut* sut = find_toy_sut(backend.toy_name);
    if (!sut) return "unknown toy SUT: " + backend.toy_name;
    return cover_from_mask(sut->trace(testcase));
  }
  TempDir dir("elfz-case");
  return external_case_cover(testcase, backend, dir.path() / "case.bin");
}

CoverSet measure_cover_serial(std::span<const std::string> cases,
                              const CoverageBackend& backend, MeasureStats* stats) {
  backend.validate();
  if (backend.kind == CoverageBackend::Kind::Toy)
    return toy_cover_serial(*find_toy_sut(backend.toy_name), cases);
  TempDir dir("elfz-measure");
  CoverSet total;
  size_t failed = 0;
  for (size_t i = 0; i < cases.size(); ++i) {
    auto r = external_case_cover(cases[i], backend, dir.path() / case_name(i));
    if (auto* c = std::get_if<CoverSet>(&r)) total.unite(*c);
    else ++failed;
  }
  if (stats) stats->failed_cases = failed;
  return total;
}

CoverSet measure_cover(std::span<const std::string> cases,
                       const CoverageBackend& backend, MeasureStats* stats) {
  backend.validate();
  if (backend.kind == CoverageBackend::Kind::Toy)
    return toy_cover(*find_toy_sut(backend.toy_name), cases);
  TempDir dir("elfz-measure");
  const long n = static_cast<long>(cases.size());
  std::vector<std::optional<CoverSet>> per(cases.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    auto r = external_case_cover(cases[i], backend, dir.path() / case_name(i));
    if (auto* c = std::get_if<CoverSet>(&r)) per[i] = std::move(*c);
  }
  CoverSet total;
  size_t failed = 0;
  for (auto& c : per) {
    if (c) total.unite(*c);
    else ++failed;
  }
  if (failed) spdlog::debug("{} of {} test cases failed in the coverage harness", failed, cases.size());
  if (stats) stats->failed_cases = failed;
  return total;
}

CoverOutcome approx_cov(std::string_view source, const RunnerConfig& runner,
                        const CoverageBackend& backend,
                        const ApproxCovConfig& cfg, uint64_t seed) {
  if (cfg.inputs_per_measurement == 0)
    throw std::invalid_argument("inputs_per_measurement must be >= 1");
  RunnerConfig bounded = runner;
  if (cfg.time_budget_s > 0) bounded.timeout_s = std::min(runner.timeout_s, cfg.time_budget_s);
  RunOutcome run = run_candidate(source, bounded, seed, cfg.inputs_per_measurement);
  if (auto* f = std::get_if<ExecutionFailure>(&run)) return *f;
  return measure_cover(std::get<TestCases>(run), backend);
}

}  // namespace elfz
