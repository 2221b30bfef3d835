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

#ifndef ELFZ_HARNESS_HPP_
#define ELFZ_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "elfz/cover_set.hpp"
#include "elfz/types.hpp"

namespace elfz {

// How to execute a candidate generator. `command` is an argv template that
// must mention {source_path}, {seed}, {count} and {out_dir}; the runner
// writes 000000.bin ... into out_dir and exits 0. In byte mode (replay),
// `bytes_args` is appended and {bytes_path} names the choice-byte file.
struct RunnerConfig {
  std::vector<std::string> command;
  std::vector<std::string> bytes_args = {"--bytes", "{bytes_path}"};
  double timeout_s = 30.0;
  size_t max_testcase_bytes = 1 << 20;

  void validate() const;  // throws std::invalid_argument
};

struct CoverageBackend {
  enum class Kind { Toy, External };
  Kind kind = Kind::Toy;
  std::string toy_name = "balanced_parens";
  // argv template with {testcase_path}; stdout lists one decimal id per line.
  std::vector<std::string> harness;
  double harness_timeout_s = 10.0;

  static CoverageBackend toy(std::string name);
  static CoverageBackend external(std::vector<std::string> argv);
  void validate() const;  // throws std::invalid_argument
  std::string describe() const;
};

struct ApproxCovConfig {
  size_t inputs_per_measurement = 1000;
  double time_budget_s = 60.0;
};

using TestCases = std::vector<std::string>;
using RunOutcome = std::variant<TestCases, ExecutionFailure>;
using CoverOutcome = std::variant<CoverSet, ExecutionFailure>;

// Executes the candidate through the runner and collects its test cases.
// Non-zero exit, signals and exec failures are Crash; no files is
// EmptyOutput. Oversized cases are truncated (with a warning).
RunOutcome run_candidate(std::string_view source, const RunnerConfig& runner,
                         uint64_t seed, size_t count);

// Byte-mode execution: one test case whose random choices come from `bytes`.
std::variant<std::string, ExecutionFailure> run_candidate_bytes(
    std::string_view source, const RunnerConfig& runner,
    std::span<const uint8_t> bytes);

struct MeasureStats {
  size_t failed_cases = 0;
};

// Union of per-test-case coverage. For the external backend a case whose
// harness run fails (or prints a malformed line) is skipped and counted.
CoverSet measure_cover(std::span<const std::string> cases,
                       const CoverageBackend& backend,
                       MeasureStats* stats = nullptr);
CoverSet measure_cover_serial(std::span<const std::string> cases,
                              const CoverageBackend& backend,
                              MeasureStats* stats = nullptr);

// Coverage of a single case, or an error description.
std::variant<CoverSet, std::string> case_cover(const std::string& testcase,
                                               const CoverageBackend& backend);

// Parses the external harness stdout: ASCII decimal ids, one per LF-ended
// line. Returns nullopt on any malformed line.
std::optional<CoverSet> parse_coverage_lines(std::string_view text);

// Runs the candidate for cfg.inputs_per_measurement cases, capped by the
// time budget, and measures the cover of what it produced.
CoverOutcome approx_cov(std::string_view source, const RunnerConfig& runner,
                        const CoverageBackend& backend,
                        const ApproxCovConfig& cfg, uint64_t seed);

}  // namespace elfz

#endif  // ELFZ_HARNESS_HPP_
