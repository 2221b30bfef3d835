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

#ifndef ELFZ_TYPES_HPP_
#define ELFZ_TYPES_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace elfz {

using NodeId = std::string;

enum class MutatorKind { Splicing, Completion, Infilling };

inline constexpr MutatorKind kAllMutators[] = {
    MutatorKind::Splicing, MutatorKind::Completion, MutatorKind::Infilling};

const char* to_string(MutatorKind kind);
std::optional<MutatorKind> parse_mutator_kind(std::string_view text);

// Where a candidate came from. An empty mutator means a seed.
struct Provenance {
  std::optional<MutatorKind> mutator;
  std::vector<NodeId> parents;

  static Provenance seed() { return {}; }
  bool is_seed() const { return !mutator.has_value(); }
  std::string kind_name() const;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Why a candidate could not produce test cases. Failures are data: they flow
// into exploration as discarded mutants rather than being thrown.
struct ExecutionFailure {
  enum class Kind { Crash, Timeout, EmptyOutput };
  Kind kind = Kind::Crash;
  std::string detail;
};

const char* to_string(ExecutionFailure::Kind kind);

// Bad or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The seed template does not run (CLI exit code 3).
struct SeedInitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace elfz

#endif  // ELFZ_TYPES_HPP_
