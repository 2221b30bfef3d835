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

#include "elfz/types.hpp"

namespace elfz {

const char* to_string(MutatorKind kind) {
  switch (kind) {
    case MutatorKind::Splicing: return "splicing";
    case MutatorKind::Completion: return "completion";
    case MutatorKind::Infilling: return "infilling";
  }
  return "?";
}

std::optional<MutatorKind> parse_mutator_kind(std::string_view text) {
  for (MutatorKind k : kAllMutators) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string Provenance::kind_name() const {
  return mutator ? to_string(*mutator) : "seed";
}

const char* to_string(ExecutionFailure::Kind kind) {
  switch (kind) {
    case ExecutionFailure::Kind::Crash: return "crash";
    case ExecutionFailure::Kind::Timeout: return "timeout";
    case ExecutionFailure::Kind::EmptyOutput: return "empty-output";
  }
  return "?";
}

}  // namespace elfz
