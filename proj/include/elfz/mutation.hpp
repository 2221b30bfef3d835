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

#ifndef ELFZ_MUTATION_HPP_
#define ELFZ_MUTATION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "elfz/rng.hpp"
#include "elfz/types.hpp"

namespace elfz {

struct MutationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MutationOptions {
  // Longest span the infilling mutator removes.
  size_t infill_max_lines = 3;
  // The generator entry point; its line is never cut or removed. When no
  // line matches, the first line is taken as the signature.
  std::string signature_pattern = R"(^def\s+(gen_|fuzzer_)\w*\s*\()";
};

// Text for the comment block prepended to every query.
struct PromptContext {
  std::string format = "text";  // e.g. "XML"
  std::string format_hint;      // e.g. "XML documents always start with <?xml ...?>"
};

// A query for the LLM. Completion requests carry no suffix; splicing and
// infilling are fill-in-the-middle queries and always carry one (possibly
// empty). The header is kept apart from the code so it never leaks into a
// stored candidate.
struct MutationRequest {
  std::string id;
  MutatorKind kind = MutatorKind::Completion;
  std::string prompt_header;
  std::string prefix;
  std::optional<std::string> suffix;
  std::vector<NodeId> parents;

  bool is_fim() const { return suffix.has_value(); }
  // What is sent: header followed by the code prefix.
  std::string wire_prefix() const { return prompt_header + prefix; }
};

struct MutationResult {
  std::string request_id;
  std::string new_source;
  std::string raw_llm_text;
};

// Splits text into lines, each keeping its trailing '\n' (the last line may
// lack one). Concatenating the pieces gives the input back.
std::vector<std::string_view> split_lines(std::string_view text);

// 0-based index of the entry-point signature line.
size_t signature_line(std::span<const std::string_view> lines,
                      const MutationOptions& opts);

std::string make_header(MutatorKind kind, const PromptContext& ctx);

// Completion: keep the lines before `cut` (0-based index of the first
// removed line) and ask for a continuation. Legal cuts lie strictly after
// the signature line.
MutationRequest make_completion(std::string_view parent, const PromptContext& ctx,
                                Rng& rng, const MutationOptions& opts = {});
MutationRequest make_completion_at(std::string_view parent, size_t cut,
                                   const PromptContext& ctx,
                                   const MutationOptions& opts = {});

// Infilling: remove `length` lines starting at `start` (both 0-based) and ask
// for the middle.
MutationRequest make_infilling(std::string_view parent, const PromptContext& ctx,
                               Rng& rng, const MutationOptions& opts = {});
MutationRequest make_infilling_at(std::string_view parent, size_t start,
                                  size_t length, const PromptContext& ctx,
                                  const MutationOptions& opts = {});

// Splicing: the first `head_cut` lines of parent_a, glue, then parent_b from
// line index `tail_cut` on.
MutationRequest make_splicing(std::string_view parent_a, std::string_view parent_b,
                              const PromptContext& ctx, Rng& rng,
                              const MutationOptions& opts = {});
MutationRequest make_splicing_at(std::string_view parent_a,
                                 std::string_view parent_b, size_t head_cut,
                                 size_t tail_cut, const PromptContext& ctx,
                                 const MutationOptions& opts = {});

// prefix ++ text ++ suffix. A header echoed back at the start of the text
// is dropped. Returns nullopt for an empty text (the mutant is invalid).
std::optional<std::string> assemble(std::string_view result_text,
                                    const MutationRequest& request);

struct SurvivorSource {
  NodeId id;
  std::string source;
};

struct PlannedMutation {
  MutatorKind kind = MutatorKind::Completion;
  std::optional<MutationRequest> request;
  std::string error;  // set when the parents were too short to mutate
};

// Builds `count` requests: kinds round-robin over `enabled` (in the order
// given), parents uniform over the survivors, splicing draws an ordered
// pair without replacement when two or more survivors exist. Requests are
// numbered id_prefix + index.
std::vector<PlannedMutation> plan_mutations(
    std::span<const SurvivorSource> survivors,
    std::span<const MutatorKind> enabled, size_t count,
    const PromptContext& ctx, Rng& rng, const MutationOptions& opts,
    const std::string& id_prefix);

}  // namespace elfz

#endif  // ELFZ_MUTATION_HPP_
