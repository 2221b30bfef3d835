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

#include <cstdio>
#include <regex>

namespace elfz {
namespace {

std::string join(std::span<const std::string_view> lines, size_t from, size_t to) {
  std::string out;
  for (size_t i = from; i < to; ++i) out.append(lines[i]);
  return out;
}

void require_lines(size_t have, size_t need, const char* what) {
  if (have < need)
    throw MutationError(std::string(what) + " needs a source of at least " +
                        std::to_string(need) + " lines, got " + std::to_string(have));
}

}  // namespace

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    size_t end = nl == std::string_view::npos ? text.size() : nl + 1;
    lines.push_back(text.substr(pos, end - pos));
    pos = end;
  }
  return lines;
}

size_t signature_line(std::span<const std::string_view> lines,
                      const MutationOptions& opts) {
  const std::regex re(opts.signature_pattern);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line(lines[i]);
    if (std::regex_search(line, re)) return i;
  }
  return 0;
}

std::string make_header(MutatorKind kind, const PromptContext& ctx) {
  std::string h = "# This is a fuzzer that generates " + ctx.format +
                  " inputs to test a program that parses them.\n";
  switch (kind) {
    case MutatorKind::Completion:
      h += "# Task: continue the code so the fuzzer generates more diverse valid inputs.\n";
      break;
    case MutatorKind::Infilling:
      h += "# Task: rewrite the missing lines so the fuzzer generates more diverse valid inputs.\n";
      break;
    case MutatorKind::Splicing:
      h += "# Task: write the code that joins the two fragments into one stronger fuzzer.\n";
      break;
  }
  if (!ctx.format_hint.empty()) h += "# Hint: " + ctx.format_hint + "\n";
  return h;
}

MutationRequest make_completion_at(std::string_view parent, size_t cut,
                                   const PromptContext& ctx,
                                   const MutationOptions& opts) {
  auto lines = split_lines(parent);
  require_lines(lines.size(), 2, "completion");
  const size_t sig = signature_line(lines, opts);
  if (sig + 1 >= lines.size()) throw MutationError("nothing follows the entry-point signature");
  if (cut <= sig || cut >= lines.size())
    throw MutationError("completion cut " + std::to_string(cut) + " out of range");
  MutationRequest r;
  r.kind = MutatorKind::Completion;
  r.prompt_header = make_header(r.kind, ctx);
  r.prefix = join(lines, 0, cut);
  return r;
}

MutationRequest make_completion(std::string_view parent, const PromptContext& ctx,
                                Rng& rng, const MutationOptions& opts) {
  auto lines = split_lines(parent);
  require_lines(lines.size(), 2, "completion");
  const size_t sig = signature_line(lines, opts);
  if (sig + 1 >= lines.size()) throw MutationError("nothing follows the entry-point signature");
  const size_t cut = uniform(rng, sig + 1, lines.size() - 1);
  return make_completion_at(parent, cut, ctx, opts);
}

MutationRequest make_infilling_at(std::string_view parent, size_t start,
                                  size_t length, const PromptContext& ctx,
                                  const MutationOptions& opts) {
  auto lines = split_lines(parent);
  require_lines(lines.size(), 3, "infilling");
  const size_t sig = signature_line(lines, opts);
  if (start <= sig || start >= lines.size() || length == 0 ||
      length > opts.infill_max_lines || start + length > lines.size())
    throw MutationError("infilling span out of range");
  MutationRequest r;
  r.kind = MutatorKind::Infilling;
  r.prompt_header = make_header(r.kind, ctx);
  r.prefix = join(lines, 0, start);
  r.suffix = join(lines, start + length, lines.size());
  return r;
}

MutationRequest make_infilling(std::string_view parent, const PromptContext& ctx,
                               Rng& rng, const MutationOptions& opts) {
  auto lines = split_lines(parent);
  require_lines(lines.size(), 3, "infilling");
  if (opts.infill_max_lines == 0) throw MutationError("infill_max_lines must be >= 1");
  const size_t sig = signature_line(lines, opts);
  if (sig + 1 >= lines.size()) throw MutationError("nothing follows the entry-point signature");
  const size_t start = uniform(rng, sig + 1, lines.size() - 1);
  const size_t longest = std::min(opts.infill_max_lines, lines.size() - start);
  const size_t length = uniform(rng, 1, longest);
  return make_infilling_at(parent, start, length, ctx, opts);
}

MutationRequest make_splicing_at(std::string_view parent_a,
                                 std::string_view parent_b, size_t head_cut,
                                 size_t tail_cut, const PromptContext& ctx,
                                 const MutationOptions& opts) {
  auto a = split_lines(parent_a);
  auto b = split_lines(parent_b);
  require_lines(a.size(), 2, "splicing");
  require_lines(b.size(), 2, "splicing");
  const size_t sig_a = signature_line(a, opts);
  const size_t sig_b = signature_line(b, opts);
  if (head_cut <= sig_a || head_cut > a.size())
    throw MutationError("splicing head cut out of range");
  if (tail_cut <= sig_b || tail_cut > b.size())
    throw MutationError("splicing tail cut out of range");
  MutationRequest r;
  r.kind = MutatorKind::Splicing;
  r.prompt_header = make_header(r.kind, ctx);
  r.prefix = join(a, 0, head_cut);
  r.suffix = join(b, tail_cut, b.size());
  return r;
}

MutationRequest make_splicing(std::string_view parent_a, std::string_view parent_b,
                              const PromptContext& ctx, Rng& rng,
                              const MutationOptions& opts) {
  auto a = split_lines(parent_a);
  auto b = split_lines(parent_b);
  require_lines(a.size(), 2, "splicing");
  require_lines(b.size(), 2, "splicing");
  const size_t head_cut = uniform(rng, signature_line(a, opts) + 1, a.size());
  const size_t tail_cut = uniform(rng, signature_line(b, opts) + 1, b.size());
  return make_splicing_at(parent_a, parent_b, head_cut, tail_cut, ctx, opts);
}

std::optional<std::string> assemble(std::string_view result_text,
                                    const MutationRequest& request) {
  if (!request.prompt_header.empty() && result_text.starts_with(request.prompt_header))
    result_text.remove_prefix(request.prompt_header.size());
  if (result_text.empty()) return std::nullopt;
  std::string out = request.prefix;
  out.append(result_text);
  if (request.suffix) out.append(*request.suffix);
  return out;
}

std::vector<PlannedMutation> plan_mutations(
    std::span<const SurvivorSource> survivors,
    std::span<const MutatorKind> enabled, size_t count,
    const PromptContext& ctx, Rng& rng, const MutationOptions& opts,
    const std::string& id_prefix) {
  if (enabled.empty()) throw std::invalid_argument("no mutator enabled");
  if (survivors.empty()) throw std::invalid_argument("no survivors to mutate");
  std::vector<PlannedMutation> plan;
  plan.reserve(count);
  const size_t n = survivors.size();
  for (size_t i = 0; i < count; ++i) {
    PlannedMutation pm;
    pm.kind = enabled[i % enabled.size()];
    std::vector<NodeId> parents;
    try {
      MutationRequest req;
      if (pm.kind == MutatorKind::Splicing) {
        size_t ia = uniform(rng, 0, n - 1);
        size_t ib = ia;
        if (n >= 2) {
          ib = uniform(rng, 0, n - 2);
          if (ib >= ia) ++ib;
        }
        parents = {survivors[ia].id, survivors[ib].id};
        req = make_splicing(survivors[ia].source, survivors[ib].source, ctx, rng, opts);
      } else {
        size_t ip = uniform(rng, 0, n - 1);
        parents = {survivors[ip].id};
        req = pm.kind == MutatorKind::Completion
                  ? make_completion(survivors[ip].source, ctx, rng, opts)
                  : make_infilling(survivors[ip].source, ctx, rng, opts);
      }
      req.parents = std::move(parents);
      char num[24];
      std::snprintf(num, sizeof num, "%04zu", i);
      req.id = id_prefix + num;
      pm.request = std::move(req);
    } catch (const MutationError& e) {
      pm.error = e.what();
    }
    plan.push_back(std::move(pm));
  }
  return plan;
}

}  // namespace elfz
