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

#ifndef ELFZ_LLM_HPP_
#define ELFZ_LLM_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "elfz/mutation.hpp"
#include "elfz/types.hpp"

namespace elfz {

struct LlmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class WireProtocol {
  // OpenAI-compatible /v1/completions; FIM goes through the "suffix" field.
  OpenAiSuffix,
  // Same endpoint, but FIM queries are spelled out with sentinel tokens in
  // the prompt, for servers that expose a raw FIM-trained model.
  RawSentinel,
};

struct FimSentinels {
  // CodeLlama spelling by default.
  std::string prefix = "<PRE> ";
  std::string suffix = " <SUF>";
  std::string middle = " <MID>";
  std::string end = " <EOT>";
};

struct LlmConfig {
  std::string endpoint_url = "http://127.0.0.1:8080";
  std::string completions_path = "/v1/completions";
  std::string model_name = "codellama/CodeLlama-13b-hf";
  double temperature = 0.2;
  double repetition_penalty = 1.15;
  size_t max_total_tokens = 8192;
  size_t max_new_tokens = 512;
  double request_timeout_s = 120.0;
  int retries = 3;
  size_t max_concurrent_requests = 8;
  WireProtocol protocol = WireProtocol::RawSentinel;
  FimSentinels sentinels;
  std::vector<std::string> stop = {"\ndef ", "\nclass ", "\nif __name__"};
  std::string api_key_env;  // env var holding a bearer token, if any
  bool log_bodies = false;

  void validate() const;  // throws std::invalid_argument
};

// One generation request as seen by a backend. `prefix` already carries the
// prompt header. `ordinal` identifies the request within the run so that
// deterministic backends can answer independently of scheduling.
struct LlmQuery {
  std::string request_id;
  MutatorKind kind = MutatorKind::Completion;
  bool fim = false;
  std::string prefix;
  std::string suffix;
  uint64_t ordinal = 0;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string name() const = 0;
  // Returns the continuation (completion) or the middle (FIM), without
  // sentinels. Throws LlmError.
  virtual std::string generate(const LlmQuery& query) = 0;
};

// Talks to an inference server over HTTP(S).
class HttpLlmBackend final : public LlmBackend {
 public:
  explicit HttpLlmBackend(LlmConfig cfg);
  std::string name() const override { return "http"; }
  std::string generate(const LlmQuery& query) override;

  // Exposed for tests: the JSON body for a query, and response parsing.
  std::string request_body(const LlmQuery& query) const;
  std::string parse_response(std::string_view body, bool fim) const;

 private:
  LlmConfig cfg_;
  std::string host_;       // scheme://host[:port]
  std::string path_;       // base path + completions path
};

struct MockLlmRules {
  uint64_t seed = 0;
  // Statements the mock writes into holes. "\n" separates lines; nested
  // lines use four-space indentation relative to the first.
  std::vector<std::string> token_pool;
  // Deliberately broken fragments (type errors, syntax errors).
  std::vector<std::string> invalid_pool;
  double invalid_rate = 0.1;
  size_t max_statements = 2;

  // Pool over the alphabet {"(", ")", "*"} for the balanced-parens toy.
  static MockLlmRules toy_parens(uint64_t seed, double invalid_rate = 0.1);
  void validate() const;
};

// Deterministic stand-in for a model: the answer is a pure function of
// (seed, request text, ordinal).
class MockLlmBackend final : public LlmBackend {
 public:
  explicit MockLlmBackend(MockLlmRules rules);
  std::string name() const override { return "mock"; }
  std::string generate(const LlmQuery& query) override;

 private:
  MockLlmRules rules_;
};

// Returns canned answers keyed by request id; unknown ids are an error.
class ScriptedLlmBackend final : public LlmBackend {
 public:
  explicit ScriptedLlmBackend(std::map<std::string, std::string> answers)
      : answers_(std::move(answers)) {}
  std::string name() const override { return "scripted"; }
  std::string generate(const LlmQuery& query) override;

 private:
  std::map<std::string, std::string> answers_;
};

// Estimated token count; the default is the bytes/4 heuristic.
using TokenEstimator = std::function<size_t(std::string_view)>;
size_t estimate_tokens_bytes4(std::string_view text);

// Removes lines from the middle of `code` (keeping its first and last
// `keep` lines) until header + code + extra fits `budget` tokens. Throws
// LlmError when even the kept lines do not fit.
std::string fit_prompt(std::string_view header, std::string_view code,
                       size_t extra_tokens, size_t budget,
                       const TokenEstimator& estimate, size_t keep = 10);

// Front door for the mutators: applies the token budget, stop sequences
// and bounded parallelism on top of a backend.
class LlmClient {
 public:
  LlmClient(LlmConfig cfg, std::shared_ptr<LlmBackend> backend,
            TokenEstimator estimator = estimate_tokens_bytes4);

  const LlmConfig& config() const { return cfg_; }
  LlmBackend& backend() { return *backend_; }

  // Text completion of `prompt`. The prompt header (leading comment block)
  // is never truncated. Throws LlmError, including for an empty answer.
  std::string complete(const std::string& header, const std::string& code,
                       uint64_t ordinal = 0, const std::string& request_id = {});

  // Fill-in-the-middle. An empty suffix degenerates to complete().
  std::string fill_in_middle(const std::string& header, const std::string& prefix,
                             const std::string& suffix, uint64_t ordinal = 0,
                             const std::string& request_id = {});

  using Answer = std::variant<std::string, LlmError>;

  // Runs all requests with at most max_concurrent_requests in flight and
  // returns answers in request order. Request i gets ordinal base + i.
  std::vector<Answer> run(std::span<const MutationRequest> requests,
                          uint64_t ordinal_base);

 private:
  std::string call(LlmQuery q);
  std::string apply_stops(std::string text) const;

  LlmConfig cfg_;
  std::shared_ptr<LlmBackend> backend_;
  TokenEstimator estimate_;
};

}  // namespace elfz

#endif  // ELFZ_LLM_HPP_
