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

#include "elfz/llm.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <thread>

#include "elfz/rng.hpp"
#include "httplib.h"
#include "json.hpp"

namespace elfz {
namespace {

using nlohmann::json;

size_t indent_of(std::string_view line) {
  size_t n = 0;
  while (n < line.size() && line[n] == ' ') ++n;
  return n;
}

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ' || s.back() == '\r' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

std::string_view last_code_line(std::string_view text) {
  auto lines = split_lines(text);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    std::string_view l = rstrip(*it);
    if (!l.empty()) return l;
  }
  return {};
}

std::string indent_block(std::string_view fragment, size_t indent) {
  std::string out;
  const std::string pad(indent, ' ');
  size_t pos = 0;
  while (pos <= fragment.size()) {
    size_t nl = fragment.find('\n', pos);
    std::string_view line = fragment.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    out += pad;
    out.append(line);
    out += '\n';
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace

void LlmConfig::validate() const {
  if (!(temperature >= 0)) throw std::invalid_argument("llm.temperature must be >= 0");
  if (max_new_tokens == 0) throw std::invalid_argument("llm.max_new_tokens must be > 0");
  if (max_total_tokens <= max_new_tokens)
    throw std::invalid_argument("llm.max_total_tokens must exceed max_new_tokens");
  if (retries < 1) throw std::invalid_argument("llm.retries must be >= 1");
  if (max_concurrent_requests == 0)
    throw std::invalid_argument("llm.max_concurrent_requests must be >= 1");
  if (!(request_timeout_s > 0)) throw std::invalid_argument("llm.request_timeout must be > 0");
}

// ---------------------------------------------------------------- HTTP

HttpLlmBackend::HttpLlmBackend(LlmConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const std::string& url = cfg_.endpoint_url;
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos)
    throw std::invalid_argument("llm.endpoint must look like http://host:port: " + url);
  const size_t slash = url.find('/', scheme + 3);
  host_ = url.substr(0, slash);
  std::string base = slash == std::string::npos ? "" : url.substr(slash);
  while (!base.empty() && base.back() == '/') base.pop_back();
  path_ = base + cfg_.completions_path;
#ifndef ELFZ_HAVE_OPENSSL
  if (host_.starts_with("https://"))
    throw std::invalid_argument("built without OpenSSL; https endpoints are unavailable");
#endif
}

std::string HttpLlmBackend::request_body(const LlmQuery& q) const {
  json body;
  body["model"] = cfg_.model_name;
  std::vector<std::string> stop = cfg_.stop;
  if (q.fim && cfg_.protocol == WireProtocol::RawSentinel) {
    body["prompt"] = cfg_.sentinels.prefix + q.prefix + cfg_.sentinels.suffix + q.suffix +
                     cfg_.sentinels.middle;
    stop.push_back(cfg_.sentinels.end);
  } else {
    body["prompt"] = q.prefix;
    if (q.fim) body["suffix"] = q.suffix;
  }
  body["max_tokens"] = cfg_.max_new_tokens;
  body["temperature"] = cfg_.temperature;
  body["repetition_penalty"] = cfg_.repetition_penalty;
  body["stop"] = stop;
  return body.dump();
}

std::string HttpLlmBackend::parse_response(std::string_view raw, bool fim) const {
  json j = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw LlmError("malformed backend response: not JSON");
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty() ||
      !j["choices"][0].contains("text") || !j["choices"][0]["text"].is_string())
    throw LlmError("malformed backend response: missing choices[0].text");
  std::string text = j["choices"][0]["text"].get<std::string>();
  if (fim && cfg_.protocol == WireProtocol::RawSentinel) {
    const FimSentinels& s = cfg_.sentinels;
    // Some servers echo the whole sentinel prompt; the middle follows the
    // middle sentinel.
    if (text.find(s.prefix) != std::string::npos || text.find(s.suffix) != std::string::npos) {
      size_t mid = text.find(s.middle);
      if (mid == std::string::npos)
        throw LlmError("malformed backend response: missing middle segment");
      text = text.substr(mid + s.middle.size());
    }
    for (const std::string& end : {s.end, std::string("<EOT>")}) {
      size_t e = text.find(end);
      if (e != std::string::npos) text.resize(e);
    }
  }
  return text;
}

std::string HttpLlmBackend::generate(const LlmQuery& q) {
  const std::string body = request_body(q);
  httplib::Headers headers;
  if (!cfg_.api_key_env.empty()) {
    if (const char* key = std::getenv(cfg_.api_key_env.c_str()))
      headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const auto timeout = std::chrono::duration<double>(cfg_.request_timeout_s);
  std::string last_error;
  for (int attempt = 1; attempt <= cfg_.retries; ++attempt) {
    httplib::Client cli(host_);
    cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    cli.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    cli.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    if (cfg_.log_bodies) {
      spdlog::info("llm request {} -> {}{} (Authorization: {}): {}", q.request_id, host_, path_,
                   headers.count("Authorization") ? "[redacted]" : "none", body);
    }
    auto res = cli.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      spdlog::warn("llm attempt {}/{} for {} failed: {}", attempt, cfg_.retries, q.request_id,
                   last_error);
    } else {
      if (cfg_.log_bodies) spdlog::info("llm response {} [{}]: {}", q.request_id, res->status, res->body);
      if (res->status == 200) return parse_response(res->body, q.fim);
      last_error = "HTTP " + std::to_string(res->status);
      spdlog::warn("llm attempt {}/{} for {} failed: {}", attempt, cfg_.retries, q.request_id,
                   last_error);
      // Client errors will not get better by asking again.
      if (res->status >= 400 && res->status < 500 && res->status != 429)
        throw LlmError("backend returned " + last_error + ": " + res->body.substr(0, 500));
    }
    if (attempt < cfg_.retries)
      std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
  }
  throw LlmError("endpoint " + host_ + " failed after " + std::to_string(cfg_.retries) +
                 " attempts: " + last_error);
}

// ---------------------------------------------------------------- mock

MockLlmRules MockLlmRules::toy_parens(uint64_t seed, double invalid_rate) {
  MockLlmRules r;
  r.seed = seed;
  r.invalid_rate = invalid_rate;
  r.token_pool = {
      R"py(output.write("("))py",
      R"py(output.write(")"))py",
      R"py(output.write("*"))py",
      R"py(output.write("()"))py",
      R"py(output.write(rng.choice(["(", ")", "*"])))py",
      "for _ in range(rng.randint(0, 3)):\n    output.write(rng.choice([\"(\", \")\", \"*\"]))",
      "if rng.randint(0, 1):\n    output.write(\"(\")\nelse:\n    output.write(\")\")",
      R"py(output.write("(" * rng.randint(0, 3) + ")" * rng.randint(0, 3)))py",
  };
  r.invalid_pool = {
      "output.write(1)",
      "output.write(rng.read_chars(",
      "random_text = random_text + 1",
  };
  return r;
}

void MockLlmRules::validate() const {
  if (!(invalid_rate >= 0 && invalid_rate <= 1))
    throw std::invalid_argument("mock invalid_rate must be in [0, 1]");
  if (token_pool.empty()) throw std::invalid_argument("mock token pool is empty");
  if (invalid_rate > 0 && invalid_pool.empty())
    throw std::invalid_argument("mock invalid pool is empty");
  if (max_statements == 0) throw std::invalid_argument("mock max_statements must be >= 1");
}

MockLlmBackend::MockLlmBackend(MockLlmRules rules) : rules_(std::move(rules)) {
  rules_.validate();
}

std::string MockLlmBackend::generate(const LlmQuery& q) {
  uint64_t h = fnv1a(q.prefix);
  h = fnv1a(q.suffix, h ^ (q.fim ? 0x5f : 0xc3));
  Rng rng(derive_seed(rules_.seed, h ^ mix64(q.ordinal)));

  std::string_view last = last_code_line(q.prefix);
  size_t indent = indent_of(last) + (!last.empty() && last.back() == ':' ? 4 : 0);
  if (indent == 0) indent = 4;

  if (bernoulli(rng, rules_.invalid_rate)) {
    const std::string& bad = rules_.invalid_pool[uniform(rng, 0, rules_.invalid_pool.size() - 1)];
    return indent_block(bad, indent);
  }
  std::string out;
  const size_t statements = uniform(rng, 1, rules_.max_statements);
  for (size_t i = 0; i < statements; ++i) {
    const std::string& frag = rules_.token_pool[uniform(rng, 0, rules_.token_pool.size() - 1)];
    out += indent_block(frag, indent);
  }
  return out;
}

std::string ScriptedLlmBackend::generate(const LlmQuery& q) {
  auto it = answers_.find(q.request_id);
  if (it == answers_.end()) throw LlmError("no scripted answer for request " + q.request_id);
  return it->second;
}

// ---------------------------------------------------------------- client

size_t estimate_tokens_bytes4(std::string_view text) { return (text.size() + 3) / 4; }

std::string fit_prompt(std::string_view header, std::string_view code,
                       size_t extra_tokens, size_t budget,
                       const TokenEstimator& estimate, size_t keep) {
  auto fits = [&](std::string_view c) {
    return estimate(std::string(header) + std::string(c)) + extra_tokens <= budget;
  };
  if (fits(code)) return std::string(code);
  auto lines = split_lines(code);
  if (lines.size() > 2 * keep) {
    const size_t region = lines.size() - 2 * keep;
    for (size_t drop = 1; drop <= region; ++drop) {
      const size_t start = keep + (region - drop) / 2;
      std::string trimmed;
      for (size_t i = 0; i < lines.size(); ++i)
        if (i < start || i >= start + drop) trimmed.append(lines[i]);
      if (fits(trimmed)) return trimmed;
    }
  }
  throw LlmError("prompt exceeds the token budget even after truncation");
}

LlmClient::LlmClient(LlmConfig cfg, std::shared_ptr<LlmBackend> backend,
                     TokenEstimator estimator)
    : cfg_(std::move(cfg)), backend_(std::move(backend)), estimate_(std::move(estimator)) {
  cfg_.validate();
  if (!backend_) throw std::invalid_argument("LlmClient needs a backend");
}

std::string LlmClient::apply_stops(std::string text) const {
  size_t cut = std::string::npos;
  for (const std::string& s : cfg_.stop) {
    if (s.empty()) continue;
    size_t p = text.find(s);
    if (p != std::string::npos) cut = std::min(cut, p);
  }
  if (cut != std::string::npos) {
    text.resize(cut);
    if (!text.empty()) text += '\n';
  }
  return text;
}

std::string LlmClient::call(LlmQuery q) {
  std::string text = apply_stops(backend_->generate(q));
  if (text.empty()) throw LlmError("backend returned an empty " + std::string(q.fim ? "middle" : "completion"));
  return text;
}

std::string LlmClient::complete(const std::string& header, const std::string& code,
                                uint64_t ordinal, const std::string& request_id) {
  const size_t budget = cfg_.max_total_tokens - cfg_.max_new_tokens;
  LlmQuery q;
  q.request_id = request_id;
  q.kind = MutatorKind::Completion;
  q.prefix = header + fit_prompt(header, code, 0, budget, estimate_);
  q.ordinal = ordinal;
  return call(std::move(q));
}

std::string LlmClient::fill_in_middle(const std::string& header, const std::string& prefix,
                                      const std::string& suffix, uint64_t ordinal,
                                      const std::string& request_id) {
  if (suffix.empty()) return complete(header, prefix, ordinal, request_id);
  const size_t budget = cfg_.max_total_tokens - cfg_.max_new_tokens;
  const size_t sentinel_tokens = estimate_(cfg_.sentinels.prefix + cfg_.sentinels.suffix +
                                           cfg_.sentinels.middle);
  // Shrink the prefix first, then the suffix, each keeping its own head and
  // tail.
  std::string fitted_prefix;
  try {
    fitted_prefix = fit_prompt(header, prefix, estimate_(suffix) + sentinel_tokens, budget, estimate_);
  } catch (const LlmError&) {
    fitted_prefix = fit_prompt(header, prefix, sentinel_tokens, budget, estimate_);
  }
  std::string fitted_suffix =
      fit_prompt("", suffix, estimate_(header + fitted_prefix) + sentinel_tokens, budget, estimate_);
  LlmQuery q;
  q.request_id = request_id;
  q.kind = MutatorKind::Infilling;
  q.fim = true;
  q.prefix = header + fitted_prefix;
  q.suffix = std::move(fitted_suffix);
  q.ordinal = ordinal;
  return call(std::move(q));
}

std::vector<LlmClient::Answer> LlmClient::run(std::span<const MutationRequest> requests,
                                              uint64_t ordinal_base) {
  std::vector<std::optional<Answer>> slots(requests.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < requests.size(); i = next++) {
      const MutationRequest& r = requests[i];
      try {
        std::string text =
            r.is_fim() ? fill_in_middle(r.prompt_header, r.prefix, *r.suffix, ordinal_base + i, r.id)
                       : complete(r.prompt_header, r.prefix, ordinal_base + i, r.id);
        slots[i].emplace(std::move(text));
      } catch (const LlmError& e) {
        slots[i].emplace(e);
      } catch (const std::exception& e) {
        slots[i].emplace(LlmError(e.what()));
      }
    }
  };
  const size_t nthreads = std::min(cfg_.max_concurrent_requests, requests.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  std::vector<Answer> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace elfz
