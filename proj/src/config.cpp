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

#include "elfz/config.hpp"

#include <algorithm>

#include "elfz/subprocess.hpp"

namespace elfz {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void merge_checked(ordered_json& base, const ordered_json& over, const std::string& where) {
  if (!over.is_object()) throw ConfigError((where.empty() ? "config" : where) + ": expected an object");
  for (auto it = over.begin(); it != over.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown key '" + key + "'");
    ordered_json& slot = base[it.key()];
    const ordered_json& v = it.value();
    if (slot.is_object()) {
      merge_checked(slot, v, key);
      continue;
    }
    bool ok = false;
    if (slot.is_boolean()) ok = v.is_boolean();
    else if (slot.is_number_float()) ok = v.is_number();
    else if (slot.is_number_unsigned() || slot.is_number_integer()) ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    else if (slot.is_string()) ok = v.is_string();
    else if (slot.is_array()) ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const ordered_json& e) { return e.is_string(); });
    else if (slot.is_null()) ok = v.is_null() || v.is_number_unsigned();
    if (!ok) throw ConfigError("key '" + key + "': expected " + std::string(slot.is_null() ? "an unsigned integer" : slot.type_name()) + ", got " + v.type_name());
    slot = v;
  }
}

std::vector<std::string> strings(const ordered_json& j) { return j.get<std::vector<std::string>>(); }

std::vector<std::string> expand_dir(std::vector<std::string> argv, const fs::path& dir) {
  for (std::string& a : argv) {
    for (size_t p; (p = a.find("{config_dir}")) != std::string::npos;)
      a.replace(p, 12, dir.string());
  }
  return argv;
}

template <typename F>
auto in_key(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

}  // namespace

ordered_json default_config_document() {
  const LlmConfig llm;
  const RunnerConfig runner;
  const ZestConfig zest;
  const MutationOptions mut;
  ordered_json d;
  d["sut"] = {{"backend", "toy"},
              {"toy", "balanced_parens"},
              {"harness", ordered_json::array()},
              {"harness_timeout", 10.0},
              {"format", "text"},
              {"format_hint", ""}};
  d["runner"] = {{"command", ordered_json::array()},
                 {"bytes_args", runner.bytes_args},
                 {"timeout", runner.timeout_s},
                 {"max_testcase_bytes", runner.max_testcase_bytes}};
  d["llm"] = {{"backend", "http"},
              {"endpoint", llm.endpoint_url},
              {"completions_path", llm.completions_path},
              {"model", llm.model_name},
              {"temperature", llm.temperature},
              {"repetition_penalty", llm.repetition_penalty},
              {"max_total_tokens", llm.max_total_tokens},
              {"max_new_tokens", llm.max_new_tokens},
              {"request_timeout", llm.request_timeout_s},
              {"retries", static_cast<unsigned>(llm.retries)},
              {"max_concurrent_requests", llm.max_concurrent_requests},
              {"protocol", "raw_sentinel"},
              {"sentinels", {{"prefix", llm.sentinels.prefix},
                             {"suffix", llm.sentinels.suffix},
                             {"middle", llm.sentinels.middle},
                             {"end", llm.sentinels.end}}},
              {"stop", llm.stop},
              {"api_key_env", llm.api_key_env},
              {"log_bodies", false},
              {"mock", {{"pool", "toy_parens"},
                        {"token_pool", ordered_json::array()},
                        {"invalid_pool", ordered_json::array()},
                        {"invalid_rate", 0.1},
                        {"max_statements", 2u},
                        {"seed", nullptr}}}};
  d["evolution"] = {{"iterations", 50u},
                    {"mutants", 200u},
                    {"survivors", 10u},
                    {"rng_seed", 0u},
                    {"enabled_mutators", {"splicing", "completion", "infilling"}},
                    {"ablation", "none"},
                    {"inputs_per_measurement", 1000u},
                    {"time_budget", 60.0},
                    {"infill_max_lines", mut.infill_max_lines},
                    {"signature_pattern", mut.signature_pattern},
                    {"seed_template", ""}};
  d["selection"] = {{"restarts", 10u}};
  d["zest"] = {{"population", zest.population},
               {"initial_length", zest.initial_length},
               {"flip_rate", zest.mutation.flip_rate},
               {"insert_delete_rate", zest.mutation.insert_delete_rate},
               {"max_chunk", zest.mutation.max_chunk},
               {"max_length", zest.mutation.max_length},
               {"rng_seed", 0u}};
  return d;
}

EngineConfig parse_config(const ordered_json& doc, const fs::path& config_dir,
                          const std::vector<ConfigOverride>& overrides) {
  ordered_json d = default_config_document();
  merge_checked(d, doc, "");
  for (const auto& [key, value] : overrides) {
    const size_t dot = key.find('.');
    if (dot == std::string::npos) throw ConfigError("override '" + key + "' must be section.key");
    ordered_json patch;
    patch[key.substr(0, dot)][key.substr(dot + 1)] = value;
    merge_checked(d, patch, "");
  }

  EngineConfig ec;
  ec.document = d;
  EvolutionConfig& c = ec.evolution;

  const ordered_json& sut = d["sut"];
  const std::string backend = sut["backend"];
  if (backend == "toy") {
    c.sut = CoverageBackend::toy(sut["toy"].get<std::string>());
  } else if (backend == "external") {
    c.sut = CoverageBackend::external(expand_dir(strings(sut["harness"]), config_dir));
  } else {
    throw ConfigError("key 'sut.backend': expected \"toy\" or \"external\", got \"" + backend + "\"");
  }
  c.sut.harness_timeout_s = sut["harness_timeout"];
  c.prompt.format = sut["format"];
  c.prompt.format_hint = sut["format_hint"];

  const ordered_json& rj = d["runner"];
  c.runner.command = expand_dir(strings(rj["command"]), config_dir);
  c.runner.bytes_args = expand_dir(strings(rj["bytes_args"]), config_dir);
  c.runner.timeout_s = rj["timeout"];
  c.runner.max_testcase_bytes = rj["max_testcase_bytes"];

  const ordered_json& lj = d["llm"];
  const std::string lb = lj["backend"];
  if (lb == "http") c.llm.backend = LlmSettings::Backend::Http;
  else if (lb == "mock") c.llm.backend = LlmSettings::Backend::Mock;
  else throw ConfigError("key 'llm.backend': expected \"http\" or \"mock\", got \"" + lb + "\"");
  LlmConfig& h = c.llm.http;
  h.endpoint_url = lj["endpoint"];
  h.completions_path = lj["completions_path"];
  h.model_name = lj["model"];
  h.temperature = lj["temperature"];
  h.repetition_penalty = lj["repetition_penalty"];
  h.max_total_tokens = lj["max_total_tokens"];
  h.max_new_tokens = lj["max_new_tokens"];
  h.request_timeout_s = lj["request_timeout"];
  h.retries = lj["retries"].get<int>();
  h.max_concurrent_requests = lj["max_concurrent_requests"];
  const std::string proto = lj["protocol"];
  if (proto == "raw_sentinel") h.protocol = WireProtocol::RawSentinel;
  else if (proto == "openai_suffix") h.protocol = WireProtocol::OpenAiSuffix;
  else throw ConfigError("key 'llm.protocol': expected \"raw_sentinel\" or \"openai_suffix\", got \"" + proto + "\"");
  h.sentinels = {lj["sentinels"]["prefix"], lj["sentinels"]["suffix"], lj["sentinels"]["middle"],
                 lj["sentinels"]["end"]};
  h.stop = strings(lj["stop"]);
  h.api_key_env = lj["api_key_env"];
  h.log_bodies = lj["log_bodies"];

  const ordered_json& ev = d["evolution"];
  c.rng_seed = ev["rng_seed"];
  const ordered_json& mj = lj["mock"];
  const uint64_t mock_seed = mj["seed"].is_null() ? derive_seed(c.rng_seed, 0x6d6f636bULL) : mj["seed"].get<uint64_t>();
  const std::string pool = mj["pool"];
  if (pool == "toy_parens") {
    c.llm.mock = MockLlmRules::toy_parens(mock_seed, mj["invalid_rate"]);
  } else if (pool == "custom") {
    c.llm.mock = MockLlmRules{};
    c.llm.mock.seed = mock_seed;
    c.llm.mock.invalid_rate = mj["invalid_rate"];
  } else {
    throw ConfigError("key 'llm.mock.pool': expected \"toy_parens\" or \"custom\", got \"" + pool + "\"");
  }
  if (!mj["token_pool"].empty()) c.llm.mock.token_pool = strings(mj["token_pool"]);
  if (!mj["invalid_pool"].empty()) c.llm.mock.invalid_pool = strings(mj["invalid_pool"]);
  c.llm.mock.max_statements = mj["max_statements"];

  c.iterations = in_key("evolution.iterations", [&] { return ev["iterations"].get<int>(); });
  c.mutants_per_iteration = ev["mutants"];
  c.survivors = ev["survivors"];
  c.enabled_mutators.clear();
  for (const std::string& name : strings(ev["enabled_mutators"])) {
    auto k = parse_mutator_kind(name);
    if (!k) throw ConfigError("key 'evolution.enabled_mutators': unknown mutator \"" + name + "\"");
    c.enabled_mutators.push_back(*k);
  }
  if (c.enabled_mutators.empty()) throw ConfigError("key 'evolution.enabled_mutators': empty");
  const std::string ab = ev["ablation"];
  auto ablation = parse_ablation(ab);
  if (!ablation) throw ConfigError("key 'evolution.ablation': expected none|noFS|noSP|noCP|noIN, got \"" + ab + "\"");
  c.ablation = *ablation;
  c.approx.inputs_per_measurement = ev["inputs_per_measurement"];
  c.approx.time_budget_s = ev["time_budget"];
  c.mutation.infill_max_lines = ev["infill_max_lines"];
  c.mutation.signature_pattern = ev["signature_pattern"];
  const std::string tmpl = ev["seed_template"];
  if (!tmpl.empty()) {
    fs::path p(tmpl);
    ec.seed_template = p.is_absolute() ? p : config_dir / p;
  }
  c.selection.restarts = d["selection"]["restarts"];

  const ordered_json& zj = d["zest"];
  ZestConfig& z = ec.zest;
  z.population = zj["population"];
  z.initial_length = zj["initial_length"];
  z.mutation.flip_rate = zj["flip_rate"];
  z.mutation.insert_delete_rate = zj["insert_delete_rate"];
  z.mutation.max_chunk = zj["max_chunk"];
  z.mutation.max_length = zj["max_length"];
  z.rng_seed = zj["rng_seed"];
  z.backend = c.sut;
  z.runner = c.runner;

  try {
    c.validate();
    z.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return ec;
}

EngineConfig load_config(const fs::path& path, const std::vector<ConfigOverride>& overrides) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot read config " + path.string() + ": " + e.what());
  }
  ordered_json doc = ordered_json::parse(text, nullptr, false, /*ignore_comments=*/true);
  if (doc.is_discarded()) throw ConfigError(path.string() + ": not valid JSON");
  fs::path dir = fs::absolute(path).parent_path();
  return parse_config(doc, dir, overrides);
}

std::string builtin_seed_template() {
  return "def gen_<FORMAT>(rng, output):\n"
         "    length = rng.read_byte()\n"
         "    random_text = rng.read_chars(length)\n"
         "    output.write(random_text)\n";
}

}  // namespace elfz
