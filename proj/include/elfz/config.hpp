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

#ifndef ELFZ_CONFIG_HPP_
#define ELFZ_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "elfz/evolution.hpp"
#include "elfz/zest.hpp"
#include "json.hpp"

namespace elfz {

// The engine configuration file: a JSON object with the sections sut,
// runner, llm, evolution, selection and zest. Missing keys take their
// defaults; unknown keys and wrongly typed values are a ConfigError naming
// the key. In argv templates, {config_dir} expands to the directory of the
// config file; a relative evolution.seed_template is resolved against it.
struct EngineConfig {
  EvolutionConfig evolution;
  ZestConfig zest;
  std::filesystem::path seed_template;  // empty: the built-in template
  // Defaults merged with the file, before any expansion. This is what the
  // config hash covers.
  nlohmann::ordered_json document;
};

nlohmann::ordered_json default_config_document();

// One "section.key" = value override, applied before validation.
using ConfigOverride = std::pair<std::string, nlohmann::ordered_json>;

EngineConfig parse_config(const nlohmann::ordered_json& doc,
                          const std::filesystem::path& config_dir,
                          const std::vector<ConfigOverride>& overrides = {});
EngineConfig load_config(const std::filesystem::path& path,
                         const std::vector<ConfigOverride>& overrides = {});

// The seed template shipped with the engine (random text through the
// read_byte/read_chars surface).
std::string builtin_seed_template();

}  // namespace elfz

#endif  // ELFZ_CONFIG_HPP_
