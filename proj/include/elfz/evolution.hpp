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

#ifndef ELFZ_EVOLUTION_HPP_
#define ELFZ_EVOLUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elfz/cover_set.hpp"
#include "elfz/harness.hpp"
#include "elfz/lattice.hpp"
#include "elfz/llm.hpp"
#include "elfz/mutation.hpp"
#include "elfz/rng.hpp"
#include "elfz/selection.hpp"
#include "elfz/types.hpp"
#include "json.hpp"

namespace elfz {

enum class Ablation { None, NoFS, NoSP, NoCP, NoIN };
const char* to_string(Ablation a);
std::optional<Ablation> parse_ablation(std::string_view text);

struct LlmSettings {
  enum class Backend { Http, Mock };
  Backend backend = Backend::Http;
  LlmConfig http;
  MockLlmRules mock = MockLlmRules::toy_parens(0);
};

struct EvolutionConfig {
  int iterations = 50;
  size_t mutants_per_iteration = 200;
  size_t survivors = 10;
  uint64_t rng_seed = 0;
  CoverageBackend sut;
  RunnerConfig runner;
  ApproxCovConfig approx;
  LlmSettings llm;
  std::vector<MutatorKind> enabled_mutators{std::begin(kAllMutators), std::end(kAllMutators)};
  Ablation ablation = Ablation::None;
  SelectionConfig selection;  // n_survivors and rng_seed are overridden per step
  PromptContext prompt;
  MutationOptions mutation;

  void validate() const;  // throws ConfigError
  // enabled_mutators minus whatever the ablation switches off.
  std::vector<MutatorKind> effective_mutators() const;
};

std::unique_ptr<LlmClient> make_llm_client(const LlmSettings& settings);

struct TrendRow {
  int iteration = 0;
  size_t survivor_union_size = 0;
  size_t mutants_valid = 0;
  size_t mutants_admitted = 0;
  size_t mutants_discarded_weak = 0;
  size_t mutants_invalid = 0;

  friend bool operator==(const TrendRow&, const TrendRow&) = default;
};

inline constexpr const char* kTrendHeader =
    "iteration,survivor_union_size,mutants_valid,mutants_admitted,"
    "mutants_discarded_weak,mutants_invalid";

struct EvolutionState {
  int iteration = 0;
  FuzzerSpace space;
  std::vector<NodeId> survivors;
  std::vector<TrendRow> trend;
  Rng rng;

  nlohmann::ordered_json to_json() const;
  static EvolutionState from_json(const nlohmann::ordered_json& j);
};

inline constexpr const char* kSeedId = "seed";

// Substitutes <FORMAT> and measures the seed. Throws SeedInitError when the
// seed does not run.
EvolutionState init(std::string_view seed_template, const EvolutionConfig& cfg);

struct StepReport {
  TrendRow row;
  ExploreReport explore;
  std::vector<std::string> invalid_details;  // failures that never reached explore
};

// One iteration: plan mutations, query the LLM, measure, explore, select.
StepReport step(EvolutionState& state, const EvolutionConfig& cfg, LlmClient& client);

// The back half of step() for an already planned batch. Exposed so that a
// scripted scenario can fix the requests.
StepReport advance(EvolutionState& state, const EvolutionConfig& cfg,
                   std::span<const PlannedMutation> plan, LlmClient& client);

struct RunOptions {
  std::filesystem::path out_dir;
  bool resume = false;
  // Canonical config document; stored in checkpoints and compared on resume.
  nlohmann::ordered_json config_json;
  std::function<void(const EvolutionState&, const StepReport&)> on_step;
};

// Hash of the config document with evolution.iterations removed.
std::string config_hash(const nlohmann::ordered_json& config_json);

// init + iterations steps with a checkpoint after each. With resume, picks
// up from the newest state_<k>.json in out_dir. Throws ConfigError on a
// config hash mismatch.
EvolutionState run(const EvolutionConfig& cfg, std::string_view seed_template,
                   LlmClient& client, const RunOptions& opts);

void write_trend_csv(const std::filesystem::path& path, std::span<const TrendRow> rows);
std::vector<TrendRow> read_trend_csv(const std::filesystem::path& path);  // throws runtime_error

// Writes fuzzers/<id>.py and fuzzers.json for the current survivors.
void export_survivors(const EvolutionState& state, const std::filesystem::path& out_dir);

// Loads the sources listed in a fuzzers.json manifest.
std::vector<SurvivorSource> load_exported(const std::filesystem::path& manifest);

struct ProduceOptions {
  size_t count = 0;         // total test cases; 0 selects duration mode
  double duration_s = 0.0;  // wall-clock budget in duration mode
  size_t batch = 100;       // cases per runner call in duration mode
  uint64_t seed = 0;
};

struct ProduceReport {
  size_t cases = 0;
  std::vector<NodeId> failed_fuzzers;
};

// Round-robins the fuzzers to fill corpus_dir with 000000.bin ... and a
// manifest.json recording fuzzer id, runner seed and index for every case.
ProduceReport produce(std::span<const SurvivorSource> fuzzers, const RunnerConfig& runner,
                      const ProduceOptions& opts, const std::filesystem::path& corpus_dir);

struct MinimizeReport {
  std::vector<size_t> kept;  // indices into the input, ascending
  CoverSet union_cover;
  size_t duplicates = 0;
  size_t measured = 0;
  bool complete = true;
  std::string error;  // set when the backend failed; the report is partial
};

// Greedy corpus distillation: every step keeps the case adding the most new
// units; ties go to the smaller case, then the lower index. Identical cases
// are measured once.
MinimizeReport minimize(std::span<const std::string> cases, const CoverageBackend& backend);

// Directory form: reads every regular file of in_dir (sorted by name) and
// copies the kept ones to out_dir.
MinimizeReport minimize_dir(const std::filesystem::path& in_dir,
                            const std::filesystem::path& out_dir,
                            const CoverageBackend& backend);

}  // namespace elfz

#endif  // ELFZ_EVOLUTION_HPP_
