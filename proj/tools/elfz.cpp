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

// elfz: evolves generator programs for a system under test.
//
// Exit codes: 0 ok, 1 runtime error, 2 configuration error, 3 the seed
// fuzzer does not run. ELFZ_LOG sets the log level (trace, debug, info,
// warn, error, off).

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "elfz/config.hpp"
#include "elfz/evolution.hpp"
#include "elfz/report.hpp"
#include "elfz/subprocess.hpp"
#include "elfz/zest.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kRuntime = 1, kConfig = 2, kSeedInit = 3 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("elfz");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* lvl = std::getenv("ELFZ_LOG")) {
    auto level = spdlog::level::from_str(lvl);
    if (level == spdlog::level::off && std::string(lvl) != "off")
      spdlog::warn("ELFZ_LOG={} is not a log level; keeping info", lvl);
    else
      spdlog::set_level(level);
  }
}

struct EvolveArgs {
  std::string config, out_dir, ablation, llm_backend, endpoint;
  bool resume = false, log_llm = false;
  std::optional<unsigned> iterations, mutants, survivors;
  std::optional<uint64_t> seed;
};

int cmd_evolve(const EvolveArgs& a) {
  std::vector<elfz::ConfigOverride> ov;
  if (a.iterations) ov.emplace_back("evolution.iterations", *a.iterations);
  if (a.mutants) ov.emplace_back("evolution.mutants", *a.mutants);
  if (a.survivors) ov.emplace_back("evolution.survivors", *a.survivors);
  if (a.seed) ov.emplace_back("evolution.rng_seed", *a.seed);
  if (!a.ablation.empty()) ov.emplace_back("evolution.ablation", a.ablation);
  if (!a.llm_backend.empty()) ov.emplace_back("llm.backend", a.llm_backend);
  if (!a.endpoint.empty()) ov.emplace_back("llm.endpoint", a.endpoint);
  if (a.log_llm) ov.emplace_back("llm.log_bodies", true);
  elfz::EngineConfig ec = elfz::load_config(a.config, ov);

  std::string tmpl = ec.seed_template.empty() ? elfz::builtin_seed_template()
                                              : elfz::read_file(ec.seed_template);
  auto client = elfz::make_llm_client(ec.evolution.llm);
  elfz::RunOptions opts;
  opts.out_dir = a.out_dir;
  opts.resume = a.resume;
  opts.config_json = ec.document;
  elfz::EvolutionState st = elfz::run(ec.evolution, tmpl, *client, opts);
  const auto& last = st.trend.empty() ? elfz::TrendRow{} : st.trend.back();
  std::printf("iterations %d, survivors %zu, survivor union %zu, space %zu nodes\n", st.iteration,
              st.survivors.size(), last.survivor_union_size, st.space.size());
  return kOk;
}

fs::path manifest_path(const fs::path& p) {
  return fs::is_directory(p) ? p / "fuzzers.json" : p;
}

int cmd_produce(const std::string& config, const std::string& fuzzers, const std::string& out_dir,
                size_t count, double duration, uint64_t seed) {
  elfz::EngineConfig ec = elfz::load_config(config);
  if ((count == 0) == !(duration > 0))
    throw elfz::ConfigError("produce needs exactly one of --count and --duration");
  auto sources = elfz::load_exported(manifest_path(fuzzers));
  elfz::ProduceOptions po;
  po.count = count;
  po.duration_s = duration;
  po.seed = seed;
  auto rep = elfz::produce(sources, ec.evolution.runner, po, out_dir);
  std::printf("%zu test cases from %zu fuzzers (%zu failed)\n", rep.cases, sources.size(),
              rep.failed_fuzzers.size());
  return rep.cases > 0 ? kOk : kRuntime;
}

int cmd_minimize(const std::string& config, const std::string& corpus, const std::string& out_dir) {
  elfz::EngineConfig ec = elfz::load_config(config);
  auto rep = elfz::minimize_dir(corpus, out_dir, ec.evolution.sut);
  if (!rep.complete) {
    std::fprintf(stderr, "minimize aborted after %zu measured cases: %s\n", rep.measured,
                 rep.error.c_str());
    return kRuntime;
  }
  std::printf("kept %zu test cases (%zu duplicates), union %zu units\n", rep.kept.size(),
              rep.duplicates, rep.union_cover.size());
  return kOk;
}

int cmd_zest(const std::string& config, const std::string& fuzzer, const std::string& out_dir,
             std::optional<unsigned> population, size_t budget, std::optional<uint64_t> seed) {
  std::vector<elfz::ConfigOverride> ov;
  if (population) ov.emplace_back("zest.population", *population);
  if (seed) ov.emplace_back("zest.rng_seed", *seed);
  elfz::EngineConfig ec = elfz::load_config(config, ov);
  const std::string source = elfz::read_file(fuzzer);
  elfz::ZestResult res = elfz::zest_loop(source, ec.zest, budget);
  fs::create_directories(out_dir);
  ordered_json manifest = ordered_json::array();
  for (size_t i = 0; i < res.corpus.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.bin", i);
    elfz::write_file(fs::path(out_dir) / name, res.corpus[i]);
    manifest.push_back({{"file", name}, {"fuzzer", fs::path(fuzzer).filename().string()}, {"index", i}});
  }
  ordered_json doc;
  doc["cases"] = std::move(manifest);
  doc["covs"] = res.covs;
  elfz::write_file(fs::path(out_dir) / "manifest.json", doc.dump(1) + "\n");
  std::printf("%zu rounds, %zu admitted, final union %zu, %zu failed replays\n", budget,
              res.corpus.size() - 1, res.covs.empty() ? 0 : res.covs.back(), res.failures);
  return kOk;
}

int cmd_report(const std::string& run_dir, bool plot, const std::string& plot_path) {
  const fs::path trend = fs::path(run_dir) / "trend.csv";
  if (!fs::exists(trend)) throw std::runtime_error("no trend.csv in " + run_dir);
  auto rows = elfz::read_trend_csv(trend);
  if (rows.empty()) throw std::runtime_error(trend.string() + " has no iterations");
  std::fputs(elfz::format_trend_table(rows).c_str(), stdout);
  std::printf("survivor union %s\n", elfz::is_non_decreasing(rows) ? "non-decreasing" : "decreases at least once");
  if (plot) {
    const fs::path out = plot_path.empty() ? fs::path(run_dir) / "trend.svg" : fs::path(plot_path);
    elfz::write_file(out, elfz::trend_svg(rows));
    std::printf("plot written to %s\n", out.string().c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"elfz: evolves input generators by LLM mutation over a fuzzer space"};
  app.require_subcommand(1);

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "run the evolution loop");
  evolve->add_option("-c,--config", ev.config, "engine config (JSON)")->required()->check(CLI::ExistingFile);
  evolve->add_option("-o,--out-dir", ev.out_dir, "run directory")->required();
  evolve->add_flag("--resume", ev.resume, "continue from the newest checkpoint in the run directory");
  evolve->add_option("--iterations", ev.iterations, "overrides evolution.iterations");
  evolve->add_option("--mutants", ev.mutants, "overrides evolution.mutants");
  evolve->add_option("--survivors", ev.survivors, "overrides evolution.survivors");
  evolve->add_option("--seed", ev.seed, "overrides evolution.rng_seed");
  evolve->add_option("--ablation", ev.ablation, "overrides evolution.ablation");
  evolve->add_option("--llm-backend", ev.llm_backend, "overrides llm.backend (http or mock)");
  evolve->add_option("--endpoint", ev.endpoint, "overrides llm.endpoint");
  evolve->add_flag("--log-llm", ev.log_llm, "log every request and response body");

  std::string p_config, p_fuzzers, p_out;
  size_t p_count = 0;
  double p_duration = 0;
  uint64_t p_seed = 0;
  auto* produce = app.add_subcommand("produce", "generate a corpus with exported fuzzers");
  produce->add_option("-c,--config", p_config)->required()->check(CLI::ExistingFile);
  produce->add_option("-f,--fuzzers", p_fuzzers, "fuzzers.json or the run directory")->required();
  produce->add_option("-o,--out-dir", p_out, "corpus directory")->required();
  produce->add_option("--count", p_count, "total number of test cases");
  produce->add_option("--duration", p_duration, "seconds of generation");
  produce->add_option("--seed", p_seed);

  std::string m_config, m_corpus, m_out;
  auto* minimize = app.add_subcommand("minimize", "distill a corpus to the cases needed for its coverage");
  minimize->add_option("-c,--config", m_config)->required()->check(CLI::ExistingFile);
  minimize->add_option("-i,--corpus", m_corpus, "input corpus directory")->required();
  minimize->add_option("-o,--out-dir", m_out, "output directory")->required();

  std::string z_config, z_fuzzer, z_out;
  std::optional<unsigned> z_population;
  size_t z_budget = 500;
  std::optional<uint64_t> z_seed;
  auto* zest = app.add_subcommand("zest", "evolve byte arrays for one fuzzer");
  zest->add_option("-c,--config", z_config)->required()->check(CLI::ExistingFile);
  zest->add_option("-f,--fuzzer", z_fuzzer, "fuzzer source")->required()->check(CLI::ExistingFile);
  zest->add_option("-o,--out-dir", z_out, "corpus directory")->required();
  zest->add_option("--population", z_population, "overrides zest.population");
  zest->add_option("--budget", z_budget, "rounds")->capture_default_str();
  zest->add_option("--seed", z_seed, "overrides zest.rng_seed");

  std::string r_dir, r_plot_path;
  bool r_plot = false;
  auto* report = app.add_subcommand("report", "print the trend of a run");
  report->add_option("run_dir", r_dir, "run directory")->required();
  report->add_flag("--plot", r_plot, "also write an SVG chart");
  report->add_option("--plot-path", r_plot_path, "chart path (default <run_dir>/trend.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*evolve) return cmd_evolve(ev);
    if (*produce) return cmd_produce(p_config, p_fuzzers, p_out, p_count, p_duration, p_seed);
    if (*minimize) return cmd_minimize(m_config, m_corpus, m_out);
    if (*zest) return cmd_zest(z_config, z_fuzzer, z_out, z_population, z_budget, z_seed);
    if (*report) return cmd_report(r_dir, r_plot || !r_plot_path.empty(), r_plot_path);
  } catch (const elfz::ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return kConfig;
  } catch (const elfz::SeedInitError& e) {
    spdlog::error("{}", e.what());
    return kSeedInit;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  }
  return kRuntime;
}
