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

#include "elfz/evolution.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "elfz/subprocess.hpp"

namespace elfz {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string replace_all(std::string_view text, std::string_view from, std::string_view to) {
  std::string out;
  size_t pos = 0;
  for (size_t hit; (hit = text.find(from, pos)) != std::string_view::npos; pos = hit + from.size()) {
    out.append(text.substr(pos, hit - pos));
    out.append(to);
  }
  out.append(text.substr(pos));
  return out;
}

std::string padded(const char* fmt, long long v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

uint64_t measurement_seed(const EvolutionConfig& cfg, const NodeId& id) {
  return derive_seed(cfg.rng_seed, fnv1a(id));
}

std::string describe(const ExecutionFailure& f) {
  return std::string(to_string(f.kind)) + (f.detail.empty() ? "" : ": " + f.detail);
}

void write_atomic(const fs::path& path, std::string_view data) {
  fs::path tmp = path;
  tmp += ".tmp";
  write_file(tmp, data);
  fs::rename(tmp, path);
}

std::vector<Candidate> candidates_of(const FuzzerSpace& space, std::span<const NodeId> ids) {
  std::vector<Candidate> pool;
  pool.reserve(ids.size());
  for (const NodeId& id : ids) pool.push_back({id, space.at(id).cover});
  return pool;
}

std::vector<NodeId> top_k_by_size(std::vector<Candidate> pool, size_t k) {
  std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    if (a.cover.size() != b.cover.size()) return a.cover.size() > b.cover.size();
    return a.id < b.id;
  });
  std::vector<NodeId> out;
  for (size_t i = 0; i < k && i < pool.size(); ++i) out.push_back(pool[i].id);
  std::sort(out.begin(), out.end());
  return out;
}

ordered_json strip_iterations(ordered_json j) {
  if (j.is_object() && j.contains("evolution") && j["evolution"].is_object())
    j["evolution"].erase("iterations");
  return j;
}

}  // namespace

const char* to_string(Ablation a) {
  switch (a) {
    case Ablation::None: return "none";
    case Ablation::NoFS: return "noFS";
    case Ablation::NoSP: return "noSP";
    case Ablation::NoCP: return "noCP";
    case Ablation::NoIN: return "noIN";
  }
  return "?";
}

std::optional<Ablation> parse_ablation(std::string_view text) {
  for (Ablation a : {Ablation::None, Ablation::NoFS, Ablation::NoSP, Ablation::NoCP, Ablation::NoIN})
    if (text == to_string(a)) return a;
  return std::nullopt;
}

std::vector<MutatorKind> EvolutionConfig::effective_mutators() const {
  std::vector<MutatorKind> out;
  for (MutatorKind k : enabled_mutators) {
    if (ablation == Ablation::NoSP && k == MutatorKind::Splicing) continue;
    if (ablation == Ablation::NoCP && k == MutatorKind::Completion) continue;
    if (ablation == Ablation::NoIN && k == MutatorKind::Infilling) continue;
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

void EvolutionConfig::validate() const {
  if (iterations < 1) throw ConfigError("evolution.iterations must be >= 1");
  if (mutants_per_iteration < 1) throw ConfigError("evolution.mutants must be >= 1");
  if (survivors < 1) throw ConfigError("evolution.survivors must be >= 1");
  if (survivors > mutants_per_iteration)
    throw ConfigError("evolution.survivors must not exceed evolution.mutants");
  if (effective_mutators().empty())
    throw ConfigError("evolution.enabled_mutators: no mutator left after ablation " +
                      std::string(to_string(ablation)));
  if (approx.inputs_per_measurement < 1)
    throw ConfigError("evolution.inputs_per_measurement must be >= 1");
  if (selection.restarts < 1) throw ConfigError("selection.restarts must be >= 1");
  try {
    runner.validate();
    sut.validate();
    llm.http.validate();
    if (llm.backend == LlmSettings::Backend::Mock) llm.mock.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::unique_ptr<LlmClient> make_llm_client(const LlmSettings& settings) {
  std::shared_ptr<LlmBackend> backend;
  if (settings.backend == LlmSettings::Backend::Mock)
    backend = std::make_shared<MockLlmBackend>(settings.mock);
  else
    backend = std::make_shared<HttpLlmBackend>(settings.http);
  return std::make_unique<LlmClient>(settings.http, std::move(backend));
}

// ---------------------------------------------------------------- state

ordered_json EvolutionState::to_json() const {
  ordered_json j;
  j["format"] = "elfz-state";
  j["version"] = 1;
  j["iteration"] = iteration;
  j["survivors"] = survivors;
  j["trend"] = ordered_json::array();
  for (const TrendRow& r : trend) {
    j["trend"].push_back({{"iteration", r.iteration},
                          {"survivor_union_size", r.survivor_union_size},
                          {"mutants_valid", r.mutants_valid},
                          {"mutants_admitted", r.mutants_admitted},
                          {"mutants_discarded_weak", r.mutants_discarded_weak},
                          {"mutants_invalid", r.mutants_invalid}});
  }
  j["rng"] = serialize_rng(rng);
  j["space"] = space.to_json();
  return j;
}

EvolutionState EvolutionState::from_json(const ordered_json& j) {
  if (j.value("format", "") != "elfz-state" || j.value("version", 0) != 1)
    throw std::runtime_error("not an elfz state checkpoint (or unsupported version)");
  EvolutionState s;
  s.iteration = j.at("iteration").get<int>();
  s.survivors = j.at("survivors").get<std::vector<NodeId>>();
  for (const auto& r : j.at("trend")) {
    s.trend.push_back({r.at("iteration").get<int>(), r.at("survivor_union_size").get<size_t>(),
                       r.at("mutants_valid").get<size_t>(), r.at("mutants_admitted").get<size_t>(),
                       r.at("mutants_discarded_weak").get<size_t>(),
                       r.at("mutants_invalid").get<size_t>()});
  }
  s.rng = deserialize_rng(j.at("rng").get<std::string>());
  s.space = FuzzerSpace::from_json(j.at("space"));
  for (const NodeId& id : s.survivors)
    if (!s.space.contains(id)) throw std::runtime_error("checkpoint survivor not in space: " + id);
  if (s.trend.size() != static_cast<size_t>(s.iteration))
    throw std::runtime_error("checkpoint trend length does not match its iteration");
  return s;
}

// ---------------------------------------------------------------- init/step

EvolutionState init(std::string_view seed_template, const EvolutionConfig& cfg) {
  const std::string source = replace_all(seed_template, "<FORMAT>", cfg.prompt.format);
  CoverOutcome outcome =
      approx_cov(source, cfg.runner, cfg.sut, cfg.approx, measurement_seed(cfg, kSeedId));
  if (const auto* f = std::get_if<ExecutionFailure>(&outcome))
    throw SeedInitError("seed fuzzer failed to run (" + describe(*f) + ")");
  EvolutionState st;
  st.rng.seed(derive_seed(cfg.rng_seed, 0x65766f6cULL));
  st.space.insert({kSeedId, source, Provenance::seed(), std::get<CoverSet>(outcome), 0});
  st.survivors = {kSeedId};
  spdlog::info("seed cover: {}", std::get<CoverSet>(outcome).to_string());
  return st;
}

StepReport step(EvolutionState& state, const EvolutionConfig& cfg, LlmClient& client) {
  std::vector<SurvivorSource> parents;
  for (const NodeId& id : state.survivors) parents.push_back({id, state.space.at(id).source});
  const std::vector<MutatorKind> kinds = cfg.effective_mutators();
  const std::string prefix = padded("i%04lld-", state.iteration + 1);
  std::vector<PlannedMutation> plan = plan_mutations(
      parents, kinds, cfg.mutants_per_iteration, cfg.prompt, state.rng, cfg.mutation, prefix);
  return advance(state, cfg, plan, client);
}

StepReport advance(EvolutionState& state, const EvolutionConfig& cfg,
                   std::span<const PlannedMutation> plan, LlmClient& client) {
  StepReport report;
  const int iteration = state.iteration + 1;

  std::vector<MutationRequest> requests;
  for (const PlannedMutation& pm : plan) {
    if (pm.request)
      requests.push_back(*pm.request);
    else
      report.invalid_details.push_back("unplannable " + std::string(to_string(pm.kind)) + ": " + pm.error);
  }

  const uint64_t ordinal_base = static_cast<uint64_t>(iteration) << 20;
  std::vector<LlmClient::Answer> answers = client.run(requests, ordinal_base);

  std::vector<Mutant> mutants;
  for (size_t i = 0; i < requests.size(); ++i) {
    const MutationRequest& req = requests[i];
    if (const auto* err = std::get_if<LlmError>(&answers[i])) {
      report.invalid_details.push_back(req.id + ": llm: " + err->what());
      continue;
    }
    std::optional<std::string> source = assemble(std::get<std::string>(answers[i]), req);
    if (!source) {
      report.invalid_details.push_back(req.id + ": empty llm answer");
      continue;
    }
    Mutant m;
    m.id = req.id;
    m.source = std::move(*source);
    m.provenance = {req.kind, req.parents};
    mutants.push_back(std::move(m));
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(mutants.size()); ++i) {
    try {
      Mutant& m = mutants[i];
      CoverOutcome out = approx_cov(m.source, cfg.runner, cfg.sut, cfg.approx, measurement_seed(cfg, m.id));
      if (auto* c = std::get_if<CoverSet>(&out))
        m.outcome = std::move(*c);
      else
        m.outcome = std::get<ExecutionFailure>(out);
    } catch (...) {
#pragma omp critical(elfz_step_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  if (cfg.ablation == Ablation::NoFS) {
    for (const Mutant& m : mutants) {
      if (const auto* f = std::get_if<ExecutionFailure>(&m.outcome)) {
        report.explore.discarded.push_back({m.id, m.source, DiscardReason::Invalid, describe(*f)});
        continue;
      }
      if (state.space.insert({m.id, m.source, m.provenance, std::get<CoverSet>(m.outcome), iteration}))
        report.explore.admitted.push_back(m.id);
      else
        report.explore.discarded.push_back({m.id, m.source, DiscardReason::WeakerOrEquivalent, "equal cover"});
    }
  } else {
    report.explore = explore(state.space, mutants, iteration);
  }

  TrendRow& row = report.row;
  row.iteration = iteration;
  row.mutants_admitted = report.explore.admitted.size();
  row.mutants_discarded_weak = report.explore.count(DiscardReason::WeakerOrEquivalent);
  row.mutants_valid = row.mutants_admitted + row.mutants_discarded_weak;
  row.mutants_invalid = plan.size() - row.mutants_valid;

  std::vector<NodeId> pool_ids = state.survivors;
  pool_ids.insert(pool_ids.end(), report.explore.admitted.begin(), report.explore.admitted.end());
  std::sort(pool_ids.begin(), pool_ids.end());
  pool_ids.erase(std::unique(pool_ids.begin(), pool_ids.end()), pool_ids.end());

  if (row.mutants_admitted > 0) {
    if (pool_ids.size() <= cfg.survivors) {
      if (pool_ids.size() < cfg.survivors)
        spdlog::warn("iteration {}: only {} candidates for {} survivor slots", iteration,
                     pool_ids.size(), cfg.survivors);
      state.survivors = pool_ids;
    } else if (cfg.ablation == Ablation::NoFS) {
      state.survivors = top_k_by_size(candidates_of(state.space, pool_ids), cfg.survivors);
    } else {
      SelectionConfig sc = cfg.selection;
      sc.n_survivors = cfg.survivors;
      sc.rng_seed = derive_seed(cfg.rng_seed, 0x73656c00ULL + static_cast<uint64_t>(iteration));
      std::vector<Candidate> pool = candidates_of(state.space, pool_ids);
      state.survivors = approx_max(pool, sc, state.survivors).selected;
    }
  }

  row.survivor_union_size = union_cover(state.space, state.survivors).size();
  state.iteration = iteration;
  state.trend.push_back(row);
  spdlog::info("iteration {}: union {} valid {} admitted {} weak {} invalid {}", row.iteration,
               row.survivor_union_size, row.mutants_valid, row.mutants_admitted,
               row.mutants_discarded_weak, row.mutants_invalid);
  for (const std::string& d : report.invalid_details) spdlog::debug("invalid mutant {}", d);
  return report;
}

// ---------------------------------------------------------------- files

std::string config_hash(const ordered_json& config_json) {
  return to_hex(fnv1a(strip_iterations(config_json).dump()));
}

void write_trend_csv(const fs::path& path, std::span<const TrendRow> rows) {
  std::ostringstream os;
  os << kTrendHeader << '\n';
  for (const TrendRow& r : rows) {
    os << r.iteration << ',' << r.survivor_union_size << ',' << r.mutants_valid << ','
       << r.mutants_admitted << ',' << r.mutants_discarded_weak << ',' << r.mutants_invalid << '\n';
  }
  write_atomic(path, os.str());
}

std::vector<TrendRow> read_trend_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTrendHeader)
    throw std::runtime_error(path.string() + ": missing or unexpected header");
  std::vector<TrendRow> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    TrendRow r;
    char tail = 0;
    long long v[6];
    if (std::sscanf(line.c_str(), "%lld,%lld,%lld,%lld,%lld,%lld%c", &v[0], &v[1], &v[2], &v[3],
                    &v[4], &v[5], &tail) != 6 ||
        std::any_of(std::begin(v), std::end(v), [](long long x) { return x < 0; }))
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    r.iteration = static_cast<int>(v[0]);
    r.survivor_union_size = v[1];
    r.mutants_valid = v[2];
    r.mutants_admitted = v[3];
    r.mutants_discarded_weak = v[4];
    r.mutants_invalid = v[5];
    rows.push_back(r);
  }
  return rows;
}

void export_survivors(const EvolutionState& state, const fs::path& out_dir) {
  const fs::path dir = out_dir / "fuzzers";
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".py") fs::remove(entry.path());
  ordered_json j;
  j["version"] = 1;
  j["iteration"] = state.iteration;
  CoverSet u = union_cover(state.space, state.survivors);
  j["survivor_union"] = std::vector<CoverageUnit>(u.units().begin(), u.units().end());
  j["fuzzers"] = ordered_json::array();
  for (const NodeId& id : state.survivors) {
    const FuzzerNode& n = state.space.at(id);
    const std::string file = "fuzzers/" + id + ".py";
    write_file(out_dir / file, n.source);
    j["fuzzers"].push_back({{"id", id},
                            {"file", file},
                            {"cover_size", n.cover.size()},
                            {"cover", std::vector<CoverageUnit>(n.cover.units().begin(), n.cover.units().end())},
                            {"provenance", provenance_to_json(n.provenance)},
                            {"iteration_born", n.iteration_born}});
  }
  write_atomic(out_dir / "fuzzers.json", j.dump(2) + "\n");
}

std::vector<SurvivorSource> load_exported(const fs::path& manifest) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(manifest));
  } catch (const std::exception& e) {
    throw std::runtime_error(manifest.string() + ": " + e.what());
  }
  std::vector<SurvivorSource> out;
  for (const auto& f : j.at("fuzzers"))
    out.push_back({f.at("id").get<std::string>(),
                   read_file(manifest.parent_path() / f.at("file").get<std::string>())});
  if (out.empty()) throw std::runtime_error(manifest.string() + " lists no fuzzers");
  return out;
}

namespace {

std::optional<fs::path> latest_checkpoint(const fs::path& dir, int* iteration) {
  static const std::regex name(R"(state_(\d+)\.json)");
  std::optional<fs::path> best;
  int best_k = -1;
  if (!fs::exists(dir)) return std::nullopt;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string fname = entry.path().filename().string();
    if (!std::regex_match(fname, m, name)) continue;
    int k = std::stoi(m[1].str());
    if (k > best_k) {
      best_k = k;
      best = entry.path();
    }
  }
  *iteration = best_k;
  return best;
}

void checkpoint(const EvolutionState& st, const RunOptions& opts) {
  ordered_json j = st.to_json();
  if (!opts.config_json.is_null()) {
    j["config_hash"] = config_hash(opts.config_json);
    j["config"] = opts.config_json;
  }
  write_atomic(opts.out_dir / ("state_" + std::to_string(st.iteration) + ".json"), j.dump(1) + "\n");
  write_trend_csv(opts.out_dir / "trend.csv", st.trend);
  export_survivors(st, opts.out_dir);
}

}  // namespace

EvolutionState run(const EvolutionConfig& cfg, std::string_view seed_template, LlmClient& client,
                   const RunOptions& opts) {
  cfg.validate();
  fs::create_directories(opts.out_dir);
  EvolutionState st;
  if (opts.resume) {
    int k = -1;
    std::optional<fs::path> path = latest_checkpoint(opts.out_dir, &k);
    if (!path) throw std::runtime_error("no checkpoint to resume in " + opts.out_dir.string());
    ordered_json j = ordered_json::parse(read_file(*path));
    if (!opts.config_json.is_null()) {
      const std::string want = config_hash(opts.config_json);
      const std::string have = j.value("config_hash", "");
      if (want != have) {
        ordered_json stored = j.contains("config") ? strip_iterations(j["config"]) : ordered_json();
        ordered_json patch = ordered_json::diff(stored, strip_iterations(opts.config_json));
        throw ConfigError("config hash mismatch: checkpoint " + have + ", current " + want +
                          "; diff (checkpoint -> current): " + patch.dump());
      }
    }
    st = EvolutionState::from_json(j);
    spdlog::info("resuming from {} (iteration {})", path->string(), st.iteration);
  } else {
    st = init(seed_template, cfg);
    checkpoint(st, opts);
  }
  while (st.iteration < cfg.iterations) {
    StepReport rep = step(st, cfg, client);
    checkpoint(st, opts);
    if (opts.on_step) opts.on_step(st, rep);
  }
  return st;
}

// ---------------------------------------------------------------- produce

ProduceReport produce(std::span<const SurvivorSource> fuzzers, const RunnerConfig& runner,
                      const ProduceOptions& opts, const fs::path& corpus_dir) {
  if (fuzzers.empty()) throw std::invalid_argument("produce needs at least one fuzzer");
  if (opts.count == 0 && !(opts.duration_s > 0))
    throw std::invalid_argument("produce needs a count or a duration");
  fs::create_directories(corpus_dir);
  ProduceReport rep;
  ordered_json manifest = ordered_json::array();
  auto emit = [&](const SurvivorSource& f, uint64_t seed, size_t index, const std::string& data) {
    const std::string file = padded("%06lld.bin", static_cast<long long>(rep.cases));
    write_file(corpus_dir / file, data);
    manifest.push_back({{"file", file}, {"fuzzer", f.id}, {"seed", seed}, {"index", index}});
    ++rep.cases;
  };
  const size_t k = fuzzers.size();

  if (opts.count > 0) {
    std::vector<TestCases> cases(k);
    std::vector<uint64_t> seeds(k);
    for (size_t j = 0; j < k; ++j) {
      const size_t share = opts.count / k + (j < opts.count % k ? 1 : 0);
      if (share == 0) continue;
      seeds[j] = derive_seed(opts.seed, j);
      RunOutcome out = run_candidate(fuzzers[j].source, runner, seeds[j], share);
      if (const auto* f = std::get_if<ExecutionFailure>(&out)) {
        spdlog::warn("fuzzer {} failed: {}", fuzzers[j].id, describe(*f));
        rep.failed_fuzzers.push_back(fuzzers[j].id);
        continue;
      }
      cases[j] = std::move(std::get<TestCases>(out));
    }
    for (size_t r = 0;; ++r) {
      bool any = false;
      for (size_t j = 0; j < k; ++j) {
        if (r >= cases[j].size()) continue;
        emit(fuzzers[j], seeds[j], r, cases[j][r]);
        any = true;
      }
      if (!any) break;
    }
  } else {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                             std::chrono::duration<double>(opts.duration_s));
    std::vector<bool> alive(k, true);
    size_t live = k;
    for (uint64_t round = 0; live > 0 && clock::now() < deadline; ++round) {
      for (size_t j = 0; j < k && clock::now() < deadline; ++j) {
        if (!alive[j]) continue;
        const uint64_t seed = derive_seed(opts.seed, round * k + j);
        RunOutcome out = run_candidate(fuzzers[j].source, runner, seed, std::max<size_t>(opts.batch, 1));
        if (const auto* f = std::get_if<ExecutionFailure>(&out)) {
          spdlog::warn("fuzzer {} failed: {}", fuzzers[j].id, describe(*f));
          rep.failed_fuzzers.push_back(fuzzers[j].id);
          alive[j] = false;
          --live;
          continue;
        }
        const TestCases& tc = std::get<TestCases>(out);
        for (size_t i = 0; i < tc.size(); ++i) emit(fuzzers[j], seed, i, tc[i]);
      }
    }
  }
  ordered_json doc;
  doc["cases"] = std::move(manifest);
  write_file(corpus_dir / "manifest.json", doc.dump(1) + "\n");
  return rep;
}

// ---------------------------------------------------------------- minimize

MinimizeReport minimize(std::span<const std::string> cases, const CoverageBackend& backend) {
  if (cases.empty()) throw std::invalid_argument("minimize needs a non-empty corpus");
  MinimizeReport rep;
  std::vector<size_t> unique;
  std::unordered_map<std::string_view, size_t> seen;
  for (size_t i = 0; i < cases.size(); ++i) {
    if (seen.emplace(cases[i], i).second)
      unique.push_back(i);
    else
      ++rep.duplicates;
  }

  std::vector<std::variant<CoverSet, std::string>> covers(unique.size());
#pragma omp parallel for schedule(dynamic) if (backend.kind == CoverageBackend::Kind::External)
  for (std::ptrdiff_t u = 0; u < static_cast<std::ptrdiff_t>(unique.size()); ++u)
    covers[u] = case_cover(cases[unique[u]], backend);

  for (size_t u = 0; u < unique.size(); ++u) {
    if (const auto* err = std::get_if<std::string>(&covers[u])) {
      rep.complete = false;
      rep.error = "case " + std::to_string(unique[u]) + ": " + *err;
      rep.measured = u;
      return rep;
    }
    rep.union_cover.unite(std::get<CoverSet>(covers[u]));
  }
  rep.measured = unique.size();

  CoverSet covered;
  std::vector<bool> taken(unique.size(), false);
  while (covered.size() < rep.union_cover.size()) {
    size_t best = unique.size();
    size_t best_gain = 0;
    for (size_t u = 0; u < unique.size(); ++u) {
      if (taken[u]) continue;
      const size_t gain = std::get<CoverSet>(covers[u]).minus(covered).size();
      if (gain == 0) continue;
      if (best == unique.size() || gain > best_gain ||
          (gain == best_gain && cases[unique[u]].size() < cases[unique[best]].size())) {
        best = u;
        best_gain = gain;
      }
    }
    taken[best] = true;
    covered.unite(std::get<CoverSet>(covers[best]));
    rep.kept.push_back(unique[best]);
  }
  if (rep.kept.empty()) {
    // Nothing is covered at all; keep one (the smallest) case.
    size_t best = 0;
    for (size_t u = 1; u < unique.size(); ++u)
      if (cases[unique[u]].size() < cases[unique[best]].size()) best = u;
    rep.kept.push_back(unique[best]);
  }
  std::sort(rep.kept.begin(), rep.kept.end());
  return rep;
}

MinimizeReport minimize_dir(const fs::path& in_dir, const fs::path& out_dir,
                            const CoverageBackend& backend) {
  if (!fs::is_directory(in_dir)) throw std::runtime_error(in_dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in_dir))
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error(in_dir.string() + " holds no test cases");
  std::vector<std::string> cases;
  for (const fs::path& f : files) cases.push_back(read_file(f));
  MinimizeReport rep = minimize(cases, backend);
  if (!rep.complete) return rep;
  fs::create_directories(out_dir);
  for (size_t i : rep.kept) fs::copy_file(files[i], out_dir / files[i].filename(), fs::copy_options::overwrite_existing);
  return rep;
}

}  // namespace elfz
