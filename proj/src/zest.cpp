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

#include "elfz/zest.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <stdexcept>

namespace elfz {

ByteChoiceStream::ByteChoiceStream(Bytes bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty()) throw std::invalid_argument("byte choice stream must not be empty");
}

uint8_t ByteChoiceStream::next() {
  uint8_t b = bytes_[cursor_ % bytes_.size()];
  ++cursor_;
  return b;
}

void ZestConfig::validate() const {
  if (population < 1) throw ConfigError("zest.population must be >= 1");
  if (initial_length < 1) throw ConfigError("zest.initial_length must be >= 1");
  if (mutation.max_length < 1) throw ConfigError("zest.max_length must be >= 1");
  if (initial_length > mutation.max_length)
    throw ConfigError("zest.initial_length must not exceed zest.max_length");
  if (mutation.max_chunk < 1) throw ConfigError("zest.max_chunk must be >= 1");
  if (!(mutation.flip_rate >= 0 && mutation.flip_rate <= 1))
    throw ConfigError("zest.flip_rate must be in [0, 1]");
  if (!(mutation.insert_delete_rate >= 0 && mutation.insert_delete_rate <= 1))
    throw ConfigError("zest.insert_delete_rate must be in [0, 1]");
  try {
    runner.validate();
    backend.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::variant<std::string, ExecutionFailure> replay(std::string_view source,
                                                   std::span<const uint8_t> bytes,
                                                   const RunnerConfig& runner) {
  if (bytes.empty()) throw std::invalid_argument("replay needs a non-empty byte array");
  return run_candidate_bytes(source, runner, bytes);
}

Bytes mutate_bytes(std::span<const uint8_t> bytes, const ZestMutation& m, Rng& rng) {
  Bytes out(bytes.begin(), bytes.end());
  if (out.empty()) out.push_back(0);
  const double flip = m.flip_rate > 0 ? m.flip_rate : 1.0 / static_cast<double>(out.size());
  for (uint8_t& b : out)
    if (bernoulli(rng, flip)) b = static_cast<uint8_t>(uniform(rng, 0, 255));
  if (bernoulli(rng, m.insert_delete_rate) && out.size() < m.max_length) {
    const size_t len = uniform(rng, 1, std::min(m.max_chunk, m.max_length - out.size()));
    const size_t at = uniform(rng, 0, out.size());
    Bytes chunk(len);
    for (uint8_t& b : chunk) b = static_cast<uint8_t>(uniform(rng, 0, 255));
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), chunk.begin(), chunk.end());
  }
  if (bernoulli(rng, m.insert_delete_rate) && out.size() > 1) {
    const size_t len = uniform(rng, 1, std::min(m.max_chunk, out.size() - 1));
    const size_t at = uniform(rng, 0, out.size() - len);
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(at),
              out.begin() + static_cast<std::ptrdiff_t>(at + len));
  }
  if (out.size() > m.max_length) out.resize(m.max_length);
  return out;
}

ZestPopulation::ZestPopulation(std::vector<Bytes> members, std::vector<CoverSet> covers)
    : members_(std::move(members)), covers_(std::move(covers)) {
  if (members_.empty() || members_.size() != covers_.size())
    throw std::invalid_argument("population needs one cover per member and at least one member");
  for (const CoverSet& c : covers_) union_.unite(c);
}

bool ZestPopulation::looks_good(const CoverSet& cover) const {
  return !cover.is_subset_of(union_);
}

bool ZestPopulation::offer(Bytes mutant, CoverSet cover) {
  if (!looks_good(cover)) return false;
  union_.unite(cover);
  members_.erase(members_.begin());
  covers_.erase(covers_.begin());
  members_.push_back(std::move(mutant));
  covers_.push_back(std::move(cover));
  return true;
}

ZestResult zest_loop(std::string_view source, const ZestConfig& cfg, size_t budget) {
  cfg.validate();
  Rng rng(derive_seed(cfg.rng_seed, 0x7a657374ULL));
  Bytes initial(cfg.initial_length);
  for (uint8_t& b : initial) b = static_cast<uint8_t>(uniform(rng, 0, 255));

  auto measure = [&](const Bytes& bytes) -> std::optional<std::pair<std::string, CoverSet>> {
    auto out = replay(source, bytes, cfg.runner);
    if (const auto* f = std::get_if<ExecutionFailure>(&out)) {
      spdlog::debug("zest replay failed: {}", f->detail);
      return std::nullopt;
    }
    std::string tc = std::move(std::get<std::string>(out));
    auto cover = case_cover(tc, cfg.backend);
    if (const auto* err = std::get_if<std::string>(&cover)) {
      spdlog::debug("zest coverage failed: {}", *err);
      return std::nullopt;
    }
    return std::make_pair(std::move(tc), std::get<CoverSet>(std::move(cover)));
  };

  ZestResult res;
  auto first = measure(initial);
  if (!first) throw std::runtime_error("zest: the initial byte array does not replay");
  res.corpus.push_back(first->first);
  ZestPopulation pop(std::vector<Bytes>(cfg.population, initial),
                     std::vector<CoverSet>(cfg.population, first->second));

  for (size_t round = 0; round < budget; ++round) {
    Bytes mutant = mutate_bytes(pop.members().front(), cfg.mutation, rng);
    auto m = measure(mutant);
    if (!m) {
      ++res.failures;
    } else if (pop.offer(mutant, m->second)) {
      res.corpus.push_back(std::move(m->first));
    }
    res.covs.push_back(pop.recorded_union().size());
    res.population.push_back(pop.members().size());
  }
  res.survivors = pop.members();
  res.survivor_covers = pop.covers();
  return res;
}

}  // namespace elfz
