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

#ifndef ELFZ_ZEST_HPP_
#define ELFZ_ZEST_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "elfz/cover_set.hpp"
#include "elfz/harness.hpp"
#include "elfz/rng.hpp"
#include "elfz/types.hpp"

namespace elfz {

using Bytes = std::vector<uint8_t>;

// The choice source of a parameterized generator: reads wrap around.
class ByteChoiceStream {
 public:
  explicit ByteChoiceStream(Bytes bytes);  // throws std::invalid_argument if empty

  uint8_t next();
  size_t cursor() const { return cursor_; }
  std::span<const uint8_t> bytes() const { return bytes_; }

 private:
  Bytes bytes_;
  size_t cursor_ = 0;
};

struct ZestMutation {
  double flip_rate = 0.0;           // per byte; 0 means 1/len
  double insert_delete_rate = 0.1;  // probability of each of insert and delete
  size_t max_chunk = 4;
  size_t max_length = 4096;
};

struct ZestConfig {
  size_t population = 3;
  size_t initial_length = 64;
  ZestMutation mutation;
  CoverageBackend backend;
  RunnerConfig runner;
  uint64_t rng_seed = 0;

  void validate() const;  // throws ConfigError
};

// One test case from (source, bytes); the runner is invoked in byte mode.
std::variant<std::string, ExecutionFailure> replay(std::string_view source,
                                                   std::span<const uint8_t> bytes,
                                                   const RunnerConfig& runner);

// Flips each byte with the flip rate, then possibly inserts and deletes a
// chunk of up to max_chunk bytes. The length stays within [1, max_length].
Bytes mutate_bytes(std::span<const uint8_t> bytes, const ZestMutation& m, Rng& rng);

// FIFO population of byte arrays. A mutant is admitted when its cover has a
// unit outside the union recorded so far; it then evicts the oldest member.
class ZestPopulation {
 public:
  ZestPopulation(std::vector<Bytes> members, std::vector<CoverSet> covers);

  bool looks_good(const CoverSet& cover) const;
  bool offer(Bytes mutant, CoverSet cover);

  const std::vector<Bytes>& members() const { return members_; }
  const std::vector<CoverSet>& covers() const { return covers_; }
  const CoverSet& recorded_union() const { return union_; }

 private:
  std::vector<Bytes> members_;
  std::vector<CoverSet> covers_;
  CoverSet union_;
};

struct ZestResult {
  std::vector<Bytes> survivors;
  std::vector<CoverSet> survivor_covers;
  std::vector<size_t> covs;       // recorded union size after each round
  std::vector<size_t> population;  // population size after each round
  std::vector<std::string> corpus;  // initial case, then every admitted case
  size_t failures = 0;
};

// Runs `budget` mutate-replay-measure rounds, always mutating the oldest
// survivor.
ZestResult zest_loop(std::string_view source, const ZestConfig& cfg, size_t budget);

}  // namespace elfz

#endif  // ELFZ_ZEST_HPP_
