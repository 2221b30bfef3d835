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

#ifndef ELFZ_SELECTION_HPP_
#define ELFZ_SELECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "elfz/cover_set.hpp"
#include "elfz/rng.hpp"
#include "elfz/types.hpp"

namespace elfz {

struct SelectionConfig {
  size_t n_survivors = 10;
  size_t restarts = 10;
  uint64_t rng_seed = 0;
};

struct Candidate {
  NodeId id;
  CoverSet cover;
};

struct SelectionResult {
  std::vector<NodeId> selected;  // ascending id order
  size_t union_size = 0;
};

// Work counters: one evaluation is one |union| computation for a tentative
// substitution; one pass is one sweep over all (member, non-member) pairs.
struct SelectionStats {
  uint64_t evaluations = 0;
  uint64_t passes = 0;
  uint64_t attempts = 0;
};

// One greedy local search from a uniformly random N-subset. Members and
// non-members are scanned in ascending id order and the first strictly
// improving substitution is applied, until a full pass changes nothing.
// Throws std::invalid_argument if the pool is smaller than n or ids repeat.
std::vector<NodeId> greedy_max(std::span<const Candidate> pool, size_t n,
                               Rng& rng, SelectionStats* stats = nullptr);

// Best of cfg.restarts greedy attempts; attempt i draws its start from the
// stream derive_seed(cfg.rng_seed, i), so the result does not depend on how
// attempts are scheduled. Ties go to the earliest attempt. A non-empty
// warm_start adds one extra attempt (index cfg.restarts) that starts from
// those ids, topped up with random members when shorter than n.
SelectionResult approx_max(std::span<const Candidate> pool,
                           const SelectionConfig& cfg,
                           std::span<const NodeId> warm_start = {},
                           SelectionStats* stats = nullptr);

// Serial reference of approx_max; must agree with it bit for bit.
SelectionResult approx_max_serial(std::span<const Candidate> pool,
                                  const SelectionConfig& cfg,
                                  std::span<const NodeId> warm_start = {},
                                  SelectionStats* stats = nullptr);

inline constexpr uint64_t kBruteForceLimit = 1'000'000;

// Exact argmax of |union| over all n-subsets, ties broken by the
// lexicographically smallest id sequence. Throws std::length_error when
// C(M, n) exceeds kBruteForceLimit.
SelectionResult brute_force_max(std::span<const Candidate> pool, size_t n);
SelectionResult brute_force_max_serial(std::span<const Candidate> pool, size_t n);

// C(m, k), saturating at UINT64_MAX.
uint64_t binomial(uint64_t m, uint64_t k);

}  // namespace elfz

#endif  // ELFZ_SELECTION_HPP_
