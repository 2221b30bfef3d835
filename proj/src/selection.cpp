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

#include "elfz/selection.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace elfz {
namespace {

using Words = std::vector<uint64_t>;

// Pool re-encoded as dense bitsets, sorted by id.
struct BitPool {
  std::vector<NodeId> ids;
  std::vector<Words> bits;
  size_t words = 0;

  BitPool(std::span<const Candidate> pool, size_t n) {
    if (n == 0) throw std::invalid_argument("n_survivors must be >= 1");
    if (pool.size() < n)
      throw std::invalid_argument("pool of " + std::to_string(pool.size()) +
                                  " is smaller than N=" + std::to_string(n));
    std::vector<size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return pool[a].id < pool[b].id; });
    for (size_t i = 1; i < order.size(); ++i) {
      if (pool[order[i]].id == pool[order[i - 1]].id)
        throw std::invalid_argument("duplicate candidate id: " + pool[order[i]].id);
    }
    std::map<CoverageUnit, size_t> dense;
    for (const Candidate& c : pool)
      for (CoverageUnit u : c.cover.units()) dense.emplace(u, 0);
    size_t next = 0;
    for (auto& [u, idx] : dense) idx = next++;
    words = std::max<size_t>(1, (next + 63) / 64);
    for (size_t k : order) {
      ids.push_back(pool[k].id);
      Words w(words, 0);
      for (CoverageUnit u : pool[k].cover.units()) {
        size_t d = dense[u];
        w[d / 64] |= uint64_t{1} << (d % 64);
      }
      bits.push_back(std::move(w));
    }
  }

  size_t size() const { return ids.size(); }
};

size_t union_size(const BitPool& bp, std::span<const size_t> members) {
  size_t count = 0;
  for (size_t w = 0; w < bp.words; ++w) {
    uint64_t acc = 0;
    for (size_t m : members) acc |= bp.bits[m][w];
    count += std::popcount(acc);
  }
  return count;
}

struct Attempt {
  std::vector<size_t> members;  // ascending
  size_t union_size = 0;
};

Attempt local_search(const BitPool& bp, std::vector<size_t> members,
                     SelectionStats& stats) {
  const size_t m = bp.size();
  std::vector<char> in_set(m, 0);
  for (size_t i : members) in_set[i] = 1;
  std::sort(members.begin(), members.end());
  Words rest(bp.words);
  bool changed = true;
  while (changed) {
    changed = false;
    ++stats.passes;
    for (size_t pos = 0; pos < members.size(); ++pos) {
      std::fill(rest.begin(), rest.end(), 0);
      for (size_t q = 0; q < members.size(); ++q) {
        if (q == pos) continue;
        for (size_t w = 0; w < bp.words; ++w) rest[w] |= bp.bits[members[q]][w];
      }
      auto size_with = [&](size_t cand) {
        size_t c = 0;
        for (size_t w = 0; w < bp.words; ++w)
          c += std::popcount(rest[w] | bp.bits[cand][w]);
        return c;
      };
      const size_t current = size_with(members[pos]);
      for (size_t j = 0; j < m; ++j) {
        if (in_set[j]) continue;
        ++stats.evaluations;
        if (size_with(j) > current) {
          in_set[members[pos]] = 0;
          in_set[j] = 1;
          members[pos] = j;
          changed = true;
          break;
        }
      }
    }
    std::sort(members.begin(), members.end());
  }
  Attempt a;
  a.union_size = union_size(bp, members);
  a.members = std::move(members);
  ++stats.attempts;
  return a;
}

std::vector<size_t> random_pick(size_t m, size_t n, Rng& rng,
                                std::vector<size_t> fixed = {}) {
  std::vector<size_t> idx;
  std::vector<char> taken(m, 0);
  for (size_t f : fixed) taken[f] = 1;
  for (size_t i = 0; i < m; ++i)
    if (!taken[i]) idx.push_back(i);
  // Partial Fisher-Yates over the free indices.
  const size_t need = n - std::min(n, fixed.size());
  for (size_t i = 0; i < need; ++i) {
    size_t j = i + static_cast<size_t>(uniform(rng, 0, idx.size() - 1 - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(need);
  fixed.insert(fixed.end(), idx.begin(), idx.end());
  return fixed;
}

std::vector<size_t> warm_members(const BitPool& bp,
                                 std::span<const NodeId> warm_start, size_t n,
                                 Rng& rng) {
  std::vector<size_t> fixed;
  for (const NodeId& id : warm_start) {
    auto it = std::lower_bound(bp.ids.begin(), bp.ids.end(), id);
    if (it == bp.ids.end() || *it != id)
      throw std::invalid_argument("warm start id not in pool: " + id);
    size_t k = static_cast<size_t>(it - bp.ids.begin());
    if (std::find(fixed.begin(), fixed.end(), k) == fixed.end()) fixed.push_back(k);
  }
  if (fixed.size() > n) fixed.resize(n);
  return random_pick(bp.size(), n, rng, std::move(fixed));
}

SelectionResult to_result(const BitPool& bp, const Attempt& a) {
  SelectionResult r;
  for (size_t i : a.members) r.selected.push_back(bp.ids[i]);
  r.union_size = a.union_size;
  return r;
}

Attempt run_attempt(const BitPool& bp, const SelectionConfig& cfg, size_t i,
                    std::span<const NodeId> warm_start, SelectionStats& stats) {
  Rng rng(derive_seed(cfg.rng_seed, i));
  std::vector<size_t> start =
      i < cfg.restarts ? random_pick(bp.size(), cfg.n_survivors, rng)
                       : warm_members(bp, warm_start, cfg.n_survivors, rng);
  return local_search(bp, std::move(start), stats);
}

size_t best_of(const std::vector<Attempt>& attempts) {
  size_t best = 0;
  for (size_t i = 1; i < attempts.size(); ++i) {
    if (attempts[i].union_size > attempts[best].union_size) best = i;
  }
  return best;
}

void check_restarts(const SelectionConfig& cfg) {
  if (cfg.restarts == 0) throw std::invalid_argument("restarts must be >= 1");
}

}  // namespace

std::vector<NodeId> greedy_max(std::span<const Candidate> pool, size_t n,
                               Rng& rng, SelectionStats* stats) {
  BitPool bp(pool, n);
  SelectionStats local;
  Attempt a = local_search(bp, random_pick(bp.size(), n, rng), local);
  if (stats) {
    stats->evaluations += local.evaluations;
    stats->passes += local.passes;
    stats->attempts += local.attempts;
  }
  return to_result(bp, a).selected;
}

SelectionResult approx_max_serial(std::span<const Candidate> pool,
                                  const SelectionConfig& cfg,
                                  std::span<const NodeId> warm_start,
                                  SelectionStats* stats) {
  check_restarts(cfg);
  BitPool bp(pool, cfg.n_survivors);
  const size_t total = cfg.restarts + (warm_start.empty() ? 0 : 1);
  std::vector<Attempt> attempts;
  SelectionStats local;
  for (size_t i = 0; i < total; ++i)
    attempts.push_back(run_attempt(bp, cfg, i, warm_start, local));
  if (stats) *stats = local;
  return to_result(bp, attempts[best_of(attempts)]);
}

SelectionResult approx_max(std::span<const Candidate> pool,
                           const SelectionConfig& cfg,
                           std::span<const NodeId> warm_start,
                           SelectionStats* stats) {
  check_restarts(cfg);
  BitPool bp(pool, cfg.n_survivors);
  const long total = static_cast<long>(cfg.restarts + (warm_start.empty() ? 0 : 1));
  std::vector<Attempt> attempts(static_cast<size_t>(total));
  std::vector<SelectionStats> per(static_cast<size_t>(total));
  // Warm-start ids are validated before entering the parallel region.
  if (!warm_start.empty()) {
    Rng probe(0);
    (void)warm_members(bp, warm_start, cfg.n_survivors, probe);
  }
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < total; ++i) {
    attempts[i] = run_attempt(bp, cfg, static_cast<size_t>(i), warm_start, per[i]);
  }
  if (stats) {
    *stats = {};
    for (const SelectionStats& s : per) {
      stats->evaluations += s.evaluations;
      stats->passes += s.passes;
      stats->attempts += s.attempts;
    }
  }
  return to_result(bp, attempts[best_of(attempts)]);
}

uint64_t binomial(uint64_t m, uint64_t k) {
  if (k > m) return 0;
  k = std::min(k, m - k);
  unsigned __int128 r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r = r * (m - k + i) / i;
    if (r > std::numeric_limits<uint64_t>::max())
      return std::numeric_limits<uint64_t>::max();
  }
  return static_cast<uint64_t>(r);
}

namespace {

// Lexicographic enumeration of the n-subsets whose smallest member is
// `first`. Keeps the first strictly best subset seen.
Attempt best_with_first(const BitPool& bp, size_t n, size_t first) {
  Attempt best;
  best.union_size = 0;
  const size_t m = bp.size();
  std::vector<size_t> combo(n);
  std::vector<Words> prefix(n, Words(bp.words));
  combo[0] = first;
  prefix[0] = bp.bits[first];
  bool have = false;
  auto evaluate = [&]() {
    size_t c = 0;
    for (uint64_t w : prefix[n - 1]) c += std::popcount(w);
    if (!have || c > best.union_size) {
      best.union_size = c;
      best.members = combo;
      have = true;
    }
  };
  if (n == 1) {
    evaluate();
    return best;
  }
  // depth-first over positions 1..n-1
  size_t depth = 1;
  combo[1] = first;  // incremented before use
  while (depth >= 1) {
    ++combo[depth];
    if (combo[depth] > m - (n - depth)) {
      --depth;
      continue;
    }
    for (size_t w = 0; w < bp.words; ++w)
      prefix[depth][w] = prefix[depth - 1][w] | bp.bits[combo[depth]][w];
    if (depth == n - 1) {
      evaluate();
    } else {
      ++depth;
      combo[depth] = combo[depth - 1];
    }
  }
  return best;
}

void check_bound(size_t m, size_t n) {
  if (binomial(m, n) > kBruteForceLimit)
    throw std::length_error("C(" + std::to_string(m) + "," + std::to_string(n) +
                            ") exceeds the brute-force bound");
}

}  // namespace

SelectionResult brute_force_max_serial(std::span<const Candidate> pool, size_t n) {
  BitPool bp(pool, n);
  check_bound(bp.size(), n);
  Attempt best;
  bool have = false;
  for (size_t first = 0; first + n <= bp.size(); ++first) {
    Attempt a = best_with_first(bp, n, first);
    if (!have || a.union_size > best.union_size) {
      best = std::move(a);
      have = true;
    }
  }
  return to_result(bp, best);
}

SelectionResult brute_force_max(std::span<const Candidate> pool, size_t n) {
  BitPool bp(pool, n);
  check_bound(bp.size(), n);
  const long firsts = static_cast<long>(bp.size() - n + 1);
  std::vector<Attempt> per(static_cast<size_t>(firsts));
#pragma omp parallel for schedule(dynamic)
  for (long f = 0; f < firsts; ++f) per[f] = best_with_first(bp, n, static_cast<size_t>(f));
  return to_result(bp, per[best_of(per)]);
}

}  // namespace elfz
