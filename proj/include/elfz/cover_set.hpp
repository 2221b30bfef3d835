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

#ifndef ELFZ_COVER_SET_HPP_
#define ELFZ_COVER_SET_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace elfz {

using CoverageUnit = uint64_t;

// A finite set of coverage units, stored sorted and duplicate-free.
class CoverSet {
 public:
  CoverSet() = default;
  CoverSet(std::initializer_list<CoverageUnit> units);
  explicit CoverSet(std::vector<CoverageUnit> units);

  // Inclusive range helper, handy for line-numbered toy SUTs: range(1, 5).
  static CoverSet range(CoverageUnit first, CoverageUnit last);

  size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }
  bool contains(CoverageUnit u) const;
  std::span<const CoverageUnit> units() const { return units_; }

  bool is_subset_of(const CoverSet& other) const;
  bool is_proper_subset_of(const CoverSet& other) const {
    return size() < other.size() && is_subset_of(other);
  }

  CoverSet united(const CoverSet& other) const;
  void unite(const CoverSet& other) { *this = united(other); }
  // Units of *this that are absent from other.
  CoverSet minus(const CoverSet& other) const;

  void insert(CoverageUnit u);

  std::string to_string() const;

  friend bool operator==(const CoverSet&, const CoverSet&) = default;

 private:
  std::vector<CoverageUnit> units_;
};

enum class Strength { Stronger, Weaker, Equivalent, Incomparable };

const char* to_string(Strength s);

// Compares the fuzzers whose cover sets are a and b: Stronger means a covers
// a proper superset of b.
Strength compare_strength(const CoverSet& a, const CoverSet& b);

}  // namespace elfz

#endif  // ELFZ_COVER_SET_HPP_
