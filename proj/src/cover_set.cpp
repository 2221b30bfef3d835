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

#include "elfz/cover_set.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

namespace elfz {

CoverSet::CoverSet(std::initializer_list<CoverageUnit> units)
    : CoverSet(std::vector<CoverageUnit>(units)) {}

CoverSet::CoverSet(std::vector<CoverageUnit> units) : units_(std::move(units)) {
  std::sort(units_.begin(), units_.end());
  units_.erase(std::unique(units_.begin(), units_.end()), units_.end());
}

CoverSet CoverSet::range(CoverageUnit first, CoverageUnit last) {
  std::vector<CoverageUnit> v;
  for (CoverageUnit u = first; u <= last; ++u) v.push_back(u);
  return CoverSet(std::move(v));
}

bool CoverSet::contains(CoverageUnit u) const {
  return std::binary_search(units_.begin(), units_.end(), u);
}

bool CoverSet::is_subset_of(const CoverSet& other) const {
  if (size() > other.size()) return false;
  return std::includes(other.units_.begin(), other.units_.end(), units_.begin(),
                       units_.end());
}

CoverSet CoverSet::united(const CoverSet& other) const {
  CoverSet out;
  out.units_.reserve(units_.size() + other.units_.size());
  std::set_union(units_.begin(), units_.end(), other.units_.begin(),
                 other.units_.end(), std::back_inserter(out.units_));
  return out;
}

CoverSet CoverSet::minus(const CoverSet& other) const {
  CoverSet out;
  std::set_difference(units_.begin(), units_.end(), other.units_.begin(),
                      other.units_.end(), std::back_inserter(out.units_));
  return out;
}

void CoverSet::insert(CoverageUnit u) {
  auto it = std::lower_bound(units_.begin(), units_.end(), u);
  if (it == units_.end() || *it != u) units_.insert(it, u);
}

std::string CoverSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < units_.size(); ++i) {
    if (i) os << ',';
    os << units_[i];
  }
  os << '}';
  return os.str();
}

const char* to_string(Strength s) {
  switch (s) {
    case Strength::Stronger: return "Stronger";
    case Strength::Weaker: return "Weaker";
    case Strength::Equivalent: return "Equivalent";
    case Strength::Incomparable: return "Incomparable";
  }
  return "?";
}

Strength compare_strength(const CoverSet& a, const CoverSet& b) {
  if (a == b) return Strength::Equivalent;
  if (b.is_subset_of(a)) return Strength::Stronger;
  if (a.is_subset_of(b)) return Strength::Weaker;
  return Strength::Incomparable;
}

}  // namespace elfz
