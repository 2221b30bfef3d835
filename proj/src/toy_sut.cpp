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

#include "elfz/toy_sut.hpp"

#include <omp.h>

namespace elfz {
namespace {

constexpr uint64_t line(unsigned n) { return uint64_t{1} << n; }

}  // namespace

uint64_t BalancedParens::trace(std::string_view input) const {
  uint64_t t = line(1) | line(2) | line(3);
  int depth = 0;  // the stack only ever holds "("
  for (char c : input) {
    t |= line(4);
    if (c == '(') {
      t |= line(5);
      ++depth;
      continue;
    }
    t |= line(6);
    if (c != ')') return t | line(11) | line(12);
    t |= line(7);
    if (depth == 0) return t | line(9) | line(10);
    t |= line(8);
    --depth;
  }
  return t | line(13);
}

std::optional<bool> BalancedParens::verdict(std::string_view input) {
  int depth = 0;
  for (char c : input) {
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (depth == 0) return false;
      --depth;
    } else {
      return std::nullopt;
    }
  }
  return depth == 0;
}

const ToySut* find_toy_sut(std::string_view name) {
  static const BalancedParens kParens;
  if (name == kParens.name()) return &kParens;
  return nullptr;
}

std::vector<std::string> toy_sut_names() { return {"balanced_parens"}; }

CoverSet cover_from_mask(uint64_t mask) {
  std::vector<CoverageUnit> units;
  for (unsigned u = 0; u < 64; ++u)
    if (mask & (uint64_t{1} << u)) units.push_back(u);
  return CoverSet(std::move(units));
}

CoverSet toy_cover_serial(const ToySut& sut, std::span<const std::string> cases) {
  uint64_t mask = 0;
  for (const std::string& c : cases) mask |= sut.trace(c);
  return cover_from_mask(mask);
}

CoverSet toy_cover(const ToySut& sut, std::span<const std::string> cases) {
  uint64_t mask = 0;
  const long n = static_cast<long>(cases.size());
#pragma omp parallel for reduction(| : mask) schedule(static)
  for (long i = 0; i < n; ++i) mask |= sut.trace(cases[i]);
  return cover_from_mask(mask);
}

}  // namespace elfz
