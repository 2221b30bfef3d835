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

#ifndef ELFZ_TOY_SUT_HPP_
#define ELFZ_TOY_SUT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elfz/cover_set.hpp"

namespace elfz {

// An in-process SUT with at most 63 coverage units (ids 1..63). A trace is a
// bitmask with bit u set when unit u executed.
class ToySut {
 public:
  virtual ~ToySut() = default;
  virtual std::string_view name() const = 0;
  virtual uint64_t trace(std::string_view input) const = 0;
};

// The 13-line balanced-parenthesis checker. Units are its line numbers:
//
//   1  def balanced_parenthesis(parens: str) -> bool:
//   2      stack = []
//   3      for c in parens:
//   4          if c == "(":
//   5              stack.insert(0, c)
//   6          elif c == ")":
//   7              if stack and stack[0] == "(":
//   8                  stack.pop(0)
//   9              else:
//  10                  return False
//  11          else:
//  12              raise ValueError("Invalid character")
//  13      return not stack
//
// Every byte is one character. `else:` lines count when their branch is
// taken; line 13 counts whenever the loop runs to completion.
class BalancedParens final : public ToySut {
 public:
  std::string_view name() const override { return "balanced_parens"; }
  uint64_t trace(std::string_view input) const override;
  // The checker's verdict; nullopt when it raises.
  static std::optional<bool> verdict(std::string_view input);
};

// Returns nullptr for unknown names.
const ToySut* find_toy_sut(std::string_view name);
std::vector<std::string> toy_sut_names();

CoverSet cover_from_mask(uint64_t mask);

// Union of the traces of all test cases. The parallel kernel and its serial
// reference must agree exactly.
CoverSet toy_cover(const ToySut& sut, std::span<const std::string> cases);
CoverSet toy_cover_serial(const ToySut& sut, std::span<const std::string> cases);

}  // namespace elfz

#endif  // ELFZ_TOY_SUT_HPP_
