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

#ifndef ELFZ_REPORT_HPP_
#define ELFZ_REPORT_HPP_

#include <span>
#include <string>

#include "elfz/evolution.hpp"

namespace elfz {

// Fixed-width table of the trend rows.
std::string format_trend_table(std::span<const TrendRow> rows);

// Line chart of survivor_union_size per iteration.
std::string trend_svg(std::span<const TrendRow> rows, const std::string& title = "survivor union");

bool is_non_decreasing(std::span<const TrendRow> rows);

}  // namespace elfz

#endif  // ELFZ_REPORT_HPP_
