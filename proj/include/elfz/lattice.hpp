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

#ifndef ELFZ_LATTICE_HPP_
#define ELFZ_LATTICE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "elfz/cover_set.hpp"
#include "elfz/types.hpp"
#include "json.hpp"

namespace elfz {

struct FuzzerNode {
  NodeId id;
  std::string source;
  Provenance provenance;
  CoverSet cover;  // measured once, at admission
  int iteration_born = 0;
};

// A mutant awaiting exploration: its measured cover, or why it failed to run.
struct Mutant {
  NodeId id;
  std::string source;
  Provenance provenance;
  std::variant<CoverSet, ExecutionFailure> outcome;
};

enum class DiscardReason { Invalid, WeakerOrEquivalent };
const char* to_string(DiscardReason r);

struct Discarded {
  NodeId id;
  std::string source;
  DiscardReason reason;
  std::string detail;  // failure detail, or the id of a dominating node
};

struct ExploreReport {
  std::vector<NodeId> admitted;
  std::vector<Discarded> discarded;

  size_t count(DiscardReason r) const;
};

// The explored fragment of the fuzzer space. Nodes are candidates; an arrow
// (from, to) records that cover(from) is a proper subset of cover(to).
//
// Invariants kept by every mutator of this class:
//  - no two nodes share a cover set;
//  - an arrow exists for exactly the pairs in the proper-subset relation,
//    so reachability trivially equals that relation.
class FuzzerSpace {
 public:
  using Arrow = std::pair<NodeId, NodeId>;

  const std::vector<FuzzerNode>& nodes() const { return nodes_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  size_t size() const { return nodes_.size(); }

  const FuzzerNode* find(const NodeId& id) const;
  const FuzzerNode& at(const NodeId& id) const;  // throws std::out_of_range
  bool contains(const NodeId& id) const { return find(id) != nullptr; }
  bool has_arrow(const NodeId& from, const NodeId& to) const;

  // Adds a node unconditionally (seeds, or the unfiltered noFS path).
  // Returns false, leaving the space untouched, when a node with an identical
  // cover already exists. Throws std::invalid_argument on a duplicate id or a
  // parent that is not in the space.
  bool insert(FuzzerNode node);

  // Node ids reachable from `from` by following arrows (excluding `from`).
  std::vector<NodeId> reachable_from(const NodeId& from) const;

  nlohmann::ordered_json to_json() const;
  static FuzzerSpace from_json(const nlohmann::ordered_json& j);

 private:
  std::vector<FuzzerNode> nodes_;
  std::vector<Arrow> arrows_;
  std::map<NodeId, size_t> index_;
};

// Admits mutants into the space, in order. A mutant is discarded when it
// failed to execute, or when some existing node covers a superset of its
// cover (weaker or equivalent). Everything else is admitted, with an arrow
// from every node it strictly dominates; a mutant that reaches units no node
// covers is admitted even if it dominates nothing.
ExploreReport explore(FuzzerSpace& space, std::span<const Mutant> mutants,
                      int iteration);

// Exact union of the covers of the given nodes. Throws std::out_of_range on
// an unknown id.
CoverSet union_cover(const FuzzerSpace& space, std::span<const NodeId> ids);

nlohmann::ordered_json provenance_to_json(const Provenance& p);
Provenance provenance_from_json(const nlohmann::ordered_json& j);

}  // namespace elfz

#endif  // ELFZ_LATTICE_HPP_
