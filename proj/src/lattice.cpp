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

#include "elfz/lattice.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace elfz {

const char* to_string(DiscardReason r) {
  return r == DiscardReason::Invalid ? "invalid" : "weaker-or-equivalent";
}

size_t ExploreReport::count(DiscardReason r) const {
  return std::count_if(discarded.begin(), discarded.end(),
                       [r](const Discarded& d) { return d.reason == r; });
}

const FuzzerNode* FuzzerSpace::find(const NodeId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const FuzzerNode& FuzzerSpace::at(const NodeId& id) const {
  const FuzzerNode* n = find(id);
  if (!n) throw std::out_of_range("unknown fuzzer node: " + id);
  return *n;
}

bool FuzzerSpace::has_arrow(const NodeId& from, const NodeId& to) const {
  return std::find(arrows_.begin(), arrows_.end(), Arrow{from, to}) !=
         arrows_.end();
}

bool FuzzerSpace::insert(FuzzerNode node) {
  if (contains(node.id))
    throw std::invalid_argument("duplicate fuzzer node id: " + node.id);
  for (const NodeId& p : node.provenance.parents) {
    if (!contains(p))
      throw std::invalid_argument("node " + node.id + " has unknown parent " + p);
  }
  for (const FuzzerNode& f : nodes_) {
    if (f.cover == node.cover) return false;
  }
  for (const FuzzerNode& f : nodes_) {
    if (f.cover.is_proper_subset_of(node.cover)) arrows_.emplace_back(f.id, node.id);
    else if (node.cover.is_proper_subset_of(f.cover)) arrows_.emplace_back(node.id, f.id);
  }
  index_.emplace(node.id, nodes_.size());
  nodes_.push_back(std::move(node));
  return true;
}

std::vector<NodeId> FuzzerSpace::reachable_from(const NodeId& from) const {
  std::set<NodeId> seen;
  std::deque<NodeId> work{from};
  while (!work.empty()) {
    NodeId cur = work.front();
    work.pop_front();
    for (const auto& [a, b] : arrows_) {
      if (a == cur && seen.insert(b).second) work.push_back(b);
    }
  }
  seen.erase(from);
  return {seen.begin(), seen.end()};
}

nlohmann::ordered_json provenance_to_json(const Provenance& p) {
  nlohmann::ordered_json j;
  j["kind"] = p.kind_name();
  j["parents"] = p.parents;
  return j;
}

Provenance provenance_from_json(const nlohmann::ordered_json& j) {
  Provenance p;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "seed") {
    p.mutator = parse_mutator_kind(kind);
    if (!p.mutator) throw std::runtime_error("unknown provenance kind: " + kind);
  }
  p.parents = j.at("parents").get<std::vector<NodeId>>();
  return p;
}

nlohmann::ordered_json FuzzerSpace::to_json() const {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const FuzzerNode& n : nodes_) {
    nlohmann::ordered_json jn;
    jn["id"] = n.id;
    jn["source"] = n.source;
    jn["provenance"] = provenance_to_json(n.provenance);
    jn["cover"] = std::vector<CoverageUnit>(n.cover.units().begin(),
                                            n.cover.units().end());
    jn["iteration_born"] = n.iteration_born;
    j["nodes"].push_back(std::move(jn));
  }
  j["arrows"] = nlohmann::ordered_json::array();
  for (const auto& [a, b] : arrows_) j["arrows"].push_back({a, b});
  return j;
}

FuzzerSpace FuzzerSpace::from_json(const nlohmann::ordered_json& j) {
  FuzzerSpace space;
  for (const auto& jn : j.at("nodes")) {
    FuzzerNode n;
    n.id = jn.at("id").get<std::string>();
    n.source = jn.at("source").get<std::string>();
    n.provenance = provenance_from_json(jn.at("provenance"));
    n.cover = CoverSet(jn.at("cover").get<std::vector<CoverageUnit>>());
    n.iteration_born = jn.at("iteration_born").get<int>();
    space.index_.emplace(n.id, space.nodes_.size());
    space.nodes_.push_back(std::move(n));
  }
  for (const auto& ja : j.at("arrows")) {
    space.arrows_.emplace_back(ja.at(0).get<std::string>(),
                               ja.at(1).get<std::string>());
  }
  return space;
}

ExploreReport explore(FuzzerSpace& space, std::span<const Mutant> mutants,
                      int iteration) {
  ExploreReport report;
  for (const Mutant& m : mutants) {
    if (const auto* failure = std::get_if<ExecutionFailure>(&m.outcome)) {
      report.discarded.push_back({m.id, m.source, DiscardReason::Invalid,
                                  std::string(to_string(failure->kind)) + ": " +
                                      failure->detail});
      continue;
    }
    const CoverSet& cover = std::get<CoverSet>(m.outcome);
    const FuzzerNode* dominator = nullptr;
    for (const FuzzerNode& f : space.nodes()) {
      if (cover.is_subset_of(f.cover)) {
        dominator = &f;
        break;
      }
    }
    if (dominator) {
      report.discarded.push_back(
          {m.id, m.source, DiscardReason::WeakerOrEquivalent, dominator->id});
      continue;
    }
    space.insert(FuzzerNode{m.id, m.source, m.provenance, cover, iteration});
    report.admitted.push_back(m.id);
  }
  return report;
}

CoverSet union_cover(const FuzzerSpace& space, std::span<const NodeId> ids) {
  CoverSet out;
  for (const NodeId& id : ids) out.unite(space.at(id).cover);
  return out;
}

}  // namespace elfz
