/*
 * Copyright 2026 The BoxRec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Budgeted box selection: pick as many outfits as possible such that the
// distinct items they use cost at most the budget. Outfits share items, so
// the price of a box is the price of the union of its outfits, not the sum.
//
// Notation used throughout, for a box H (a list of outfits) and item x:
//   multiplicity(H, x)   number of outfits of H containing x
//   relative_size(o, H)  sum over x in o of 1 / multiplicity(H, x)
//   distinct_items(H)    union of the outfits of H
//   total_price(H)       sum of prices over distinct_items(H)
//   cardinality(H)       sum of outfit sizes, counting shared items repeatedly

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxrec/types.hpp"

namespace boxrec {

using ItemIndex = std::size_t;
using OutfitIndex = std::size_t;

/// Sorted, duplicate-free, non-empty item list. Size is not fixed.
using GenericOutfit = std::vector<ItemIndex>;

/// Outfit indices in insertion order.
using Box = std::vector<OutfitIndex>;
using BoxCollection = std::vector<Box>;

struct BoxInstance {
  std::vector<std::string> item_ids;
  std::vector<Price> prices;  // parallel to item_ids
  std::vector<GenericOutfit> outfits;
  Price budget = 0;

  /// Throws on non-positive prices or budget, empty outfits, or bad indices.
  /// Sorts and deduplicates each outfit.
  void normalize();

  Price outfit_price(OutfitIndex o) const;

  /// {"items":[{"id","price"}], "outfits":[[id,...]], "budget":B}
  static BoxInstance from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

std::size_t multiplicity(const BoxInstance& inst, const Box& box, ItemIndex item);

/// Relative size of an outfit that belongs to the box. Throws if it does not.
double relative_size(const BoxInstance& inst, const Box& box, OutfitIndex outfit);

/// Relative size the outfit would have after being added to the box.
double relative_size_if_added(const BoxInstance& inst, const Box& box, OutfitIndex outfit);

std::vector<ItemIndex> distinct_items(const BoxInstance& inst, const Box& box);
Price total_price(const BoxInstance& inst, const Box& box);
std::size_t cardinality(const BoxInstance& inst, const Box& box);
bool is_feasible(const BoxInstance& inst, const Box& box);

/// Partition of the box into groups linked (transitively) by shared items.
/// Each group keeps the box's order; groups are ordered by first member.
std::vector<Box> connected_components(const BoxInstance& inst, const Box& box);

enum class DecantLevel { boxes, components, outfits };

/// One decantation stage run to a fixpoint: working from the last box to the
/// second, move each unit (whole box, connected component or single outfit)
/// into the lowest-index earlier box that stays within budget. Empty boxes
/// are dropped. A component or outfit move that would shrink the largest
/// box's outfit count is skipped.
BoxCollection decantate_stage(const BoxInstance& inst, BoxCollection collection,
                              DecantLevel level);

struct DecantTrace {
  BoxCollection after_boxes;
  BoxCollection after_components;
  BoxCollection after_outfits;
};

/// The three stages in order: boxes, components, outfits.
BoxCollection decantate(const BoxInstance& inst, BoxCollection collection,
                        DecantTrace* trace = nullptr);

struct SolveResult {
  Box box;
  std::vector<OutfitIndex> dropped;  // outfits costing more than the budget alone
  BoxCollection after_overload;      // collection before decantation
  DecantTrace decantation;
};

/// Overload-and-Remove with decantation. Outfits are queued in input order;
/// each goes to the eligible box where its relative size is smallest (an
/// eligible box shares an item with it and never held it before), the box is
/// then trimmed back under budget by evicting the outfit with the smallest
/// size / relative-size ratio, and evicted outfits are re-queued. The largest
/// box after decantation is returned (ties: cheaper, then earlier).
SolveResult olr_solve(const BoxInstance& inst);

inline constexpr std::size_t kExactSolveLimit = 20;

/// Exhaustive search for a maximum-cardinality feasible subset. Ties go to
/// the lexicographically smallest sorted index set. Throws above
/// kExactSolveLimit outfits.
Box exact_solve(const BoxInstance& inst);

}  // namespace boxrec
