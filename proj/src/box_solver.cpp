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
#include "boxrec/box_solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>

namespace boxrec {

namespace {

// The reciprocals are added as one reduced fraction and rounded once, so the
// result is the correctly rounded exact sum and structurally equal outfits
// tie exactly. Fractions too large for a double mantissa fall back to a
// floating sum in ascending-multiplicity order.
double sum_inverse(std::vector<std::size_t>& counts) {
  std::sort(counts.begin(), counts.end());
  constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 53;
  std::uint64_t num = 0, den = 1;
  bool exact = true;
  for (std::size_t c : counts) {
    const std::uint64_t cc = c;
    const std::uint64_t den_part = den / std::gcd(den, cc);
    std::uint64_t l, scaled;
    if (__builtin_mul_overflow(den_part, cc, &l) || __builtin_mul_overflow(num, l / den, &scaled) ||
        __builtin_add_overflow(scaled, l / cc, &num)) {
      exact = false;
      break;
    }
    den = l;
    const std::uint64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  if (exact && num < kExactLimit && den < kExactLimit) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  double s = 0.0;
  for (std::size_t c : counts) s += 1.0 / static_cast<double>(c);
  return s;
}

void check_outfit(const BoxInstance& inst, OutfitIndex o) {
  if (o >= inst.outfits.size()) throw Error("outfit index " + std::to_string(o) + " out of range");
}

}  // namespace

void BoxInstance::normalize() {
  if (item_ids.size() != prices.size()) throw Error("instance: item ids and prices differ in length");
  if (budget <= 0) throw Error("instance: budget must be positive");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (prices[i] <= 0) throw Error("instance: item '" + item_ids[i] + "' has non-positive price");
  }
  for (std::size_t o = 0; o < outfits.size(); ++o) {
    auto& items = outfits[o];
    if (items.empty()) throw Error("instance: outfit " + std::to_string(o) + " is empty");
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    if (items.back() >= prices.size()) {
      throw Error("instance: outfit " + std::to_string(o) + " references an unknown item");
    }
  }
}

Price BoxInstance::outfit_price(OutfitIndex o) const {
  check_outfit(*this, o);
  Price p = 0;
  for (ItemIndex x : outfits[o]) p += prices[x];
  return p;
}

BoxInstance BoxInstance::from_json(const nlohmann::json& j) {
  BoxInstance inst;
  std::map<std::string, ItemIndex> index;
  try {
    for (const auto& it : j.at("items")) {
      std::string id = it.at("id").get<std::string>();
      if (!index.emplace(id, inst.item_ids.size()).second) {
        throw Error("instance: duplicate item id '" + id + "'");
      }
      inst.item_ids.push_back(std::move(id));
      inst.prices.push_back(it.at("price").get<Price>());
    }
    for (const auto& o : j.at("outfits")) {
      GenericOutfit outfit;
      for (const auto& id : o) {
        auto found = index.find(id.get<std::string>());
        if (found == index.end()) {
          throw Error("instance: outfit references unknown item '" + id.get<std::string>() + "'");
        }
        outfit.push_back(found->second);
      }
      inst.outfits.push_back(std::move(outfit));
    }
    inst.budget = j.at("budget").get<Price>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("instance: malformed JSON: ") + e.what());
  }
  inst.normalize();
  return inst;
}

nlohmann::json BoxInstance::to_json() const {
  nlohmann::json j;
  j["items"] = nlohmann::json::array();
  for (std::size_t i = 0; i < item_ids.size(); ++i) {
    j["items"].push_back({{"id", item_ids[i]}, {"price", prices[i]}});
  }
  j["outfits"] = nlohmann::json::array();
  for (const auto& o : outfits) {
    nlohmann::json ids = nlohmann::json::array();
    for (ItemIndex x : o) ids.push_back(item_ids[x]);
    j["outfits"].push_back(std::move(ids));
  }
  j["budget"] = budget;
  return j;
}

std::size_t multiplicity(const BoxInstance& inst, const Box& box, ItemIndex item) {
  std::size_t n = 0;
  for (OutfitIndex o : box) {
    check_outfit(inst, o);
    const auto& items = inst.outfits[o];
    if (std::binary_search(items.begin(), items.end(), item)) ++n;
  }
  return n;
}

double relative_size(const BoxInstance& inst, const Box& box, OutfitIndex outfit) {
  check_outfit(inst, outfit);
  if (std::find(box.begin(), box.end(), outfit) == box.end()) {
    throw Error("relative_size: outfit " + std::to_string(outfit) + " is not in the box");
  }
  std::vector<std::size_t> counts;
  for (ItemIndex x : inst.outfits[outfit]) {
    const std::size_t m = multiplicity(inst, box, x);
    if (m == 0) throw Error("relative_size: member item has zero multiplicity");
    counts.push_back(m);
  }
  return sum_inverse(counts);
}

double relative_size_if_added(const BoxInstance& inst, const Box& box, OutfitIndex outfit) {
  check_outfit(inst, outfit);
  std::vector<std::size_t> counts;
  for (ItemIndex x : inst.outfits[outfit]) counts.push_back(multiplicity(inst, box, x) + 1);
  return sum_inverse(counts);
}

std::vector<ItemIndex> distinct_items(const BoxInstance& inst, const Box& box) {
  std::vector<ItemIndex> items;
  for (OutfitIndex o : box) {
    check_outfit(inst, o);
    items.insert(items.end(), inst.outfits[o].begin(), inst.outfits[o].end());
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

Price total_price(const BoxInstance& inst, const Box& box) {
  Price t = 0;
  for (ItemIndex x : distinct_items(inst, box)) t += inst.prices[x];
  return t;
}

std::size_t cardinality(const BoxInstance& inst, const Box& box) {
  std::size_t n = 0;
  for (OutfitIndex o : box) {
    check_outfit(inst, o);
    n += inst.outfits[o].size();
  }
  return n;
}

bool is_feasible(const BoxInstance& inst, const Box& box) {
  return total_price(inst, box) <= inst.budget;
}

std::vector<Box> connected_components(const BoxInstance& inst, const Box& box) {
  const std::size_t n = box.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::map<ItemIndex, std::size_t> first_holder;
  for (std::size_t k = 0; k < n; ++k) {
    check_outfit(inst, box[k]);
    for (ItemIndex x : inst.outfits[box[k]]) {
      auto [it, fresh] = first_holder.emplace(x, k);
      if (!fresh) {
        const std::size_t a = find(it->second), b = find(k);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  // Roots are always the smallest position of their group, so walking
  // positions in order visits groups in order of first member.
  std::vector<Box> groups;
  std::map<std::size_t, std::size_t> group_of_root;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = find(k);
    auto [it, fresh] = group_of_root.emplace(r, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(box[k]);
  }
  return groups;
}

BoxCollection decantate_stage(const BoxInstance& inst, BoxCollection collection,
                              DecantLevel level) {
  std::size_t outfit_count = 0;
  for (const Box& b : collection) outfit_count += b.size();
  const std::size_t cap = std::max<std::size_t>(1, outfit_count * outfit_count);

  auto largest = [&]() {
    std::size_t m = 0;
    for (const Box& b : collection) m = std::max(m, b.size());
    return m;
  };

  std::size_t productive_passes = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = collection.size(); j-- > 1;) {
      std::vector<Box> units;
      switch (level) {
        case DecantLevel::boxes:
          units.push_back(collection[j]);
          break;
        case DecantLevel::components:
          units = connected_components(inst, collection[j]);
          break;
        case DecantLevel::outfits:
          for (OutfitIndex o : collection[j]) units.push_back({o});
          break;
      }
      for (const Box& unit : units) {
        for (std::size_t i = 0; i < j; ++i) {
          Box merged = collection[i];
          merged.insert(merged.end(), unit.begin(), unit.end());
          if (!is_feasible(inst, merged)) continue;
          if (level != DecantLevel::boxes) {
            const std::size_t before = largest();
            const std::size_t source_after = collection[j].size() - unit.size();
            std::size_t after = std::max(merged.size(), source_after);
            for (std::size_t k = 0; k < collection.size(); ++k) {
              if (k != i && k != j) after = std::max(after, collection[k].size());
            }
            if (after < before) continue;
          }
          collection[i] = std::move(merged);
          Box& source = collection[j];
          source.erase(std::remove_if(source.begin(), source.end(),
                                      [&](OutfitIndex o) {
                                        return std::find(unit.begin(), unit.end(), o) != unit.end();
                                      }),
                       source.end());
          changed = true;
          break;
        }
      }
      if (collection[j].empty()) collection.erase(collection.begin() + static_cast<std::ptrdiff_t>(j));
    }
    if (changed && ++productive_passes > cap) {
      throw Error("decantation did not settle within " + std::to_string(cap) + " passes");
    }
  }
  std::erase_if(collection, [](const Box& b) { return b.empty(); });
  return collection;
}

BoxCollection decantate(const BoxInstance& inst, BoxCollection collection, DecantTrace* trace) {
  collection = decantate_stage(inst, std::move(collection), DecantLevel::boxes);
  if (trace) trace->after_boxes = collection;
  collection = decantate_stage(inst, std::move(collection), DecantLevel::components);
  if (trace) trace->after_components = collection;
  collection = decantate_stage(inst, std::move(collection), DecantLevel::outfits);
  if (trace) trace->after_outfits = collection;
  return collection;
}

namespace {

// Box with incrementally maintained item multiplicities and price.
struct WorkBox {
  Box outfits;
  std::vector<std::size_t> count;  // per item
  Price total = 0;
  std::vector<char> visited;  // per outfit: ever inserted here

  WorkBox(std::size_t items, std::size_t n_outfits) : count(items, 0), visited(n_outfits, 0) {}

  void insert(const BoxInstance& inst, OutfitIndex o) {
    outfits.push_back(o);
    visited[o] = 1;
    for (ItemIndex x : inst.outfits[o]) {
      if (count[x]++ == 0) total += inst.prices[x];
    }
  }

  void remove_at(const BoxInstance& inst, std::size_t pos) {
    const OutfitIndex o = outfits[pos];
    outfits.erase(outfits.begin() + static_cast<std::ptrdiff_t>(pos));
    for (ItemIndex x : inst.outfits[o]) {
      if (--count[x] == 0) total -= inst.prices[x];
    }
  }

  double relative_size_member(const BoxInstance& inst, OutfitIndex o) const {
    std::vector<std::size_t> counts;
    for (ItemIndex x : inst.outfits[o]) counts.push_back(count[x]);
    return sum_inverse(counts);
  }

  double relative_size_candidate(const BoxInstance& inst, OutfitIndex o) const {
    std::vector<std::size_t> counts;
    for (ItemIndex x : inst.outfits[o]) counts.push_back(count[x] + 1);
    return sum_inverse(counts);
  }
};

}  // namespace

SolveResult olr_solve(const BoxInstance& inst) {
  const std::size_t n = inst.outfits.size();
  SolveResult result;

  std::deque<OutfitIndex> queue;
  for (OutfitIndex o = 0; o < n; ++o) {
    if (inst.outfit_price(o) > inst.budget) {
      result.dropped.push_back(o);
    } else {
      queue.push_back(o);
    }
  }

  std::vector<WorkBox> boxes;
  boxes.emplace_back(inst.prices.size(), n);  // the initial empty box

  const std::size_t cap = n * n * n + n + 1;
  std::size_t steps = 0;
  while (!queue.empty()) {
    if (++steps > cap) throw Error("overload-and-remove did not settle");
    const OutfitIndex o = queue.front();
    queue.pop_front();
    const double size = static_cast<double>(inst.outfits[o].size());

    std::size_t best = boxes.size();
    double best_rel = 0.0;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      const WorkBox& box = boxes[b];
      if (box.visited[o]) continue;
      const double rel = box.relative_size_candidate(inst, o);
      if (!box.outfits.empty() && !(rel < size)) continue;
      if (best == boxes.size() || rel < best_rel) {
        best = b;
        best_rel = rel;
      }
    }
    if (best == boxes.size()) {
      boxes.emplace_back(inst.prices.size(), n);
      boxes.back().insert(inst, o);
      continue;
    }

    WorkBox& box = boxes[best];
    box.insert(inst, o);
    while (box.total > inst.budget) {
      std::size_t victim = 0;
      double victim_ratio = 0.0;
      for (std::size_t k = 0; k < box.outfits.size(); ++k) {
        const OutfitIndex c = box.outfits[k];
        const double ratio =
            static_cast<double>(inst.outfits[c].size()) / box.relative_size_member(inst, c);
        if (k == 0 || ratio < victim_ratio) {
          victim = k;
          victim_ratio = ratio;
        }
      }
      queue.push_back(box.outfits[victim]);
      box.remove_at(inst, victim);
    }
  }

  for (const WorkBox& b : boxes) {
    if (!b.outfits.empty()) result.after_overload.push_back(b.outfits);
  }
  const BoxCollection final_boxes = decantate(inst, result.after_overload, &result.decantation);

  bool have = false;
  Price best_total = 0;
  for (const Box& b : final_boxes) {
    const Price t = total_price(inst, b);
    if (!have || b.size() > result.box.size() || (b.size() == result.box.size() && t < best_total)) {
      result.box = b;
      best_total = t;
      have = true;
    }
  }
  return result;
}

Box exact_solve(const BoxInstance& inst) {
  const std::size_t n = inst.outfits.size();
  if (n > kExactSolveLimit) {
    throw Error("exact_solve: " + std::to_string(n) + " outfits exceeds the limit of " +
                std::to_string(kExactSolveLimit));
  }
  const std::size_t items = inst.prices.size();
  std::vector<std::size_t> count(items, 0);
  std::uint32_t best_mask = 0;
  int best_pop = -1;

  auto sorted_less = [](std::uint32_t a, std::uint32_t b) {
    // Lexicographic order of the ascending index lists.
    while (a != 0 && b != 0) {
      const int la = std::countr_zero(a), lb = std::countr_zero(b);
      if (la != lb) return la < lb;
      a &= a - 1;
      b &= b - 1;
    }
    return a == 0 && b != 0;
  };

  const std::uint32_t end = n == 0 ? 1u : (1u << n);
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    const int pop = std::popcount(mask);
    if (pop < best_pop) continue;
    std::fill(count.begin(), count.end(), 0);
    Price total = 0;
    for (std::uint32_t m = mask; m != 0; m &= m - 1) {
      for (ItemIndex x : inst.outfits[static_cast<std::size_t>(std::countr_zero(m))]) {
        if (count[x]++ == 0) total += inst.prices[x];
      }
    }
    if (total > inst.budget) continue;
    if (pop > best_pop || sorted_less(mask, best_mask)) {
      best_pop = pop;
      best_mask = mask;
    }
  }
  Box box;
  for (std::uint32_t m = best_mask; m != 0; m &= m - 1) {
    box.push_back(static_cast<OutfitIndex>(std::countr_zero(m)));
  }
  return box;
}

}  // namespace boxrec
