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

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boxrec/box_solver.hpp"
#include "boxrec/catalog.hpp"
#include "boxrec/compat_model.hpp"
#include "boxrec/features.hpp"
#include "boxrec/retrieval.hpp"

namespace boxrec::testing {

// Nine unit-price items a1..a9, four tiles, budget 5:
//   s1={a1,a2,a3} s2={a2,a3,a4} s3={a3,a4,a5} s4={a6,a7,a8,a9}
inline BoxInstance example_one() {
  BoxInstance inst;
  for (int i = 1; i <= 9; ++i) {
    inst.item_ids.push_back("a" + std::to_string(i));
    inst.prices.push_back(1);
  }
  inst.outfits = {{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {5, 6, 7, 8}};
  inst.budget = 5;
  inst.normalize();
  return inst;
}

struct RandomInstanceShape {
  int max_outfits = 8;
  int max_items = 12;
  int max_price = 5;
  int max_budget = 15;
  int max_outfit_size = 4;
};

inline BoxInstance random_instance(std::mt19937_64& gen, const RandomInstanceShape& s = {}) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
  BoxInstance inst;
  const int items = pick(1, s.max_items);
  for (int i = 0; i < items; ++i) {
    inst.item_ids.push_back("x" + std::to_string(i));
    inst.prices.push_back(pick(1, s.max_price));
  }
  const int outfits = pick(0, s.max_outfits);
  for (int o = 0; o < outfits; ++o) {
    GenericOutfit outfit;
    const int size = pick(1, std::min(s.max_outfit_size, items));
    while (static_cast<int>(outfit.size()) < size) {
      const auto x = static_cast<ItemIndex>(pick(0, items - 1));
      if (std::find(outfit.begin(), outfit.end(), x) == outfit.end()) outfit.push_back(x);
    }
    inst.outfits.push_back(outfit);
  }
  inst.budget = pick(1, s.max_budget);
  inst.normalize();
  return inst;
}

inline Item make_item(std::string id, ClothingType type, std::string category, Price price,
                      Occasion occasion = Occasion::casual, std::string title = "") {
  Item item;
  item.id = std::move(id);
  item.type = type;
  item.category = std::move(category);
  item.price = price;
  item.occasion = occasion;
  item.title = title.empty() ? item.category : std::move(title);
  return item;
}

// Items placed on a line: the global vector is (position, 0, ...), so
// retrieval distance is the gap between positions.
struct PlacedItem {
  Item item;
  double position = 0.0;
};

struct SmallWorld {
  Catalog catalog;
  FeatureStore features;
};

inline SmallWorld small_world(const std::vector<PlacedItem>& placed,
                              FeatureDims dims = {2, 4, 3}) {
  std::vector<Item> items;
  FeatureStore store(dims);
  for (const auto& p : placed) {
    items.push_back(p.item);
    ItemFeatures f;
    f.global = Eigen::VectorXd::Zero(dims.global);
    f.global(0) = p.position;
    f.map = FeatureMap::Zero(dims.patches, dims.channels);
    store.insert(p.item.id, std::move(f));
  }
  return {Catalog::build(std::move(items)), std::move(store)};
}

// n items of one type and category at positions 0..n-1, ids "<prefix>NN".
inline std::vector<PlacedItem> item_line(const std::string& prefix, ClothingType type,
                                         const std::string& category, int n, Price price = 100,
                                         Occasion occasion = Occasion::casual) {
  std::vector<PlacedItem> out;
  for (int i = 0; i < n; ++i) {
    std::string id = prefix + (i < 10 ? "0" : "") + std::to_string(i);
    out.push_back({make_item(id, type, category, price, occasion), static_cast<double>(i)});
  }
  return out;
}

// 30 top-, 6 bottom- and 4 foot-wear items on lines, one category each.
// The query anchors at the first item of each line with m = (15, 3, 2), so
// round k retrieves the k-th block of every line in position order.
struct Walkthrough {
  SmallWorld world;
  PreferenceQuery query;
  PairTableModel model;
};

inline std::string line_id(const std::string& prefix, int i) {
  return prefix + (i < 10 ? "0" : "") + std::to_string(i);
}

// Round 1 admits 60 of its 90 combinations. Round 2 admits 4 outfits for
// each of its first 7 top-wear ranks, none for the 8th, and the 30th outfit
// at its 50th combination.
inline Walkthrough walkthrough() {
  std::vector<PlacedItem> placed = item_line("tw", ClothingType::top_wear, "shirt", 30);
  for (auto& p : item_line("bw", ClothingType::bottom_wear, "jeans", 6)) placed.push_back(p);
  for (auto& p : item_line("fw", ClothingType::foot_wear, "trainer", 4)) placed.push_back(p);
  Walkthrough w{small_world(placed), {}, PairTableModel(0.9, 0.1)};
  const std::array<std::string, kNumTypes> anchors = {"tw00", "bw00", "fw00"};
  const std::array<std::size_t, kNumTypes> m = {15, 3, 2};
  w.query.occasion = Occasion::casual;
  for (ClothingType t : kClothingTypes) {
    auto& p = w.query[t];
    p.chosen = {anchors[index_of(t)]};
    p.count = m[index_of(t)];
    p.price_lo = 1;
    p.price_hi = 100000;
  }
  auto& model = w.model;
  for (int b = 0; b < 6; ++b) {
    for (int f = 0; f < 4; ++f) model.allow(line_id("bw", b), line_id("fw", f));
  }
  for (int t = 0; t < 15; ++t) {
    for (int b = 0; b < 3; ++b) model.allow(line_id("tw", t), line_id("bw", b));
  }
  for (int t = 0; t < 10; ++t) {
    for (int f = 0; f < 2; ++f) model.allow(line_id("tw", t), line_id("fw", f));
  }
  for (int t = 15; t < 30; ++t) {
    for (int f = 2; f < 4; ++f) model.allow(line_id("tw", t), line_id("fw", f));
  }
  for (int t = 15; t < 22; ++t) {
    for (int b = 3; b < 5; ++b) model.allow(line_id("tw", t), line_id("bw", b));
  }
  model.allow("tw23", "bw03");
  return w;
}

}  // namespace boxrec::testing
