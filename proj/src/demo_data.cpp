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
#include "boxrec/demo_data.hpp"

#include <array>
#include <cstdio>
#include <set>

#include "boxrec/dataset_io.hpp"
#include "boxrec/random.hpp"

namespace boxrec {

namespace {

constexpr std::array<const char*, 6> kAdjectives = {"classic", "slim",   "regular",
                                                    "relaxed", "cotton", "everyday"};

const Item& pick(const std::vector<const Item*>& items, Rng& rng) {
  return *items[static_cast<std::size_t>(rng.below(items.size()))];
}

// Items of type t grouped by hue.
std::vector<std::vector<const Item*>> by_hue(const Catalog& catalog, ClothingType t,
                                             const std::map<std::string, int>& hue, int palette) {
  std::vector<std::vector<const Item*>> groups(static_cast<std::size_t>(palette));
  for (const Item* item : items_of(catalog, t)) {
    groups[static_cast<std::size_t>(hue.at(item->id))].push_back(item);
  }
  for (const auto& g : groups) {
    if (g.empty()) throw Error("demo catalog too small: a hue has no " + std::string(long_name(t)));
  }
  return groups;
}

}  // namespace

std::pair<Price, Price> demo_price_range(ClothingType t) {
  switch (t) {
    case ClothingType::top_wear:
      return {300, 2000};
    case ClothingType::bottom_wear:
      return {500, 3000};
    case ClothingType::foot_wear:
      return {800, 5000};
  }
  return {1, 2};
}

DemoData make_demo(const DemoOptions& options) {
  options.image.validate();
  if (options.items_per_bucket == 0) throw Error("demo: items_per_bucket must be positive");
  Rng rng(options.seed);
  const int palette = options.image.palette;
  const CategoryConfig categories = CategoryConfig::defaults();

  DemoData data;
  std::vector<Item> items;
  for (ClothingType t : kClothingTypes) {
    const auto [lo, hi] = demo_price_range(t);
    int serial = 0;
    for (Occasion occ : {Occasion::casual, Occasion::formal}) {
      for (const std::string& category : categories.categories(t)) {
        for (std::size_t k = 0; k < options.items_per_bucket; ++k) {
          char id[32];
          std::snprintf(id, sizeof id, "%s-%04d", std::string(short_name(t)).c_str(), ++serial);
          Item item;
          item.id = id;
          item.type = t;
          item.category = category;
          item.occasion = occ;
          item.price = lo + static_cast<Price>(rng.below(static_cast<std::uint64_t>(hi - lo)));
          item.title = std::string(kAdjectives[rng.below(kAdjectives.size())]) + " " + category;
          data.hue[item.id] = static_cast<int>(rng.below(static_cast<std::uint64_t>(palette)));
          items.push_back(std::move(item));
        }
      }
    }
  }
  data.catalog = Catalog::build(std::move(items), categories);
  data.features = encode_catalog(data.catalog, HistogramEncoder(options.image, data.hue, options.seed));

  std::array<std::vector<std::vector<const Item*>>, kNumTypes> groups;
  std::array<std::vector<const Item*>, kNumTypes> all;
  for (ClothingType t : kClothingTypes) {
    groups[index_of(t)] = by_hue(data.catalog, t, data.hue, palette);
    all[index_of(t)] = items_of(data.catalog, t);
  }
  auto other_hue = [&](int h) {
    return (h + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(palette - 1)))) % palette;
  };

  for (const PairType& pt : canonical_pair_types()) {
    PairDataset ds;
    ds.pair = pt;
    std::set<std::pair<std::string, std::string>> seen;
    const auto& first = all[index_of(pt.first())];
    const std::size_t capacity = first.size() * all[index_of(pt.second())].size();
    if (palette < 2 || 2 * options.pairs_per_class > capacity) {
      throw Error("demo: cannot draw " + std::to_string(options.pairs_per_class) +
                  " pairs per class for " + pt.name());
    }
    while (ds.positives.size() < options.pairs_per_class || ds.negatives.size() < options.pairs_per_class) {
      const Item& a = pick(first, rng);
      const bool positive = ds.positives.size() < options.pairs_per_class &&
                            (ds.negatives.size() >= options.pairs_per_class || rng.below(2) == 0);
      const int ha = data.hue.at(a.id);
      const int hb = positive ? ha : other_hue(ha);
      const Item& b = pick(groups[index_of(pt.second())][static_cast<std::size_t>(hb)], rng);
      if (!seen.emplace(a.id, b.id).second) continue;
      (positive ? ds.positives : ds.negatives).emplace_back(a.id, b.id);
    }
    data.pairs.push_back(std::move(ds));
  }

  for (std::size_t n = 0; n < options.test_outfits; ++n) {
    const int base = static_cast<int>(rng.below(static_cast<std::uint64_t>(palette)));
    const bool positive = n % 2 == 0;
    MismatchFlags flags{};
    if (!positive) flags[static_cast<std::size_t>(rng.below(kNumTypes))] = true;
    OutfitCase c;
    for (ClothingType t : kClothingTypes) {
      const int h = flags[index_of(t)] ? other_hue(base) : base;
      c.items[index_of(t)] = pick(groups[index_of(t)][static_cast<std::size_t>(h)], rng).id;
    }
    c.label = positive ? 1 : 0;
    c.pair_labels = derive_pair_labels(flags);
    data.testset.push_back(std::move(c));
  }
  return data;
}

void write_demo(const DemoData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "catalog.jsonl", data.catalog.to_jsonl());
  write_features_binary(data.features, dir / "features.bin");
  for (const auto& ds : data.pairs) write_pairs_jsonl(ds, dir / ("pairs-" + ds.pair.name() + ".jsonl"));
  write_text_file(dir / "testset.json", testset_to_json(data.testset).dump(1) + "\n");
  write_text_file(dir / "hues.json", nlohmann::json(data.hue).dump(1) + "\n");
}

}  // namespace boxrec
