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
#include "boxrec/outfit_engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace boxrec {

Price Outfit::price() const {
  Price total = 0;
  for (const Item* item : items) total += item->price;
  return total;
}

std::string Outfit::key() const {
  std::string k;
  for (const Item* item : items) {
    if (!k.empty()) k += '+';
    k += item->id;
  }
  return k;
}

Outfit make_outfit(const Catalog& catalog, const std::array<std::string, kNumTypes>& ids) {
  Outfit o;
  for (ClothingType t : kClothingTypes) {
    const Item& item = catalog.at(ids[index_of(t)]);
    if (item.type != t) {
      throw Error("outfit slot " + std::string(short_name(t)) + " holds '" + item.id +
                  "' of type " + std::string(long_name(item.type)));
    }
    o.items[index_of(t)] = &item;
  }
  return o;
}

int aggregate_c2(std::span<const int> scores, std::size_t expected_pairs) {
  if (scores.size() != expected_pairs) {
    throw Error("aggregate_c2: expected " + std::to_string(expected_pairs) + " pair scores, got " +
                std::to_string(scores.size()));
  }
  return std::all_of(scores.begin(), scores.end(), [](int s) { return s == 1; }) ? 1 : 0;
}

double aggregate_c1(std::span<const double> probabilities) {
  if (probabilities.empty()) throw Error("aggregate_c1: no probabilities");
  return std::accumulate(probabilities.begin(), probabilities.end(), 0.0) /
         static_cast<double>(probabilities.size());
}

OutfitScore score_outfit(const Outfit& outfit, const Catalog&, const CompatibilityModel& model) {
  const auto& pair_types = canonical_pair_types();
  OutfitScore out;
  std::array<int, 3> binaries{};
  std::array<double, 3> probs{};
  for (std::size_t k = 0; k < pair_types.size(); ++k) {
    const PairType pt = pair_types[k];
    if (!model.has(pt)) throw Error("no compatibility decoder for pair type " + pt.name());
    const Eigen::Vector2d p = model.probability(outfit[pt.first()], outfit[pt.second()]);
    out.pairs[k] = PairScore{pt, p(0), p(1), binary_score(p)};
    binaries[k] = out.pairs[k].binary;
    probs[k] = p(1);
  }
  out.c2 = aggregate_c2(binaries);
  out.c1 = aggregate_c1(probs);
  return out;
}

PreferredOutfitSet generate_preferred_outfits(const Catalog& catalog,
                                              const FeatureStore& features,
                                              const CompatibilityModel& model,
                                              const PreferenceQuery& query, std::size_t target) {
  if (target == 0) throw Error("generate_preferred_outfits: L must be at least 1");
  query.validate(catalog);
  for (const PairType& pt : canonical_pair_types()) {
    if (!model.has(pt)) throw Error("no compatibility decoder for pair type " + pt.name());
  }

  PreferredOutfitSet result;
  std::set<std::string> admitted_keys;
  CatalogView view(catalog);

  while (true) {
    std::array<std::vector<RankedItem>, kNumTypes> pools;
    GenerationRound round;
    bool exhausted = false;
    for (ClothingType t : kClothingTypes) {
      pools[index_of(t)] = rpi(view, features, query.occasion, query[t], t);
      round.retrieved[index_of(t)] = pools[index_of(t)].size();
      exhausted = exhausted || pools[index_of(t)].empty();
    }
    if (exhausted) {
      result.complete = false;
      return result;
    }
    round.combinations = pools[0].size() * pools[1].size() * pools[2].size();

    const auto& tops = pools[index_of(ClothingType::top_wear)];
    const auto& bottoms = pools[index_of(ClothingType::bottom_wear)];
    const auto& feet = pools[index_of(ClothingType::foot_wear)];
    for (const auto& tw : tops) {
      for (const auto& bw : bottoms) {
        for (const auto& fw : feet) {
          Outfit o;
          o.items = {tw.item, bw.item, fw.item};
          ++round.checked;
          OutfitScore score = score_outfit(o, catalog, model);
          if (score.c2 != 1) continue;
          if (!admitted_keys.insert(o.key()).second) {
            throw Error("internal: outfit " + o.key() + " generated twice");
          }
          result.outfits.push_back({o, score});
          ++round.admitted;
          if (result.outfits.size() == target) {
            result.rounds.push_back(round);
            result.complete = true;
            return result;
          }
        }
      }
    }
    result.rounds.push_back(round);

    std::set<std::string> used;
    for (const auto& pool : pools) {
      for (const auto& r : pool) used.insert(r.item->id);
    }
    view = exclude(std::move(view), used);
  }
}

}  // namespace boxrec
