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
#include "boxrec/retrieval.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace boxrec {

void PreferenceQuery::validate(const Catalog& catalog) const {
  for (ClothingType t : kClothingTypes) {
    const auto& p = (*this)[t];
    const std::string tn(short_name(t));
    if (p.price_lo >= p.price_hi) {
      throw Error("price range for " + tn + " must satisfy lo < hi");
    }
    if (p.count == 0) throw Error("m_" + tn + " must be at least 1");
    if (p.chosen.empty()) throw Error("no chosen items for " + tn);
    for (const auto& id : p.chosen) {
      if (catalog.at(id).type != t) {
        throw Error("chosen item '" + id + "' is not of type " + std::string(long_name(t)));
      }
    }
  }
}

CatalogView exclude(CatalogView view, const std::set<std::string>& ids) {
  view.excluded_.insert(ids.begin(), ids.end());
  return view;
}

std::vector<RankedItem> rpi(const CatalogView& view, const FeatureStore& features,
                            Occasion occasion, const TypePreference& pref, ClothingType t) {
  const Catalog& catalog = view.catalog();

  // category -> global vectors of the chosen anchors in that category
  std::map<std::string, std::vector<const Eigen::VectorXd*>> anchors;
  for (const auto& id : pref.chosen) {
    const Item& chosen = catalog.at(id);
    if (chosen.type != t) {
      throw Error("chosen item '" + id + "' is not of type " + std::string(long_name(t)));
    }
    anchors[chosen.category].push_back(&features.at(chosen.feature_ref).global);
  }

  std::vector<RankedItem> pool;
  for (const auto& [category, vectors] : anchors) {
    for (const auto& id : catalog.bucket(t, category, occasion)) {
      if (view.excluded(id)) continue;
      const Item& item = catalog.at(id);
      if (item.price < pref.price_lo || item.price >= pref.price_hi) continue;
      const auto& g = features.at(item.feature_ref).global;
      double best = std::numeric_limits<double>::infinity();
      for (const auto* anchor : vectors) best = std::min(best, euclidean_distance(g, *anchor));
      pool.push_back({&item, best});
    }
  }

  const std::size_t keep = std::min(pref.count, pool.size());
  auto by_distance_then_id = [](const RankedItem& a, const RankedItem& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.item->id < b.item->id;
  };
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                    by_distance_then_id);
  pool.resize(keep);
  return pool;
}

}  // namespace boxrec
