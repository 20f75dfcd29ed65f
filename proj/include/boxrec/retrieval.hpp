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

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boxrec/catalog.hpp"
#include "boxrec/features.hpp"

namespace boxrec {

/// ||u - v||_2. Throws on dimension mismatch.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar euclidean_distance(const Eigen::MatrixBase<DerivedU>& u,
                                             const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != v.size()) {
    throw Error("euclidean_distance: dimension mismatch (" + std::to_string(u.size()) +
                " vs " + std::to_string(v.size()) + ")");
  }
  return (u - v).norm();
}

/// Per-type part of a user's preferences. The price interval is half-open.
struct TypePreference {
  std::vector<std::string> chosen;
  Price price_lo = 0;
  Price price_hi = 0;
  std::size_t count = 1;  // m_t
};

/// Default m_t per clothing type (tw, bw, fw).
inline constexpr std::array<std::size_t, kNumTypes> kDefaultPreferredCounts = {15, 3, 2};

struct PreferenceQuery {
  Occasion occasion = Occasion::casual;
  std::array<TypePreference, kNumTypes> types;

  TypePreference& operator[](ClothingType t) { return types[index_of(t)]; }
  const TypePreference& operator[](ClothingType t) const { return types[index_of(t)]; }

  /// Throws when lo >= hi, m_t == 0, a chosen list is empty, or a chosen
  /// item is unknown or of the wrong type.
  void validate(const Catalog& catalog) const;
};

/// A catalog plus a set of excluded ids. Cheap value type; the catalog is
/// borrowed and must outlive the view.
class CatalogView {
 public:
  explicit CatalogView(const Catalog& catalog) : catalog_(&catalog) {}

  const Catalog& catalog() const { return *catalog_; }
  bool excluded(const std::string& id) const { return excluded_.count(id) > 0; }
  const std::set<std::string>& excluded_ids() const { return excluded_; }

  friend CatalogView exclude(CatalogView view, const std::set<std::string>& ids);

 private:
  const Catalog* catalog_;
  std::set<std::string> excluded_;
};

/// Returns a new view where the given ids never surface again.
CatalogView exclude(CatalogView view, const std::set<std::string>& ids);

struct RankedItem {
  const Item* item = nullptr;
  double distance = 0.0;
};

/// Retrieval of preferred items of one type: keep items whose category is
/// among the chosen items' categories, whose price lies in [lo, hi) and whose
/// occasion matches; rank by the minimum distance to a chosen item of the
/// same category (ties by id) and keep the first m_t.
std::vector<RankedItem> rpi(const CatalogView& view, const FeatureStore& features,
                            Occasion occasion, const TypePreference& pref, ClothingType t);

}  // namespace boxrec
