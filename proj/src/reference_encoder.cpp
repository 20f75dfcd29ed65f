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
#include "boxrec/reference_encoder.hpp"

#include <numeric>
#include <vector>

#include "boxrec/random.hpp"

namespace boxrec {

const FeatureMap& encode_image(const Item& item, const FeatureStore& features) {
  if (!features.contains(item.feature_ref)) {
    throw Error("no feature map stored for item '" + item.id + "'");
  }
  const FeatureMap& map = features.at(item.feature_ref).map;
  if (map.rows() != features.dims().patches || map.cols() != features.dims().channels) {
    throw Error("feature map of item '" + item.id + "' has the wrong shape");
  }
  return map;
}

FeatureStore encode_catalog(const Catalog& catalog, const ImageEncoder& encoder) {
  FeatureStore store(encoder.dims());
  for (const auto& [id, item] : catalog.items()) {
    if (!store.contains(item.feature_ref)) store.insert(item.feature_ref, encoder.encode(item));
  }
  return store;
}

void SyntheticImageSpec::validate() const {
  if (patches <= 0 || pixels_per_patch <= 0 || hue_bins <= 0 || intensity_bins <= 0) {
    throw Error("synthetic image: sizes must be positive");
  }
  if (palette <= 0 || palette > hue_bins) throw Error("synthetic image: palette must fit the hue bins");
  if (min_covered <= 0 || min_covered > patches) throw Error("synthetic image: bad coverage");
  if (dominance < 0.0 || dominance > 1.0) throw Error("synthetic image: dominance outside [0, 1]");
}

HistogramEncoder::HistogramEncoder(SyntheticImageSpec spec, std::map<std::string, int> dominant_hue,
                                   std::uint64_t seed)
    : spec_(spec), hue_(std::move(dominant_hue)), seed_(seed) {
  spec_.validate();
  for (const auto& [id, h] : hue_) {
    if (h < 0 || h >= spec_.palette) throw Error("dominant hue of '" + id + "' is outside the palette");
  }
}

FeatureDims HistogramEncoder::dims() const {
  return {spec_.channels(), spec_.patches, spec_.channels()};
}

ItemFeatures HistogramEncoder::encode(const Item& item) const {
  auto it = hue_.find(item.id);
  if (it == hue_.end()) throw Error("no dominant hue for item '" + item.id + "'");

  // FNV-1a of the id keeps the image independent of catalog order.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : item.id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  Rng rng(seed_ ^ h);

  const int bins = spec_.hue_bins;
  const int dominant_bin = it->second * bins / spec_.palette;

  std::vector<int> order(static_cast<std::size_t>(spec_.patches));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const int covered = spec_.min_covered +
                      static_cast<int>(rng.below(static_cast<std::uint64_t>(spec_.patches - spec_.min_covered + 1)));
  std::vector<bool> on_item(static_cast<std::size_t>(spec_.patches), false);
  for (int k = 0; k < covered; ++k) on_item[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = true;

  ItemFeatures out;
  out.map = FeatureMap::Zero(spec_.patches, spec_.channels());
  const double w = 1.0 / spec_.pixels_per_patch;
  for (int p = 0; p < spec_.patches; ++p) {
    for (int px = 0; px < spec_.pixels_per_patch; ++px) {
      int intensity;
      if (on_item[static_cast<std::size_t>(p)]) {
        const int hue = rng.uniform() < spec_.dominance
                            ? dominant_bin
                            : static_cast<int>(rng.below(static_cast<std::uint64_t>(bins)));
        out.map(p, hue) += w;
        intensity = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec_.intensity_bins)));
      } else {
        // gray: no hue, mid intensity
        intensity = spec_.intensity_bins / 2;
      }
      out.map(p, bins + intensity) += w;
    }
  }
  out.global = out.map.colwise().mean().transpose();
  return out;
}

}  // namespace boxrec
