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

// Image encoders turn an item into a local feature map (one row per image
// patch) plus a global vector used for retrieval. Any provider that fills a
// FeatureStore works with the rest of the library; this header also ships a
// small deterministic provider over synthetic images.

#include <cstdint>
#include <map>
#include <string>

#include "boxrec/catalog.hpp"
#include "boxrec/features.hpp"

namespace boxrec {

/// The encoder contract at scoring time: the stored map of the item,
/// shape-checked against the store. Throws when the item has no record.
const FeatureMap& encode_image(const Item& item, const FeatureStore& features);

class ImageEncoder {
 public:
  virtual ~ImageEncoder() = default;
  virtual FeatureDims dims() const = 0;
  virtual ItemFeatures encode(const Item& item) const = 0;
};

/// Runs the encoder over every catalog item.
FeatureStore encode_catalog(const Catalog& catalog, const ImageEncoder& encoder);

/// A synthetic image is a grid of patches, each holding a few pixels. An
/// item covers some patches; the rest are gray background. Covered pixels
/// take the item's dominant hue with probability `dominance`, otherwise a
/// random hue. Patch features are the normalised hue histogram followed by
/// the normalised intensity histogram, so channels = hue_bins + intensity_bins.
struct SyntheticImageSpec {
  int patches = 9;
  int pixels_per_patch = 16;
  int hue_bins = 12;
  int intensity_bins = 4;
  int palette = 4;  // distinct dominant hues, spread evenly over the bins
  int min_covered = 4;
  double dominance = 0.6;

  int channels() const { return hue_bins + intensity_bins; }
  void validate() const;
};

class HistogramEncoder : public ImageEncoder {
 public:
  /// `dominant_hue` maps item id to a palette index in [0, palette).
  HistogramEncoder(SyntheticImageSpec spec, std::map<std::string, int> dominant_hue,
                   std::uint64_t seed);

  FeatureDims dims() const override;
  /// Deterministic in (seed, item id). Global vector = mean of the patches.
  ItemFeatures encode(const Item& item) const override;

  const SyntheticImageSpec& spec() const { return spec_; }

 private:
  SyntheticImageSpec spec_;
  std::map<std::string, int> hue_;
  std::uint64_t seed_;
};

}  // namespace boxrec
