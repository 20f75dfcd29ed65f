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

// Synthetic desk-scale dataset: a catalog of items whose images share a
// hidden dominant hue, histogram features from HistogramEncoder, labelled
// pairs per pair type (compatible iff same hue) and an annotated outfit
// test set. Titles carry no hue information.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "boxrec/catalog.hpp"
#include "boxrec/features.hpp"
#include "boxrec/metrics.hpp"
#include "boxrec/reference_encoder.hpp"
#include "boxrec/training.hpp"

namespace boxrec {

struct DemoOptions {
  std::size_t items_per_bucket = 12;  // per (type, category, occasion)
  std::size_t pairs_per_class = 250;  // positives and negatives per pair type
  std::size_t test_outfits = 200;
  SyntheticImageSpec image;
  std::uint64_t seed = 7;
};

struct DemoData {
  Catalog catalog;
  std::map<std::string, int> hue;  // hidden ground truth
  FeatureStore features;
  std::vector<PairDataset> pairs;  // canonical_pair_types() order
  std::vector<OutfitCase> testset;
};

/// Price range of generated items per clothing type, half-open.
std::pair<Price, Price> demo_price_range(ClothingType t);

DemoData make_demo(const DemoOptions& options = {});

/// Writes catalog.jsonl, features.bin, pairs-<pair>.jsonl, testset.json and
/// hues.json into `dir`.
void write_demo(const DemoData& data, const std::filesystem::path& dir);

}  // namespace boxrec
