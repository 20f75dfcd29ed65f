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
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "boxrec/catalog.hpp"
#include "boxrec/compat_model.hpp"
#include "boxrec/features.hpp"
#include "boxrec/retrieval.hpp"

namespace boxrec {

inline constexpr std::size_t kDefaultOutfitCount = 90;

/// One item per clothing type, indexed by ClothingType.
struct Outfit {
  std::array<const Item*, kNumTypes> items{};

  Price price() const;
  /// Member ids joined with '+', in type order.
  std::string key() const;
  const Item& operator[](ClothingType t) const { return *items[index_of(t)]; }
};

/// Throws unless the ids name one tw, one bw and one fw item, in that order.
Outfit make_outfit(const Catalog& catalog, const std::array<std::string, kNumTypes>& ids);

/// Logical AND of per-pair binary scores; expects one score per type pair.
int aggregate_c2(std::span<const int> scores, std::size_t expected_pairs = 3);
/// Mean of per-pair match probabilities.
double aggregate_c1(std::span<const double> probabilities);

struct PairScore {
  PairType pair{ClothingType::top_wear, ClothingType::bottom_wear};
  double p_mismatch = 0.0;
  double p_match = 0.0;
  int binary = 0;
};

struct OutfitScore {
  int c2 = 0;
  double c1 = 0.0;
  std::array<PairScore, 3> pairs;  // canonical_pair_types() order
};

/// Throws if the model lacks a decoder for any of the three pair types.
OutfitScore score_outfit(const Outfit& outfit, const Catalog& catalog,
                         const CompatibilityModel& model);

struct ScoredOutfit {
  Outfit outfit;
  OutfitScore score;
};

struct GenerationRound {
  std::array<std::size_t, kNumTypes> retrieved{};  // |I^p_t| per type
  std::size_t combinations = 0;
  std::size_t checked = 0;
  std::size_t admitted = 0;
};

struct PreferredOutfitSet {
  std::vector<ScoredOutfit> outfits;  // admission order
  /// False when some type ran out of candidates before L outfits were found.
  bool complete = false;
  std::vector<GenerationRound> rounds;
};

/// Rounds of: retrieve m_t preferred items per type, test the cartesian
/// product in (tw rank, bw rank, fw rank) order, admit outfits whose AND
/// score is 1, stop at L; otherwise exclude this round's items and retry.
PreferredOutfitSet generate_preferred_outfits(const Catalog& catalog,
                                              const FeatureStore& features,
                                              const CompatibilityModel& model,
                                              const PreferenceQuery& query,
                                              std::size_t target = kDefaultOutfitCount);

}  // namespace boxrec
