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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace boxrec {

/// Thrown for every contract violation surfaced to callers (bad input files,
/// unknown ids, shape mismatches, illegal state transitions).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prices are integral minor currency units.
using Price = std::int64_t;

enum class ClothingType : int { top_wear = 0, bottom_wear = 1, foot_wear = 2 };

inline constexpr std::array<ClothingType, 3> kClothingTypes = {
    ClothingType::top_wear, ClothingType::bottom_wear, ClothingType::foot_wear};
inline constexpr std::size_t kNumTypes = kClothingTypes.size();

inline constexpr std::size_t index_of(ClothingType t) {
  return static_cast<std::size_t>(t);
}

/// Short form ("tw", "bw", "fw").
std::string_view short_name(ClothingType t);
std::string_view long_name(ClothingType t);
/// Accepts both the short and the long spelling.
ClothingType parse_clothing_type(std::string_view s);

enum class Occasion : int { formal = 0, casual = 1 };

std::string_view to_string(Occasion o);
Occasion parse_occasion(std::string_view s);

/// Unordered pair of distinct clothing types. Always stored canonically
/// (lower enum value first), so (bw, tw) and (tw, bw) compare equal.
class PairType {
 public:
  PairType(ClothingType a, ClothingType b);

  ClothingType first() const { return first_; }
  ClothingType second() const { return second_; }
  /// True when (a, b) was given in canonical order.
  static bool is_canonical_order(ClothingType a, ClothingType b) {
    return index_of(a) < index_of(b);
  }

  /// "tw-bw" style.
  std::string name() const;
  static PairType parse(std::string_view s);

  friend bool operator==(const PairType&, const PairType&) = default;
  friend auto operator<=>(const PairType&, const PairType&) = default;

 private:
  ClothingType first_;
  ClothingType second_;
};

/// The three pair types of a three-type outfit, in evaluation order.
inline const std::array<PairType, 3>& canonical_pair_types() {
  static const std::array<PairType, 3> pairs = {
      PairType(ClothingType::top_wear, ClothingType::bottom_wear),
      PairType(ClothingType::bottom_wear, ClothingType::foot_wear),
      PairType(ClothingType::top_wear, ClothingType::foot_wear)};
  return pairs;
}

}  // namespace boxrec
