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
#include "boxrec/types.hpp"

namespace boxrec {

std::string_view short_name(ClothingType t) {
  switch (t) {
    case ClothingType::top_wear:
      return "tw";
    case ClothingType::bottom_wear:
      return "bw";
    case ClothingType::foot_wear:
      return "fw";
  }
  throw Error("invalid clothing type");
}

std::string_view long_name(ClothingType t) {
  switch (t) {
    case ClothingType::top_wear:
      return "top_wear";
    case ClothingType::bottom_wear:
      return "bottom_wear";
    case ClothingType::foot_wear:
      return "foot_wear";
  }
  throw Error("invalid clothing type");
}

ClothingType parse_clothing_type(std::string_view s) {
  for (ClothingType t : kClothingTypes) {
    if (s == short_name(t) || s == long_name(t)) return t;
  }
  // Hyphenated spelling shows up in hand-written files.
  if (s == "top-wear") return ClothingType::top_wear;
  if (s == "bottom-wear") return ClothingType::bottom_wear;
  if (s == "foot-wear") return ClothingType::foot_wear;
  throw Error("unknown clothing type '" + std::string(s) + "'");
}

std::string_view to_string(Occasion o) {
  return o == Occasion::formal ? "formal" : "casual";
}

Occasion parse_occasion(std::string_view s) {
  if (s == "formal") return Occasion::formal;
  if (s == "casual") return Occasion::casual;
  throw Error("unknown occasion '" + std::string(s) + "'");
}

PairType::PairType(ClothingType a, ClothingType b) {
  if (a == b) throw Error("pair type needs two distinct clothing types");
  if (is_canonical_order(a, b)) {
    first_ = a;
    second_ = b;
  } else {
    first_ = b;
    second_ = a;
  }
}

std::string PairType::name() const {
  return std::string(short_name(first_)) + "-" + std::string(short_name(second_));
}

PairType PairType::parse(std::string_view s) {
  const auto dash = s.find('-');
  if (dash == std::string_view::npos) {
    throw Error("pair type must look like 'tw-bw', got '" + std::string(s) + "'");
  }
  return PairType(parse_clothing_type(s.substr(0, dash)),
                  parse_clothing_type(s.substr(dash + 1)));
}

}  // namespace boxrec
