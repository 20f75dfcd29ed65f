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
#include "boxrec/decoder.hpp"

#include <algorithm>

namespace boxrec {

std::vector<std::size_t> token_indices(const Item& item, const Vocabulary& vocabulary) {
  std::vector<std::size_t> idx;
  idx.reserve(item.title_tokens.size());
  for (const auto& t : item.title_tokens) idx.push_back(vocabulary.index(t));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

Eigen::Vector2d pair_probability(const Item& a, const Item& b, const FeatureStore& features,
                                 const Vocabulary& vocabulary, const Decoder& decoder) {
  if (a.type != decoder.pair.first() || b.type != decoder.pair.second()) {
    throw Error("decoder for " + decoder.pair.name() + " cannot score (" +
                std::string(short_name(a.type)) + ", " + std::string(short_name(b.type)) +
                ")");
  }
  if (static_cast<std::size_t>(decoder.text_embed.cols()) != vocabulary.size()) {
    throw Error("decoder vocabulary size differs from catalog vocabulary");
  }
  const auto ta = token_indices(a, vocabulary);
  const auto tb = token_indices(b, vocabulary);
  return forward_pair(features.at(a.feature_ref).map, features.at(b.feature_ref).map,
                      std::span<const std::size_t>(ta), std::span<const std::size_t>(tb),
                      decoder)
      .prob;
}

int pairwise_score(const Item& a, const Item& b, const FeatureStore& features,
                   const Vocabulary& vocabulary, const Decoder& decoder) {
  return binary_score(pair_probability(a, b, features, vocabulary, decoder));
}

}  // namespace boxrec
