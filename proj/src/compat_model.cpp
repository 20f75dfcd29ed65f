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
#include "boxrec/compat_model.hpp"

#include <algorithm>
#include <vector>

#include "boxrec/training.hpp"

namespace boxrec {

void DecoderSet::add(Decoder decoder) {
  decoder.check_shapes();
  const PairType pair = decoder.pair;
  decoders_.insert_or_assign(pair, std::move(decoder));
}

const Decoder& DecoderSet::at(PairType pair) const {
  auto it = decoders_.find(pair);
  if (it == decoders_.end()) throw Error("no decoder loaded for pair type " + pair.name());
  return it->second;
}

Eigen::Vector2d DecoderSet::probability(const Item& a, const Item& b) const {
  return pair_probability(a, b, *features_, *vocabulary_, at(PairType(a.type, b.type)));
}

DecoderSet DecoderSet::load_dir(const std::filesystem::path& dir, const FeatureStore& features,
                                const Vocabulary& vocabulary) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error("checkpoint directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".ckpt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  DecoderSet set(features, vocabulary);
  for (const auto& f : files) {
    Checkpoint ckpt = load_checkpoint(f);
    if (ckpt.vocab_hash != vocabulary.hash()) {
      throw Error("checkpoint " + f.string() + " was trained on a different vocabulary");
    }
    for (auto& d : ckpt.decoders) set.add(std::move(d));
  }
  return set;
}

void PairTableModel::allow(const std::string& a, const std::string& b) {
  allowed_.emplace(std::min(a, b), std::max(a, b));
}

Eigen::Vector2d PairTableModel::probability(const Item& a, const Item& b) const {
  const bool ok = allowed_.count({std::min(a.id, b.id), std::max(a.id, b.id)}) > 0;
  const double p = ok ? p_match_ : p_mismatch_;
  return {1.0 - p, p};
}

}  // namespace boxrec
