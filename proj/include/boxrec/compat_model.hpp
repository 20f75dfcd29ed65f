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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "boxrec/catalog.hpp"
#include "boxrec/decoder.hpp"
#include "boxrec/features.hpp"

namespace boxrec {

/// Source of pairwise compatibility probabilities. Implementations are
/// stateless with respect to calls and safe for concurrent use.
class CompatibilityModel {
 public:
  virtual ~CompatibilityModel() = default;

  virtual bool has(PairType pair) const = 0;
  /// (p(mismatch), p(match)) for items given in canonical pair order.
  virtual Eigen::Vector2d probability(const Item& a, const Item& b) const = 0;
};

/// The trained decoders, one per pair type.
class DecoderSet : public CompatibilityModel {
 public:
  DecoderSet(const FeatureStore& features, const Vocabulary& vocabulary)
      : features_(&features), vocabulary_(&vocabulary) {}

  /// Replaces any decoder already registered for the same pair type.
  void add(Decoder decoder);
  const Decoder& at(PairType pair) const;

  bool has(PairType pair) const override { return decoders_.count(pair) > 0; }
  Eigen::Vector2d probability(const Item& a, const Item& b) const override;

  /// Loads every *.ckpt file in `dir`. Checkpoints whose vocabulary hash
  /// differs from `vocabulary` are rejected.
  static DecoderSet load_dir(const std::filesystem::path& dir, const FeatureStore& features,
                             const Vocabulary& vocabulary);

 private:
  const FeatureStore* features_;
  const Vocabulary* vocabulary_;
  std::map<PairType, Decoder> decoders_;
};

/// Returns the same probability for every pair.
class ConstantModel : public CompatibilityModel {
 public:
  explicit ConstantModel(double p_match) : p_match_(p_match) {}
  bool has(PairType) const override { return true; }
  Eigen::Vector2d probability(const Item&, const Item&) const override {
    return {1.0 - p_match_, p_match_};
  }

 private:
  double p_match_;
};

/// Accepts exactly the listed (unordered) id pairs.
class PairTableModel : public CompatibilityModel {
 public:
  PairTableModel(double p_match = 0.9, double p_mismatch = 0.1)
      : p_match_(p_match), p_mismatch_(p_mismatch) {}

  void allow(const std::string& a, const std::string& b);
  bool has(PairType) const override { return true; }
  Eigen::Vector2d probability(const Item& a, const Item& b) const override;

 private:
  std::set<std::pair<std::string, std::string>> allowed_;
  double p_match_;
  double p_mismatch_;
};

}  // namespace boxrec
