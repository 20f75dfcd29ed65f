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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "boxrec/catalog.hpp"
#include "boxrec/decoder.hpp"
#include "boxrec/features.hpp"

namespace boxrec {

/// Probability floor inside the log of the likelihood term.
inline constexpr double kProbabilityFloor = 1e-12;

struct HyperParams {
  DecoderShape shape;  // vocab is filled in from the catalog at training time
  double lambda_reg = 1e-5;
  double lambda_vse = 1e-2;
  double learning_rate = 1e-3;
  double lr_decay_factor = 10.0;
  int lr_decay_every_epochs = 5;
  double clip_lo = -5.0;
  double clip_hi = 5.0;
  std::size_t batch_size = 32;
  int epochs = 50;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;

  /// Laptop-sized network: D1=16, M=9, A1=24, B1=32; lr 1e-2 decayed
  /// tenfold every 20 epochs.
  static HyperParams desk();
  /// Full-size network: D1=768, M=289, A1=900, B1=1024; lr 1e-3 decayed
  /// tenfold every 5 epochs.
  static HyperParams full();

  void validate() const;
  /// Learning rate in effect during a 0-based epoch (step decay).
  double learning_rate_at(int epoch) const;
};

void to_json(nlohmann::json& j, const HyperParams& h);
/// Missing keys keep their desk defaults.
void from_json(const nlohmann::json& j, HyperParams& h);

/// Labelled training pairs of one pair type. The first id of every pair is
/// of the pair type's first clothing type.
struct PairDataset {
  PairType pair{ClothingType::top_wear, ClothingType::bottom_wear};
  std::vector<std::pair<std::string, std::string>> positives;
  std::vector<std::pair<std::string, std::string>> negatives;

  std::size_t size() const { return positives.size() + negatives.size(); }
  /// Throws on unknown ids, wrongly typed members, or a pair in both lists.
  void validate(const Catalog& catalog) const;
};

/// Deterministic split; `validation_fraction` of each class goes to the
/// second result.
std::pair<PairDataset, PairDataset> split_dataset(const PairDataset& data,
                                                  double validation_fraction,
                                                  std::uint64_t seed);

/// Decoder-ready view of one labelled pair.
struct PairExample {
  const FeatureMap* local_a = nullptr;
  const FeatureMap* local_b = nullptr;
  std::vector<std::size_t> tokens_a;
  std::vector<std::size_t> tokens_b;
  int label = 0;
};

std::vector<PairExample> make_examples(const PairDataset& data, const Catalog& catalog,
                                       const FeatureStore& features);

struct LossTerms {
  double compat = 0.0;  // summed negative log-likelihood of the true labels
  double reg = 0.0;     // squared L2 norm of all parameters
  double vse = 0.0;     // summed visual/text embedding distance
  double total = 0.0;   // compat + lambda_reg * reg + lambda_vse * vse
};

/// Loss over a batch; when `gradient` is non-null it receives dL/dtheta with
/// the same shapes as `params`.
LossTerms loss_total(std::span<const PairExample> batch, const Decoder& params,
                     double lambda_reg, double lambda_vse, Decoder* gradient = nullptr);

/// Uniform Xavier/Glorot initialisation.
Decoder xavier_init(PairType pair, const DecoderShape& shape, std::uint64_t seed);

struct EpochLog {
  int epoch = 0;
  double learning_rate = 0.0;
  double train_loss = 0.0;  // mean total loss per example
  std::optional<double> validation_auc;
};

struct TrainResult {
  Decoder params;
  std::vector<EpochLog> log;
};

/// Mini-batch AdamW with element-wise gradient clipping and step decay.
/// Single-threaded and bit-reproducible for a fixed seed.
TrainResult train_decoder(PairType pair, std::span<const PairExample> train,
                          std::span<const PairExample> validation, std::size_t vocab_size,
                          const HyperParams& hyper);

TrainResult train_decoder(const PairDataset& train, const PairDataset& validation,
                          const Catalog& catalog, const FeatureStore& features,
                          const HyperParams& hyper);

/// ROC-AUC of p(match) against the labels.
double examples_auc(std::span<const PairExample> examples, const Decoder& params);

struct Checkpoint {
  static constexpr int kVersion = 1;
  HyperParams hyper;
  std::string vocab_hash;
  std::vector<Decoder> decoders;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace boxrec
