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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boxrec/types.hpp"

namespace boxrec {

class CompatibilityModel;
class Catalog;

/// hits / products. Throws for an empty box or hits > products.
double hit_ratio(std::size_t box_products, std::size_t hits);

/// Arithmetic mean of per-box hit ratios. Throws for an empty list.
double mean_hit_ratio(std::span<const double> hit_ratios);

/// Exact ROC-AUC via the rank-sum (Mann-Whitney) statistic with mid-ranks, so
/// tied positive/negative scores count one half. Labels are 0/1 and both
/// classes must be present.
double auc(std::span<const double> scores, std::span<const int> labels);

/// One user feedback event on an item or an outfit of a recommended box.
struct Feedback {
  std::string session;
  std::string product;
  bool liked = false;
  std::int64_t timestamp = 0;  // unix milliseconds
};

/// Which items of a three-item outfit annotators flagged as a mismatch.
using MismatchFlags = std::array<bool, kNumTypes>;

/// Pair labels from outfit-level mismatch flags: a pair is compatible iff
/// neither of its two items is flagged. Indexed like canonical_pair_types().
std::array<int, 3> derive_pair_labels(const MismatchFlags& mismatch);

/// Annotated test outfit.
struct OutfitCase {
  std::array<std::string, kNumTypes> items;  // tw, bw, fw ids
  int label = 0;
  /// Per-pair ground truth, indexed like canonical_pair_types().
  std::optional<std::array<int, 3>> pair_labels;
};

struct OsfReport {
  std::map<std::string, double> pairwise_auc;  // keyed "tw-bw" etc.
  std::optional<double> ap_auc;
  double c1_auc = 0.0;
  double c2_auc = 0.0;
  double accuracy = 0.0;  // fraction in [0, 1]
  std::vector<std::string> notices;
};

/// Outfit-scoring evaluation: per-pair AUCs from p(match), their mean, AUC of
/// the mean-probability and of the AND-aggregated outfit scores, and accuracy
/// of the AND-aggregated prediction.
OsfReport report_osf(std::span<const OutfitCase> cases, const Catalog& catalog,
                     const CompatibilityModel& model);

}  // namespace boxrec
