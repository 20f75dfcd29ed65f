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
#include "boxrec/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "boxrec/catalog.hpp"
#include "boxrec/compat_model.hpp"
#include "boxrec/outfit_engine.hpp"

namespace boxrec {

double hit_ratio(std::size_t box_products, std::size_t hits) {
  if (box_products == 0) throw Error("hit_ratio: empty box");
  if (hits > box_products) throw Error("hit_ratio: more hits than products");
  return static_cast<double>(hits) / static_cast<double>(box_products);
}

double mean_hit_ratio(std::span<const double> hit_ratios) {
  if (hit_ratios.empty()) throw Error("mean_hit_ratio: no hit ratios");
  return std::accumulate(hit_ratios.begin(), hit_ratios.end(), 0.0) /
         static_cast<double>(hit_ratios.size());
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error("auc: labels must be 0 or 1");
    n_pos += static_cast<std::size_t>(y);
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("auc: both classes must be present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of (1-based, tie-averaged) ranks of the positives.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) rank_sum += mid_rank;
    }
    i = j + 1;
  }
  const double pos = static_cast<double>(n_pos);
  const double u = rank_sum - pos * (pos + 1.0) / 2.0;
  return u / (pos * static_cast<double>(n_neg));
}

std::array<int, 3> derive_pair_labels(const MismatchFlags& mismatch) {
  std::array<int, 3> labels{};
  const auto& pairs = canonical_pair_types();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const bool bad = mismatch[index_of(pairs[k].first())] || mismatch[index_of(pairs[k].second())];
    labels[k] = bad ? 0 : 1;
  }
  return labels;
}

OsfReport report_osf(std::span<const OutfitCase> cases, const Catalog& catalog,
                     const CompatibilityModel& model) {
  if (cases.empty()) throw Error("report_osf: empty test set");
  const auto& pairs = canonical_pair_types();

  OsfReport report;
  std::array<std::vector<double>, 3> pair_scores;
  std::array<std::vector<int>, 3> pair_truth;
  std::vector<double> c1_scores, c2_scores;
  std::vector<int> outfit_labels;
  std::size_t correct = 0;
  std::size_t missing_pair_labels = 0;

  for (const auto& c : cases) {
    Outfit outfit = make_outfit(catalog, c.items);
    const OutfitScore s = score_outfit(outfit, catalog, model);
    c1_scores.push_back(s.c1);
    c2_scores.push_back(static_cast<double>(s.c2));
    outfit_labels.push_back(c.label);
    if (s.c2 == c.label) ++correct;
    if (!c.pair_labels) {
      ++missing_pair_labels;
      continue;
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      pair_scores[k].push_back(s.pairs[k].p_match);
      pair_truth[k].push_back((*c.pair_labels)[k]);
    }
  }

  if (missing_pair_labels > 0) {
    report.notices.push_back(std::to_string(missing_pair_labels) +
                             " outfit(s) lack per-pair labels; pairwise AUC uses the rest");
  }
  std::vector<double> pairwise;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& truth = pair_truth[k];
    const bool both = std::find(truth.begin(), truth.end(), 0) != truth.end() &&
                      std::find(truth.begin(), truth.end(), 1) != truth.end();
    if (!both) {
      report.notices.push_back("pairwise AUC for " + pairs[k].name() +
                               " skipped: labels do not contain both classes");
      continue;
    }
    const double a = auc(pair_scores[k], truth);
    report.pairwise_auc[pairs[k].name()] = a;
    pairwise.push_back(a);
  }
  if (pairwise.size() == pairs.size()) {
    report.ap_auc = std::accumulate(pairwise.begin(), pairwise.end(), 0.0) / 3.0;
  } else {
    report.notices.push_back("AP AUC skipped: not every pair type has a pairwise AUC");
  }
  report.c1_auc = auc(c1_scores, outfit_labels);
  report.c2_auc = auc(c2_scores, outfit_labels);
  report.accuracy = static_cast<double>(correct) / static_cast<double>(cases.size());
  return report;
}

}  // namespace boxrec
