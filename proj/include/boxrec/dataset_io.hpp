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

// File formats shared by the CLI and the service.
//
//   pairs (JSON lines)   {"a": id, "b": id, "label": 0|1}
//   query (JSON)         {"occasion": "casual",
//                         "types": {"tw": {"chosen": [...], "price_lo": 0,
//                                          "price_hi": 2000, "m": 15}, ...}}
//   test set (JSON)      [{"items": [tw, bw, fw], "label": 0|1,
//                          "mismatch": ["bw"]            (optional) or
//                          "pair_labels": {"tw-bw": 1, ...} (optional)}]

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxrec/catalog.hpp"
#include "boxrec/metrics.hpp"
#include "boxrec/retrieval.hpp"
#include "boxrec/training.hpp"

namespace boxrec {

/// Reads labelled pairs and orients each so its first id has the pair
/// type's first clothing type. Throws with the line number on bad rows.
PairDataset read_pairs_jsonl(const std::filesystem::path& path, PairType pair,
                             const Catalog& catalog);
void write_pairs_jsonl(const PairDataset& data, const std::filesystem::path& path);

PreferenceQuery query_from_json(const nlohmann::json& j);
nlohmann::json query_to_json(const PreferenceQuery& q);

std::vector<OutfitCase> testset_from_json(const nlohmann::json& j);
nlohmann::json testset_to_json(const std::vector<OutfitCase>& cases);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace boxrec
