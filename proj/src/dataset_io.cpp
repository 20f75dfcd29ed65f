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
#include "boxrec/dataset_io.hpp"

#include <fstream>
#include <sstream>

namespace boxrec {

using nlohmann::json;

PairDataset read_pairs_jsonl(const std::filesystem::path& path, PairType pair,
                             const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pair file " + path.string());
  PairDataset data;
  data.pair = pair;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) throw Error(where + ": not a JSON object");
    std::string a, b;
    int label;
    try {
      a = row.at("a").get<std::string>();
      b = row.at("b").get<std::string>();
      label = row.at("label").get<int>();
    } catch (const json::exception&) {
      throw Error(where + ": expected string fields a, b and integer label");
    }
    if (label != 0 && label != 1) throw Error(where + ": label must be 0 or 1");
    if (catalog.at(a).type != pair.first()) std::swap(a, b);
    auto& list = label == 1 ? data.positives : data.negatives;
    list.emplace_back(std::move(a), std::move(b));
  }
  data.validate(catalog);
  return data;
}

void write_pairs_jsonl(const PairDataset& data, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& [a, b] : data.positives) out << json{{"a", a}, {"b", b}, {"label", 1}}.dump() << '\n';
  for (const auto& [a, b] : data.negatives) out << json{{"a", a}, {"b", b}, {"label", 0}}.dump() << '\n';
  write_text_file(path, out.str());
}

PreferenceQuery query_from_json(const json& j) {
  PreferenceQuery q;
  try {
    q.occasion = parse_occasion(j.at("occasion").get<std::string>());
    const json& types = j.at("types");
    for (ClothingType t : kClothingTypes) {
      const json& p = types.at(std::string(short_name(t)));
      TypePreference& pref = q[t];
      pref.chosen = p.at("chosen").get<std::vector<std::string>>();
      pref.price_lo = p.at("price_lo").get<Price>();
      pref.price_hi = p.at("price_hi").get<Price>();
      pref.count = p.value("m", kDefaultPreferredCounts[index_of(t)]);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed preference query: ") + e.what());
  }
  return q;
}

json query_to_json(const PreferenceQuery& q) {
  json types = json::object();
  for (ClothingType t : kClothingTypes) {
    const TypePreference& p = q[t];
    types[std::string(short_name(t))] = {
        {"chosen", p.chosen}, {"price_lo", p.price_lo}, {"price_hi", p.price_hi}, {"m", p.count}};
  }
  return {{"occasion", to_string(q.occasion)}, {"types", types}};
}

std::vector<OutfitCase> testset_from_json(const json& j) {
  if (!j.is_array()) throw Error("test set must be a JSON array");
  std::vector<OutfitCase> cases;
  const auto& pairs = canonical_pair_types();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& row = j[i];
    const std::string where = "test case " + std::to_string(i);
    OutfitCase c;
    try {
      const auto ids = row.at("items").get<std::vector<std::string>>();
      if (ids.size() != kNumTypes) throw Error(where + ": expected three item ids");
      for (std::size_t k = 0; k < kNumTypes; ++k) c.items[k] = ids[k];
      c.label = row.at("label").get<int>();
      if (c.label != 0 && c.label != 1) throw Error(where + ": label must be 0 or 1");
      if (row.contains("mismatch")) {
        MismatchFlags flags{};
        for (const auto& name : row.at("mismatch")) {
          flags[index_of(parse_clothing_type(name.get<std::string>()))] = true;
        }
        c.pair_labels = derive_pair_labels(flags);
      } else if (row.contains("pair_labels")) {
        std::array<int, 3> labels{};
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          labels[k] = row.at("pair_labels").at(pairs[k].name()).get<int>();
        }
        c.pair_labels = labels;
      }
    } catch (const json::exception& e) {
      throw Error(where + ": " + e.what());
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

json testset_to_json(const std::vector<OutfitCase>& cases) {
  json out = json::array();
  const auto& pairs = canonical_pair_types();
  for (const auto& c : cases) {
    json row = {{"items", std::vector<std::string>(c.items.begin(), c.items.end())},
                {"label", c.label}};
    if (c.pair_labels) {
      json labels = json::object();
      for (std::size_t k = 0; k < pairs.size(); ++k) labels[pairs[k].name()] = (*c.pair_labels)[k];
      row["pair_labels"] = labels;
    }
    out.push_back(std::move(row));
  }
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(path.string() + " is not valid JSON");
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace boxrec
