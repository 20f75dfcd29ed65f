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
#include "boxrec/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace boxrec {

using nlohmann::json;

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      continue;
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return tokens;
}

CategoryConfig CategoryConfig::defaults() {
  CategoryConfig config;
  config.set(ClothingType::top_wear, {"shirt", "tshirt", "polo tshirt", "long sleeved top"});
  config.set(ClothingType::bottom_wear, {"trouser/chino", "jeans", "track-pant", "shorts"});
  config.set(ClothingType::foot_wear,
             {"ankle-boot", "lace-up", "slip-on", "trainer", "sandals"});
  return config;
}

void CategoryConfig::set(ClothingType t, std::set<std::string> categories) {
  per_type_[index_of(t)] = std::move(categories);
}

bool CategoryConfig::allows(ClothingType t, const std::string& category) const {
  return per_type_[index_of(t)].count(category) > 0;
}

Vocabulary::Vocabulary(std::set<std::string> tokens)
    : tokens_(tokens.begin(), tokens.end()) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

std::size_t Vocabulary::index(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) {
    throw Error("token '" + token + "' is not in the vocabulary (stale vocabulary?)");
  }
  return it->second;
}

std::string Vocabulary::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (const auto& t : tokens_) {
    for (unsigned char c : t) mix(c);
    mix(0);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Catalog Catalog::build(std::vector<Item> items, const CategoryConfig& categories) {
  Catalog c;
  c.categories_ = categories;
  std::set<std::string> vocab;
  for (auto& item : items) {
    if (item.id.empty()) throw Error("item with empty id");
    if (item.price <= 0) throw Error("item '" + item.id + "' has non-positive price");
    if (!categories.allows(item.type, item.category)) {
      throw Error("item '" + item.id + "' has category '" + item.category +
                  "' not configured for " + std::string(long_name(item.type)));
    }
    std::set<std::string> tokens;
    for (auto& t : tokenize(item.title)) tokens.insert(std::move(t));
    for (auto& t : tokenize(item.category)) tokens.insert(std::move(t));
    item.title_tokens.assign(tokens.begin(), tokens.end());
    vocab.insert(tokens.begin(), tokens.end());
    if (item.feature_ref.empty()) item.feature_ref = item.id;

    const std::string id = item.id;
    if (!c.items_.emplace(id, std::move(item)).second) {
      throw Error("duplicate item id '" + id + "'");
    }
  }
  for (const auto& [id, item] : c.items_) {
    c.buckets_[BucketKey{item.type, item.category, item.occasion}].push_back(id);
  }
  c.vocabulary_ = Vocabulary(std::move(vocab));
  return c;
}

const Item& Catalog::at(const std::string& id) const {
  auto it = items_.find(id);
  if (it == items_.end()) throw Error("unknown item id '" + id + "'");
  return it->second;
}

const std::vector<std::string>& Catalog::bucket(ClothingType t, const std::string& category,
                                                Occasion occ) const {
  static const std::vector<std::string> empty;
  auto it = buckets_.find(BucketKey{t, category, occ});
  return it == buckets_.end() ? empty : it->second;
}

std::string Catalog::to_jsonl() const {
  std::string out;
  for (const auto& [id, item] : items_) {
    json row = {{"id", item.id},
                {"type", long_name(item.type)},
                {"category", item.category},
                {"occasion", to_string(item.occasion)},
                {"price", item.price},
                {"title", item.title}};
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::vector<const Item*> items_of(const Catalog& catalog, ClothingType t) {
  std::vector<const Item*> out;
  for (const auto& [id, item] : catalog.items()) {
    if (item.type == t) out.push_back(&item);
  }
  return out;
}

namespace {

constexpr std::array<const char*, 6> kColumns = {"id",       "type",  "category",
                                                 "occasion", "price", "title"};

// Field access shared by the JSON-lines and CSV readers.
struct RawRow {
  std::map<std::string, std::string> fields;
  bool price_is_integer = true;
};

std::optional<std::string> row_to_item(const RawRow& row, const CategoryConfig& categories,
                                       Item& out) {
  for (const char* col : kColumns) {
    if (!row.fields.count(col)) return std::string("missing field '") + col + "'";
  }
  out.id = row.fields.at("id");
  if (out.id.empty()) return std::string("empty id");
  try {
    out.type = parse_clothing_type(row.fields.at("type"));
    out.occasion = parse_occasion(row.fields.at("occasion"));
  } catch (const Error& e) {
    return std::string(e.what());
  }
  out.category = row.fields.at("category");
  if (!categories.allows(out.type, out.category)) {
    return "category '" + out.category + "' not allowed for " +
           std::string(long_name(out.type));
  }
  const std::string& p = row.fields.at("price");
  Price price = 0;
  auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), price);
  if (!row.price_is_integer || ec != std::errc() || ptr != p.data() + p.size()) {
    return "price '" + p + "' is not an integer";
  }
  if (price <= 0) return "price must be positive";
  out.price = price;
  out.title = row.fields.at("title");
  return std::nullopt;
}

std::optional<std::string> parse_json_row(std::string_view line, RawRow& row) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) return std::string("not a JSON object");
  for (const char* col : kColumns) {
    auto it = obj.find(col);
    if (it == obj.end() || it->is_null()) continue;
    if (std::string_view(col) == "price") {
      if (it->is_number_integer()) {
        row.fields[col] = std::to_string(it->get<std::int64_t>());
      } else if (it->is_number()) {
        row.price_is_integer = false;
        row.fields[col] = it->dump();
      } else if (it->is_string()) {
        row.fields[col] = it->get<std::string>();
      } else {
        return std::string("price has wrong JSON type");
      }
    } else if (it->is_string()) {
      row.fields[col] = it->get<std::string>();
    } else {
      return std::string("field '") + col + "' must be a string";
    }
  }
  return std::nullopt;
}

// Minimal RFC 4180 record splitter: quoted fields, doubled quotes.
std::optional<std::vector<std::string>> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

CatalogLoad parse_catalog(std::string_view text, CatalogFormat format,
                          const CategoryConfig& categories) {
  CatalogLoad result;
  std::vector<Item> items;
  std::map<std::string, std::size_t> seen;  // id -> line
  std::vector<std::string> header;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (blank(line)) continue;

    RawRow row;
    std::optional<std::string> problem;
    if (format == CatalogFormat::jsonl) {
      problem = parse_json_row(line, row);
    } else {
      auto cells = split_csv(line);
      if (header.empty()) {
        if (!cells) throw Error("unterminated quote in CSV header");
        header = *cells;
        continue;
      }
      if (!cells) {
        problem = "unterminated quote";
      } else if (cells->size() != header.size()) {
        problem = "expected " + std::to_string(header.size()) + " fields, got " +
                  std::to_string(cells->size());
      } else {
        for (std::size_t i = 0; i < header.size(); ++i) {
          if (!(*cells)[i].empty()) row.fields[header[i]] = (*cells)[i];
        }
      }
    }

    Item item;
    if (!problem) problem = row_to_item(row, categories, item);
    if (problem) {
      result.rejected.push_back({line_no, *problem});
      continue;
    }
    auto [it, inserted] = seen.emplace(item.id, line_no);
    if (!inserted) {
      throw Error("duplicate item id '" + item.id + "' on lines " +
                  std::to_string(it->second) + " and " + std::to_string(line_no));
    }
    items.push_back(std::move(item));
  }
  result.catalog = Catalog::build(std::move(items), categories);
  return result;
}

CatalogLoad load_catalog(const std::filesystem::path& path, CatalogFormat format,
                         const CategoryConfig& categories) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open catalog file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_catalog(buffer.str(), format, categories);
}

}  // namespace boxrec
