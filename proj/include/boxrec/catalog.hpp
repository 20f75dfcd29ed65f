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
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "boxrec/types.hpp"

namespace boxrec {

struct Item {
  std::string id;
  ClothingType type = ClothingType::top_wear;
  std::string category;
  Occasion occasion = Occasion::casual;
  Price price = 0;
  std::string title;
  /// Sorted, deduplicated tokens of title and category.
  std::vector<std::string> title_tokens;
  /// Key into the FeatureStore; defaults to the item id.
  std::string feature_ref;
};

/// Lowercase, drop punctuation, split on whitespace. No stemming, no stopwords.
std::vector<std::string> tokenize(std::string_view text);

/// Allowed categories per clothing type.
class CategoryConfig {
 public:
  /// The top-, bottom- and foot-wear categories of the reference dataset.
  static CategoryConfig defaults();

  void set(ClothingType t, std::set<std::string> categories);
  bool allows(ClothingType t, const std::string& category) const;
  const std::set<std::string>& categories(ClothingType t) const {
    return per_type_[index_of(t)];
  }

 private:
  std::array<std::set<std::string>, kNumTypes> per_type_;
};

/// Ordered token set with a dense index. Index i is the i-th token in
/// lexicographic order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::set<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  bool contains(const std::string& token) const { return index_.count(token) > 0; }
  /// Throws Error for tokens outside the vocabulary.
  std::size_t index(const std::string& token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  /// Stable 64-bit FNV-1a digest of the token list, hex encoded.
  std::string hash() const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Immutable item collection. Construct via load_catalog or Catalog::build.
class Catalog {
 public:
  Catalog() = default;

  /// Validates items (unique ids, positive prices, known categories) and
  /// builds the vocabulary and the (type, category, occasion) index.
  static Catalog build(std::vector<Item> items,
                       const CategoryConfig& categories = CategoryConfig::defaults());

  std::size_t size() const { return items_.size(); }
  bool contains(const std::string& id) const { return items_.count(id) > 0; }
  /// Throws Error naming the id when it is unknown.
  const Item& at(const std::string& id) const;
  const std::map<std::string, Item>& items() const { return items_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const CategoryConfig& categories() const { return categories_; }

  /// Ids of one (type, category, occasion) bucket, sorted.
  const std::vector<std::string>& bucket(ClothingType t, const std::string& category,
                                         Occasion occ) const;

  /// One JSON object per line, ids ascending.
  std::string to_jsonl() const;

 private:
  struct BucketKey {
    ClothingType type;
    std::string category;
    Occasion occasion;
    friend auto operator<=>(const BucketKey&, const BucketKey&) = default;
  };

  std::map<std::string, Item> items_;
  std::map<BucketKey, std::vector<std::string>> buckets_;
  Vocabulary vocabulary_;
  CategoryConfig categories_;
};

/// All and only items of type t, ordered by id.
std::vector<const Item*> items_of(const Catalog& catalog, ClothingType t);

enum class CatalogFormat { jsonl, csv };

struct RejectedRow {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct CatalogLoad {
  Catalog catalog;
  std::vector<RejectedRow> rejected;
};

/// Malformed rows are reported, not fatal. A duplicate id throws.
CatalogLoad load_catalog(const std::filesystem::path& path, CatalogFormat format,
                         const CategoryConfig& categories = CategoryConfig::defaults());
CatalogLoad parse_catalog(std::string_view text, CatalogFormat format,
                          const CategoryConfig& categories = CategoryConfig::defaults());

}  // namespace boxrec
