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

// Session-scoped recommendation workflow: occasion, per-type item choices
// (top, bottom, foot wear in that order), price ranges and budget, then a
// recommended box and feedback on its items and outfits.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxrec/catalog.hpp"
#include "boxrec/compat_model.hpp"
#include "boxrec/features.hpp"
#include "boxrec/metrics.hpp"
#include "boxrec/outfit_engine.hpp"

struct sqlite3;

namespace boxrec {

/// An Error carrying an HTTP-style status and a short machine-readable code.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

enum class SessionState { choosing_occasion, choosing_items, setting_prices, recommended };

std::string_view to_string(SessionState s);
SessionState parse_session_state(std::string_view s);

struct BoxOutfit {
  std::string product_id;  // "outfit-<index>"
  std::array<std::string, kNumTypes> items;
  Price price = 0;  // sum of member prices, shared items counted per outfit
  double c1 = 0.0;
};

struct Recommendation {
  std::vector<std::string> items;  // distinct items of the box, sorted
  std::vector<BoxOutfit> outfits;
  Price total_price = 0;
  Price budget = 0;
  bool complete = false;  // generation reached L outfits
  std::size_t candidate_outfits = 0;
  std::size_t dropped_outfits = 0;  // candidates priced above the budget alone

  bool has_product(const std::string& product) const;
};

struct Session {
  std::string id;
  SessionState state = SessionState::choosing_occasion;
  std::optional<Occasion> occasion;
  std::array<std::vector<std::string>, kNumTypes> chosen;
  std::optional<std::array<std::pair<Price, Price>, kNumTypes>> price_ranges;
  std::optional<Price> budget;
  std::optional<Recommendation> recommendation;
  std::map<std::string, Feedback> feedback;  // product -> latest event
  std::int64_t created = 0;

  /// First clothing type without chosen items, if any.
  std::optional<ClothingType> next_type() const;
};

void to_json(nlohmann::json& j, const Recommendation& r);
void from_json(const nlohmann::json& j, Recommendation& r);
void to_json(nlohmann::json& j, const Session& s);
void from_json(const nlohmann::json& j, Session& s);

/// Sessions serialized as JSON in one SQLite table. Thread-safe.
class SessionStore {
 public:
  /// ":memory:" gives a private in-memory store.
  explicit SessionStore(const std::string& path);
  ~SessionStore();
  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  void put(const Session& s);
  std::optional<Session> get(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  sqlite3* db_ = nullptr;
  mutable std::mutex mu_;
};

struct ItemPage {
  std::vector<const Item*> items;
  std::size_t page = 0;
  bool exhausted = false;  // no further page holds items
};

struct Constraints {
  std::array<std::pair<Price, Price>, kNumTypes> price_ranges;
  Price budget = 0;
};

struct HitRatios {
  std::size_t item_products = 0, item_hits = 0;
  std::size_t outfit_products = 0, outfit_hits = 0;
  double items = 0.0;
  double outfits = 0.0;
  double overall = 0.0;  // items and outfits together
};

struct ServiceConfig {
  std::size_t outfit_count = kDefaultOutfitCount;
  std::array<std::size_t, kNumTypes> preferred_counts = kDefaultPreferredCounts;
  std::size_t page_size = 8;
};

class Service {
 public:
  Service(const Catalog& catalog, const FeatureStore& features, const CompatibilityModel& model,
          SessionStore& store, ServiceConfig config = {});

  std::string create_session();
  Session session(const std::string& id) const;

  void set_occasion(const std::string& id, Occasion occasion);
  /// Items of type t for the session's occasion in id order, one page.
  ItemPage sample_items(const std::string& id, ClothingType t, std::size_t page) const;
  void set_choices(const std::string& id, ClothingType t, const std::vector<std::string>& items);
  void set_constraints(const std::string& id, const Constraints& c);
  /// Generates preferred outfits and packs the box. Result is persisted.
  Recommendation recommend(const std::string& id);
  void record_feedback(const std::string& id, const std::string& product, bool liked);
  HitRatios hit_ratios(const std::string& id) const;
  std::vector<Feedback> feedback(const std::string& id) const;

  const Catalog& catalog() const { return catalog_; }
  const ServiceConfig& config() const { return config_; }

 private:
  std::shared_ptr<std::mutex> lock_for(const std::string& id) const;
  Session load(const std::string& id) const;

  const Catalog& catalog_;
  const FeatureStore& features_;
  const CompatibilityModel& model_;
  SessionStore& store_;
  ServiceConfig config_;
  mutable std::mutex locks_mu_;
  mutable std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

}  // namespace boxrec
