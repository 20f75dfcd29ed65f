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
#include "boxrec/service.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>

#include <sqlite3.h>

#include "boxrec/box_solver.hpp"

namespace boxrec {

using nlohmann::json;

namespace {

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

ServiceError bad_request(const std::string& message) { return {400, "bad_request", message}; }
ServiceError invalid_state(const std::string& message) { return {409, "invalid_state", message}; }

}  // namespace

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::choosing_occasion:
      return "choosing_occasion";
    case SessionState::choosing_items:
      return "choosing_items";
    case SessionState::setting_prices:
      return "setting_prices";
    case SessionState::recommended:
      return "recommended";
  }
  return "?";
}

SessionState parse_session_state(std::string_view s) {
  for (SessionState st : {SessionState::choosing_occasion, SessionState::choosing_items,
                          SessionState::setting_prices, SessionState::recommended}) {
    if (to_string(st) == s) return st;
  }
  throw Error("unknown session state '" + std::string(s) + "'");
}

bool Recommendation::has_product(const std::string& product) const {
  if (std::binary_search(items.begin(), items.end(), product)) return true;
  return std::any_of(outfits.begin(), outfits.end(),
                     [&](const BoxOutfit& o) { return o.product_id == product; });
}

std::optional<ClothingType> Session::next_type() const {
  for (ClothingType t : kClothingTypes) {
    if (chosen[index_of(t)].empty()) return t;
  }
  return std::nullopt;
}

void to_json(json& j, const Recommendation& r) {
  json outfits = json::array();
  for (const auto& o : r.outfits) {
    outfits.push_back({{"id", o.product_id},
                       {"items", std::vector<std::string>(o.items.begin(), o.items.end())},
                       {"price", o.price},
                       {"c1", o.c1}});
  }
  j = {{"items", r.items},
       {"outfits", outfits},
       {"total_price", r.total_price},
       {"budget", r.budget},
       {"complete", r.complete},
       {"candidate_outfits", r.candidate_outfits},
       {"dropped_outfits", r.dropped_outfits}};
}

void from_json(const json& j, Recommendation& r) {
  r.items = j.at("items").get<std::vector<std::string>>();
  r.outfits.clear();
  for (const auto& o : j.at("outfits")) {
    BoxOutfit b;
    b.product_id = o.at("id").get<std::string>();
    const auto ids = o.at("items").get<std::vector<std::string>>();
    if (ids.size() != kNumTypes) throw Error("stored outfit does not have three items");
    std::copy(ids.begin(), ids.end(), b.items.begin());
    b.price = o.at("price").get<Price>();
    b.c1 = o.at("c1").get<double>();
    r.outfits.push_back(std::move(b));
  }
  r.total_price = j.at("total_price").get<Price>();
  r.budget = j.at("budget").get<Price>();
  r.complete = j.at("complete").get<bool>();
  r.candidate_outfits = j.at("candidate_outfits").get<std::size_t>();
  r.dropped_outfits = j.at("dropped_outfits").get<std::size_t>();
}

void to_json(json& j, const Session& s) {
  json chosen = json::object();
  for (ClothingType t : kClothingTypes) chosen[std::string(short_name(t))] = s.chosen[index_of(t)];
  j = {{"id", s.id},
       {"state", to_string(s.state)},
       {"occasion", s.occasion ? json(to_string(*s.occasion)) : json(nullptr)},
       {"chosen", chosen},
       {"created", s.created}};
  if (s.price_ranges) {
    json ranges = json::object();
    for (ClothingType t : kClothingTypes) {
      const auto& [lo, hi] = (*s.price_ranges)[index_of(t)];
      ranges[std::string(short_name(t))] = {lo, hi};
    }
    j["price_ranges"] = ranges;
  } else {
    j["price_ranges"] = nullptr;
  }
  j["budget"] = s.budget ? json(*s.budget) : json(nullptr);
  j["recommendation"] = s.recommendation ? json(*s.recommendation) : json(nullptr);
  json fb = json::array();
  for (const auto& [product, f] : s.feedback) {
    fb.push_back({{"product", product}, {"liked", f.liked}, {"timestamp", f.timestamp}});
  }
  j["feedback"] = fb;
}

void from_json(const json& j, Session& s) {
  s.id = j.at("id").get<std::string>();
  s.state = parse_session_state(j.at("state").get<std::string>());
  s.occasion.reset();
  if (!j.at("occasion").is_null()) s.occasion = parse_occasion(j.at("occasion").get<std::string>());
  for (ClothingType t : kClothingTypes) {
    s.chosen[index_of(t)] = j.at("chosen").at(std::string(short_name(t))).get<std::vector<std::string>>();
  }
  s.created = j.value("created", std::int64_t{0});
  s.price_ranges.reset();
  if (!j.at("price_ranges").is_null()) {
    std::array<std::pair<Price, Price>, kNumTypes> ranges;
    for (ClothingType t : kClothingTypes) {
      const auto v = j.at("price_ranges").at(std::string(short_name(t))).get<std::vector<Price>>();
      if (v.size() != 2) throw Error("stored price range must have two bounds");
      ranges[index_of(t)] = {v[0], v[1]};
    }
    s.price_ranges = ranges;
  }
  s.budget.reset();
  if (!j.at("budget").is_null()) s.budget = j.at("budget").get<Price>();
  s.recommendation.reset();
  if (!j.at("recommendation").is_null()) s.recommendation = j.at("recommendation").get<Recommendation>();
  s.feedback.clear();
  for (const auto& f : j.at("feedback")) {
    Feedback fb;
    fb.session = s.id;
    fb.product = f.at("product").get<std::string>();
    fb.liked = f.at("liked").get<bool>();
    fb.timestamp = f.at("timestamp").get<std::int64_t>();
    s.feedback[fb.product] = fb;
  }
}

// ---------------------------------------------------------------------------

SessionStore::SessionStore(const std::string& path) {
  if (sqlite3_open(path.c_str(), &db_) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw Error("cannot open session store " + path + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  char* err = nullptr;
  if (sqlite3_exec(db_, "CREATE TABLE IF NOT EXISTS kv (key TEXT PRIMARY KEY, value TEXT NOT NULL)",
                   nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    sqlite3_close(db_);
    throw Error("cannot initialise session store: " + msg);
  }
}

SessionStore::~SessionStore() { sqlite3_close(db_); }

void SessionStore::put(const Session& s) {
  const std::string value = json(s).dump();
  const std::string key = "session/" + s.id;
  std::lock_guard lock(mu_);
  sqlite3_stmt* stmt = nullptr;
  sqlite3_prepare_v2(db_, "INSERT OR REPLACE INTO kv (key, value) VALUES (?, ?)", -1, &stmt, nullptr);
  sqlite3_bind_text(stmt, 1, key.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(stmt, 2, value.c_str(), -1, SQLITE_TRANSIENT);
  const int rc = sqlite3_step(stmt);
  sqlite3_finalize(stmt);
  if (rc != SQLITE_DONE) throw Error(std::string("session store write failed: ") + sqlite3_errmsg(db_));
}

std::optional<Session> SessionStore::get(const std::string& id) const {
  const std::string key = "session/" + id;
  std::string value;
  {
    std::lock_guard lock(mu_);
    sqlite3_stmt* stmt = nullptr;
    sqlite3_prepare_v2(db_, "SELECT value FROM kv WHERE key = ?", -1, &stmt, nullptr);
    sqlite3_bind_text(stmt, 1, key.c_str(), -1, SQLITE_TRANSIENT);
    const int rc = sqlite3_step(stmt);
    if (rc == SQLITE_ROW) value = reinterpret_cast<const char*>(sqlite3_column_text(stmt, 0));
    sqlite3_finalize(stmt);
    if (rc == SQLITE_DONE) return std::nullopt;
    if (rc != SQLITE_ROW) throw Error(std::string("session store read failed: ") + sqlite3_errmsg(db_));
  }
  return json::parse(value).get<Session>();
}

std::vector<std::string> SessionStore::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  sqlite3_stmt* stmt = nullptr;
  sqlite3_prepare_v2(db_, "SELECT key FROM kv WHERE key LIKE 'session/%' ORDER BY key", -1, &stmt,
                     nullptr);
  while (sqlite3_step(stmt) == SQLITE_ROW) {
    out.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(stmt, 0)) + 8);
  }
  sqlite3_finalize(stmt);
  return out;
}

// ---------------------------------------------------------------------------

Service::Service(const Catalog& catalog, const FeatureStore& features,
                 const CompatibilityModel& model, SessionStore& store, ServiceConfig config)
    : catalog_(catalog), features_(features), model_(model), store_(store), config_(config) {
  if (config_.page_size == 0 || config_.outfit_count == 0) throw Error("service: bad configuration");
}

std::shared_ptr<std::mutex> Service::lock_for(const std::string& id) const {
  std::lock_guard lock(locks_mu_);
  auto& m = locks_[id];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

Session Service::load(const std::string& id) const {
  auto s = store_.get(id);
  if (!s) throw ServiceError(404, "not_found", "no session '" + id + "'");
  return *s;
}

std::string Service::create_session() {
  static std::mutex gen_mu;
  static std::mt19937_64 gen(std::random_device{}() ^ static_cast<std::uint64_t>(now_ms()));
  Session s;
  do {
    char buf[17];
    std::uint64_t x;
    {
      std::lock_guard lock(gen_mu);
      x = gen();
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    s.id = buf;
  } while (store_.get(s.id));
  s.created = now_ms();
  store_.put(s);
  return s.id;
}

Session Service::session(const std::string& id) const {
  auto m = lock_for(id);
  std::lock_guard lock(*m);
  return load(id);
}

void Service::set_occasion(const std::string& id, Occasion occasion) {
  auto m = lock_for(id);
  std::lock_guard lock(*m);
  Session s = load(id);
  if (s.occasion && *s.occasion != occasion) {
    // earlier choices were drawn from the other occasion
    for (auto& c : s.chosen) c.clear();
    s.price_ranges.reset();
    s.budget.reset();
  }
  s.occasion = occasion;
  s.recommendation.reset();
  s.feedback.clear();
  s.state = s.next_type() ? SessionState::choosing_items : SessionState::setting_prices;
  store_.put(s);
}

ItemPage Service::sample_items(const std::string& id, ClothingType t, std::size_t page) const {
  const Session s = session(id);
  if (!s.occasion) throw invalid_state("choose an occasion before browsing items");
  std::vector<const Item*> pool;
  for (const Item* item : items_of(catalog_, t)) {
    if (item->occasion == *s.occasion) pool.push_back(item);
  }
  ItemPage out;
  out.page = page;
  const std::size_t begin = page * config_.page_size;
  if (begin < pool.size()) {
    const std::size_t end = std::min(pool.size(), begin + config_.page_size);
    out.items.assign(pool.begin() + static_cast<std::ptrdiff_t>(begin),
                     pool.begin() + static_cast<std::ptrdiff_t>(end));
  }
  out.exhausted = begin + config_.page_size >= pool.size();
  return out;
}

void Service::set_choices(const std::string& id, ClothingType t,
                          const std::vector<std::string>& items) {
  auto m = lock_for(id);
  std::lock_guard lock(*m);
  Session s = load(id);
  if (!s.occasion) throw invalid_state("choose an occasion before choosing items");
  const auto next = s.next_type();
  if (next && index_of(t) > index_of(*next)) {
    throw invalid_state("choose " + std::string(long_name(*next)) + " items first");
  }
  if (items.empty()) throw bad_request("choose at least one item");
  std::set<std::string> unique;
  for (const auto& item_id : items) {
    if (!catalog_.contains(item_id)) throw bad_request("unknown item '" + item_id + "'");
    const Item& item = catalog_.at(item_id);
    if (item.type != t) throw bad_request("item '" + item_id + "' is not " + std::string(long_name(t)));
    if (item.occasion != *s.occasion) {
      throw bad_request("item '" + item_id + "' is not for the " + std::string(to_string(*s.occasion)) +
                        " occasion");
    }
    unique.insert(item_id);
  }
  s.chosen[index_of(t)].assign(unique.begin(), unique.end());
  s.recommendation.reset();
  s.feedback.clear();
  s.state = s.next_type() ? SessionState::choosing_items : SessionState::setting_prices;
  store_.put(s);
}

void Service::set_constraints(const std::string& id, const Constraints& c) {
  auto m = lock_for(id);
  std::lock_guard lock(*m);
  Session s = load(id);
  if (!s.occasion || s.next_type()) throw invalid_state("choose items of every type before setting prices");
  for (ClothingType t : kClothingTypes) {
    const auto& [lo, hi] = c.price_ranges[index_of(t)];
    if (lo < 0 || lo >= hi) {
      throw bad_request("price range for " + std::string(long_name(t)) + " must satisfy 0 <= lo < hi");
    }
  }
  if (c.budget <= 0) throw bad_request("budget must be positive");
  s.price_ranges = c.price_ranges;
  s.budget = c.budget;
  s.recommendation.reset();
  s.feedback.clear();
  s.state = SessionState::setting_prices;
  store_.put(s);
}

Recommendation Service::recommend(const std::string& id) {
  auto m = lock_for(id);
  std::lock_guard lock(*m);
  Session s = load(id);
  if (!s.occasion || s.next_type() || !s.price_ranges || !s.budget) {
    throw invalid_state("set occasion, items of every type, price ranges and budget first");
  }

  PreferenceQuery query;
  query.occasion = *s.occasion;
  for (ClothingType t : kClothingTypes) {
    TypePreference& p = query[t];
    p.chosen = s.chosen[index_of(t)];
    p.price_lo = (*s.price_ranges)[index_of(t)].first;
    p.price_hi = (*s.price_ranges)[index_of(t)].second;
    p.count = config_.preferred_counts[index_of(t)];
  }
  const PreferredOutfitSet generated =
      generate_preferred_outfits(catalog_, features_, model_, query, config_.outfit_count);
  if (generated.outfits.empty()) {
    throw ServiceError(422, "no_outfits", "no compatible outfits under these preferences");
  }

  BoxInstance inst;
  std::map<std::string, ItemIndex> index;
  for (const auto& so : generated.outfits) {
    GenericOutfit o;
    for (const Item* item : so.outfit.items) {
      auto [it, fresh] = index.emplace(item->id, inst.item_ids.size());
      if (fresh) {
        inst.item_ids.push_back(item->id);
        inst.prices.push_back(item->price);
      }
      o.push_back(it->second);
    }
    inst.outfits.push_back(std::move(o));
  }
  inst.budget = *s.budget;
  inst.normalize();
  const SolveResult solved = olr_solve(inst);
  if (solved.box.empty()) {
    throw ServiceError(422, "budget",
                       "budget " + std::to_string(inst.budget) + " is below the price of every candidate outfit");
  }

  Recommendation r;
  r.budget = inst.budget;
  r.complete = generated.complete;
  r.candidate_outfits = generated.outfits.size();
  r.dropped_outfits = solved.dropped.size();
  std::set<std::string> items;
  for (std::size_t k = 0; k < solved.box.size(); ++k) {
    const ScoredOutfit& so = generated.outfits[solved.box[k]];
    BoxOutfit b;
    b.product_id = "outfit-" + std::to_string(k);
    for (ClothingType t : kClothingTypes) b.items[index_of(t)] = so.outfit[t].id;
    b.price = so.outfit.price();
    // every rendered outfit must still pass the AND rule
    const OutfitScore again = score_outfit(so.outfit, catalog_, model_);
    if (again.c2 != 1) throw ServiceError(500, "internal", "outfit " + so.outfit.key() + " failed re-scoring");
    b.c1 = again.c1;
    items.insert(b.items.begin(), b.items.end());
    r.outfits.push_back(std::move(b));
  }
  r.items.assign(items.begin(), items.end());
  for (const auto& item_id : r.items) r.total_price += catalog_.at(item_id).price;
  if (r.total_price > r.budget) {
    throw ServiceError(500, "internal", "box price exceeds the budget");
  }

  s.recommendation = r;
  s.feedback.clear();
  s.state = SessionState::recommended;
  store_.put(s);
  return r;
}

void Service::record_feedback(const std::string& id, const std::string& product, bool liked) {
  auto m = lock_for(id);
  std::lock_guard lock(*m);
  Session s = load(id);
  if (!s.recommendation) throw invalid_state("no recommendation to give feedback on");
  if (!s.recommendation->has_product(product)) {
    throw ServiceError(404, "unknown_product", "'" + product + "' is not in the recommended box");
  }
  Feedback f;
  f.session = s.id;
  f.product = product;
  f.liked = liked;
  f.timestamp = now_ms();
  s.feedback[product] = f;
  store_.put(s);
}

HitRatios Service::hit_ratios(const std::string& id) const {
  const Session s = session(id);
  if (!s.recommendation) throw invalid_state("no recommendation yet");
  const Recommendation& r = *s.recommendation;
  HitRatios h;
  h.item_products = r.items.size();
  h.outfit_products = r.outfits.size();
  for (const auto& [product, f] : s.feedback) {
    if (!f.liked) continue;
    if (std::binary_search(r.items.begin(), r.items.end(), product)) {
      ++h.item_hits;
    } else {
      ++h.outfit_hits;
    }
  }
  h.items = hit_ratio(h.item_products, h.item_hits);
  h.outfits = hit_ratio(h.outfit_products, h.outfit_hits);
  h.overall = hit_ratio(h.item_products + h.outfit_products, h.item_hits + h.outfit_hits);
  return h;
}

std::vector<Feedback> Service::feedback(const std::string& id) const {
  const Session s = session(id);
  std::vector<Feedback> out;
  for (const auto& [product, f] : s.feedback) out.push_back(f);
  std::sort(out.begin(), out.end(), [](const Feedback& a, const Feedback& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.product < b.product;
  });
  return out;
}

}  // namespace boxrec
