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
#include "boxrec/api.hpp"

#include <sstream>
#include <vector>

namespace boxrec {

using nlohmann::json;

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ServiceError(400, "bad_request", "body must be a JSON object");
  return j;
}

ClothingType type_param(const std::string& s) {
  try {
    return parse_clothing_type(s);
  } catch (const Error& e) {
    throw ServiceError(400, "bad_request", e.what());
  }
}

json item_json(const Item& item) {
  return {{"id", item.id},
          {"type", short_name(item.type)},
          {"category", item.category},
          {"occasion", to_string(item.occasion)},
          {"price", item.price},
          {"title", item.title}};
}

json recommendation_json(const Recommendation& r, const Catalog& catalog) {
  json j = r;
  json items = json::array();
  for (const auto& id : r.items) items.push_back(item_json(catalog.at(id)));
  j["items"] = items;
  return j;
}

ApiResponse route(Service& service, const ApiRequest& req) {
  const auto parts = split_path(req.path);
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  if (parts.empty() || parts[0] != "sessions") throw ServiceError(404, "not_found", "no route " + req.path);

  if (parts.size() == 1 && post) {
    const std::string id = service.create_session();
    return {201, {{"id", id}, {"state", to_string(service.session(id).state)}}};
  }
  if (parts.size() < 2) throw ServiceError(404, "not_found", "no route " + req.path);
  const std::string& id = parts[1];

  if (parts.size() == 2 && get) return {200, json(service.session(id))};
  if (parts.size() != 3) throw ServiceError(404, "not_found", "no route " + req.path);
  const std::string& action = parts[2];
  const json body = post ? parse_body(req.body) : json::object();

  try {
    if (action == "occasion" && post) {
      service.set_occasion(id, parse_occasion(body.at("occasion").get<std::string>()));
      return {200, {{"id", id}, {"state", to_string(service.session(id).state)}}};
    }
    if (action == "items" && get) {
      auto t = req.query.find("type");
      if (t == req.query.end()) throw ServiceError(400, "bad_request", "missing query parameter 'type'");
      std::size_t page = 0;
      if (auto p = req.query.find("page"); p != req.query.end()) {
        try {
          page = std::stoul(p->second);
        } catch (const std::exception&) {
          throw ServiceError(400, "bad_request", "page must be a non-negative integer");
        }
      }
      const ItemPage result = service.sample_items(id, type_param(t->second), page);
      json items = json::array();
      for (const Item* item : result.items) items.push_back(item_json(*item));
      return {200, {{"items", items}, {"page", result.page}, {"exhausted", result.exhausted}}};
    }
    if (action == "choices" && post) {
      service.set_choices(id, type_param(body.at("type").get<std::string>()),
                          body.at("items").get<std::vector<std::string>>());
      return {200, {{"id", id}, {"state", to_string(service.session(id).state)}}};
    }
    if (action == "constraints" && post) {
      Constraints c;
      for (ClothingType t : kClothingTypes) {
        const auto r = body.at("price_ranges").at(std::string(short_name(t))).get<std::vector<Price>>();
        if (r.size() != 2) throw ServiceError(400, "bad_request", "a price range is [lo, hi]");
        c.price_ranges[index_of(t)] = {r[0], r[1]};
      }
      c.budget = body.at("budget").get<Price>();
      service.set_constraints(id, c);
      return {200, {{"id", id}, {"state", to_string(service.session(id).state)}}};
    }
    if (action == "recommend" && post) {
      return {200, recommendation_json(service.recommend(id), service.catalog())};
    }
    if (action == "feedback" && post) {
      service.record_feedback(id, body.at("product").get<std::string>(), body.at("liked").get<bool>());
      return {200, {{"ok", true}}};
    }
    if (action == "feedback" && get) {
      json events = json::array();
      for (const auto& f : service.feedback(id)) events.push_back(feedback_json(f));
      return {200, events};
    }
    if (action == "recommendation" && get) {
      const Session s = service.session(id);
      if (!s.recommendation) throw ServiceError(404, "not_found", "no recommendation yet");
      json events = json::array();
      for (const auto& f : service.feedback(id)) events.push_back(feedback_json(f));
      return {200,
              {{"recommendation", recommendation_json(*s.recommendation, service.catalog())},
               {"feedback", events},
               {"hit_ratio", hit_ratios_json(service.hit_ratios(id))}}};
    }
    if (action == "hit-ratio" && get) return {200, hit_ratios_json(service.hit_ratios(id))};
  } catch (const json::exception& e) {
    throw ServiceError(400, "bad_request", std::string("malformed request body: ") + e.what());
  }
  throw ServiceError(404, "not_found", "no route " + req.method + " " + req.path);
}

}  // namespace

json hit_ratios_json(const HitRatios& h) {
  return {{"items", h.items},
          {"outfits", h.outfits},
          {"overall", h.overall},
          {"item_products", h.item_products},
          {"item_hits", h.item_hits},
          {"outfit_products", h.outfit_products},
          {"outfit_hits", h.outfit_hits}};
}

json feedback_json(const Feedback& f) {
  return {{"session", f.session}, {"product", f.product}, {"liked", f.liked}, {"timestamp", f.timestamp}};
}

ApiResponse handle_request(Service& service, const ApiRequest& request) {
  try {
    return route(service, request);
  } catch (const ServiceError& e) {
    return {e.status(), {{"error", e.code()}, {"message", e.what()}}};
  } catch (const Error& e) {
    return {400, {{"error", "bad_request"}, {"message", e.what()}}};
  } catch (const std::exception& e) {
    return {500, {{"error", "internal"}, {"message", e.what()}}};
  }
}

}  // namespace boxrec
