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

// JSON request routing for the session service. The HTTP server and the
// command-line `session` subcommands both go through handle_request, so the
// two surfaces accept and return the same documents.
//
//   POST /sessions                              -> {"id", "state"}
//   GET  /sessions/{id}                         -> session document
//   POST /sessions/{id}/occasion     {"occasion": "casual"}
//   GET  /sessions/{id}/items?type=tw&page=0    -> {"items", "page", "exhausted"}
//   POST /sessions/{id}/choices      {"type": "tw", "items": [...]}
//   POST /sessions/{id}/constraints  {"price_ranges": {"tw": [lo, hi], ...}, "budget": B}
//   POST /sessions/{id}/recommend               -> recommendation
//   POST /sessions/{id}/feedback     {"product": id, "liked": bool}
//   GET  /sessions/{id}/recommendation          -> {"recommendation", "feedback", "hit_ratio"}
//   GET  /sessions/{id}/hit-ratio
//   GET  /sessions/{id}/feedback
//
// Errors come back as {"error": code, "message": text} with a 4xx/5xx status.

#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "boxrec/service.hpp"

namespace boxrec {

struct ApiRequest {
  std::string method;  // "GET" or "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

ApiResponse handle_request(Service& service, const ApiRequest& request);

nlohmann::json hit_ratios_json(const HitRatios& h);
nlohmann::json feedback_json(const Feedback& f);

/// HTTP front end over handle_request. Request logs go to stderr as one
/// JSON object per line.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  /// Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a successful bind().
  void listen();
  /// Returns once listen() accepts connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocks serving HTTP on host:port until the process is stopped.
void serve_http(Service& service, const std::string& host, int port);

}  // namespace boxrec
