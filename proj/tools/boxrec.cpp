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
// Command-line front end: data generation, training, scoring, generation,
// box solving, evaluation, the HTTP server and session commands that mirror
// the HTTP endpoints.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "boxrec/api.hpp"
#include "boxrec/box_solver.hpp"
#include "boxrec/catalog.hpp"
#include "boxrec/compat_model.hpp"
#include "boxrec/dataset_io.hpp"
#include "boxrec/demo_data.hpp"
#include "boxrec/features.hpp"
#include "boxrec/metrics.hpp"
#include "boxrec/outfit_engine.hpp"
#include "boxrec/retrieval.hpp"
#include "boxrec/service.hpp"
#include "boxrec/training.hpp"

using namespace boxrec;
using nlohmann::json;

namespace {

std::string env_or(const char* name, std::string fallback = {}) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << std::endl;
  } else {
    write_text_file(out, j.dump(2) + "\n");
  }
}

// Paths to the read-only data every pipeline command needs.
struct DataArgs {
  std::string catalog = env_or("BOXREC_CATALOG");
  std::string features = env_or("BOXREC_FEATURES");
  std::string ckpt_dir = env_or("BOXREC_CKPT_DIR");
  bool stub = false;

  void add_to(CLI::App* app, bool with_model) {
    app->add_option("--catalog", catalog, "catalog file (.jsonl or .csv) [BOXREC_CATALOG]");
    app->add_option("--features", features, "feature file [BOXREC_FEATURES]");
    if (with_model) {
      app->add_option("--ckpt-dir", ckpt_dir, "directory of *.ckpt decoders [BOXREC_CKPT_DIR]");
      app->add_flag("--stub", stub, "score every pair as compatible instead of loading decoders");
    }
  }
};

// Never has a decoder; generation then fails with a clear message.
class NoModel : public CompatibilityModel {
 public:
  bool has(PairType) const override { return false; }
  Eigen::Vector2d probability(const Item&, const Item&) const override {
    throw Error("no checkpoint directory configured (use --ckpt-dir or --stub)");
  }
};

struct Runtime {
  Catalog catalog;
  FeatureStore features;
  std::unique_ptr<CompatibilityModel> model;

  explicit Runtime(const DataArgs& args, bool need_model = true) {
    if (args.catalog.empty()) throw Error("no catalog given (--catalog or BOXREC_CATALOG)");
    if (args.features.empty()) throw Error("no feature file given (--features or BOXREC_FEATURES)");
    const bool csv = std::filesystem::path(args.catalog).extension() == ".csv";
    CatalogLoad load = load_catalog(args.catalog, csv ? CatalogFormat::csv : CatalogFormat::jsonl);
    for (const auto& r : load.rejected) {
      std::cerr << "warning: catalog line " << r.line << " rejected: " << r.reason << "\n";
    }
    catalog = std::move(load.catalog);
    features = load_features(args.features, catalog);
    if (!need_model) {
      model = std::make_unique<NoModel>();
    } else if (args.stub) {
      model = std::make_unique<ConstantModel>(1.0);
    } else if (!args.ckpt_dir.empty()) {
      model = std::make_unique<DecoderSet>(DecoderSet::load_dir(args.ckpt_dir, features, catalog.vocabulary()));
    } else {
      throw Error("no decoders given (--ckpt-dir, BOXREC_CKPT_DIR or --stub)");
    }
  }
};

json box_json(const BoxInstance& inst, const Box& box) {
  std::vector<std::string> items;
  for (ItemIndex x : distinct_items(inst, box)) items.push_back(inst.item_ids[x]);
  return {{"outfits", box},
          {"size", box.size()},
          {"distinct_items", items},
          {"total_price", total_price(inst, box)},
          {"budget", inst.budget}};
}

json pairs_json(const OutfitScore& s) {
  json out = json::object();
  for (const auto& p : s.pairs) {
    out[p.pair.name()] = {{"p_match", p.p_match}, {"score", p.binary}};
  }
  return out;
}

json collection_json(const BoxCollection& c) { return json(c); }

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw) {
    std::stringstream ss(r);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

std::pair<Price, Price> parse_range(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error("price range must be 'lo,hi', got '" + s + "'");
  return {std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boxrec: outfit box recommendation"};
  app.require_subcommand(1);

  // demo ---------------------------------------------------------------
  auto* demo = app.add_subcommand("demo", "write a synthetic catalog, features, pair files and test set");
  std::string demo_out;
  DemoOptions demo_opts;
  demo->add_option("--out", demo_out, "output directory")->required();
  demo->add_option("--items-per-bucket", demo_opts.items_per_bucket, "items per (type, category, occasion)");
  demo->add_option("--pairs", demo_opts.pairs_per_class, "positive and negative pairs per pair type");
  demo->add_option("--test-outfits", demo_opts.test_outfits, "annotated test outfits");
  demo->add_option("--seed", demo_opts.seed, "random seed");

  // retrieve -----------------------------------------------------------
  auto* retrieve = app.add_subcommand("retrieve", "preferred items of one type");
  DataArgs retrieve_data;
  retrieve_data.add_to(retrieve, false);
  std::string r_type, r_occasion = "casual";
  TypePreference r_pref;
  std::vector<std::string> r_chosen;
  retrieve->add_option("--type", r_type, "tw, bw or fw")->required();
  retrieve->add_option("--occasion", r_occasion, "casual or formal");
  retrieve->add_option("--price-lo", r_pref.price_lo)->required();
  retrieve->add_option("--price-hi", r_pref.price_hi)->required();
  retrieve->add_option("--m", r_pref.count, "number of items to keep");
  retrieve->add_option("--chosen", r_chosen, "chosen item ids (comma separated or repeated)")->required();

  // train --------------------------------------------------------------
  auto* train = app.add_subcommand("train", "train one pair-type decoder");
  DataArgs train_data;
  train_data.add_to(train, false);
  std::string t_pair, t_data, t_config, t_out;
  double t_val = 0.2;
  std::optional<int> t_epochs;
  train->add_option("--pair", t_pair, "pair type, e.g. tw-bw")->required();
  train->add_option("--data", t_data, "labelled pairs (JSON lines)")->required();
  train->add_option("--config", t_config, "hyperparameter JSON (missing keys use desk defaults)");
  train->add_option("--out", t_out, "checkpoint file")->required();
  train->add_option("--validation-fraction", t_val, "held-out share of each class");
  train->add_option("--epochs", t_epochs, "override the configured epoch count");

  // score-pair ---------------------------------------------------------
  auto* score = app.add_subcommand("score-pair", "compatibility of two items");
  DataArgs score_data;
  score_data.add_to(score, false);
  std::string s_ckpt, s_a, s_b;
  score->add_option("--ckpt", s_ckpt, "checkpoint file")->required();
  score->add_option("--a", s_a)->required();
  score->add_option("--b", s_b)->required();

  // generate -----------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "preferred outfits for a query");
  DataArgs gen_data;
  gen_data.add_to(generate, true);
  std::string g_query, g_out, g_instance;
  std::size_t g_L = kDefaultOutfitCount;
  Price g_budget = 0;
  generate->add_option("--query", g_query, "preference query JSON")->required();
  generate->add_option("--L", g_L, "target number of outfits");
  generate->add_option("--out", g_out, "output JSON (default stdout)");
  generate->add_option("--instance-out", g_instance, "also write a solver instance");
  generate->add_option("--budget", g_budget, "budget recorded in the solver instance");

  // solve --------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "pack a budget-feasible box");
  std::string v_instance, v_out;
  bool v_exact = false;
  solve->add_option("--instance", v_instance, "instance JSON")->required();
  solve->add_flag("--exact", v_exact, "exhaustive search (at most 20 outfits)");
  solve->add_option("--out", v_out, "output JSON (default stdout)");

  // evaluate -----------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "outfit scoring metrics on an annotated test set");
  DataArgs eval_data;
  eval_data.add_to(evaluate, true);
  std::string e_testset, e_out;
  evaluate->add_option("--testset", e_testset, "test set JSON")->required();
  evaluate->add_option("--out", e_out, "output JSON (default stdout)");

  // feedback-dump ------------------------------------------------------
  auto* dump = app.add_subcommand("feedback-dump", "feedback of one session as JSON lines");
  std::string d_store = env_or("BOXREC_STORE", "boxrec.db"), d_session;
  dump->add_option("--store", d_store, "session store file [BOXREC_STORE]");
  dump->add_option("--session", d_session)->required();

  // serve --------------------------------------------------------------
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  DataArgs serve_data;
  serve_data.add_to(serve, true);
  std::string sv_store = env_or("BOXREC_STORE", "boxrec.db");
  std::string sv_bind = env_or("BOXREC_BIND", "127.0.0.1:8080");
  serve->add_option("--store", sv_store, "session store file [BOXREC_STORE]");
  serve->add_option("--bind", sv_bind, "host:port [BOXREC_BIND]");

  // session ------------------------------------------------------------
  auto* session = app.add_subcommand("session", "session commands, one per HTTP endpoint");
  session->require_subcommand(1);
  DataArgs ses_data;
  ses_data.add_to(session, true);
  std::string ses_store = env_or("BOXREC_STORE", "boxrec.db");
  session->add_option("--store", ses_store, "session store file [BOXREC_STORE]");
  std::string ses_id, ses_occasion, ses_type, ses_product;
  std::vector<std::string> ses_items;
  std::size_t ses_page = 0;
  std::string ses_tw, ses_bw, ses_fw;
  Price ses_budget = 0;
  bool ses_liked = true;
  auto id_opt = [&](CLI::App* c) { c->add_option("--id", ses_id, "session id")->required(); };

  auto* s_create = session->add_subcommand("create", "POST /sessions");
  auto* s_occ = session->add_subcommand("occasion", "POST /sessions/{id}/occasion");
  id_opt(s_occ);
  s_occ->add_option("--occasion", ses_occasion)->required();
  auto* s_items = session->add_subcommand("items", "GET /sessions/{id}/items");
  id_opt(s_items);
  s_items->add_option("--type", ses_type)->required();
  s_items->add_option("--page", ses_page);
  auto* s_choices = session->add_subcommand("choices", "POST /sessions/{id}/choices");
  id_opt(s_choices);
  s_choices->add_option("--type", ses_type)->required();
  s_choices->add_option("--items", ses_items, "item ids (comma separated or repeated)")->required();
  auto* s_cons = session->add_subcommand("constraints", "POST /sessions/{id}/constraints");
  id_opt(s_cons);
  s_cons->add_option("--tw", ses_tw, "top-wear price range lo,hi")->required();
  s_cons->add_option("--bw", ses_bw, "bottom-wear price range lo,hi")->required();
  s_cons->add_option("--fw", ses_fw, "foot-wear price range lo,hi")->required();
  s_cons->add_option("--budget", ses_budget)->required();
  auto* s_rec = session->add_subcommand("recommend", "POST /sessions/{id}/recommend");
  id_opt(s_rec);
  auto* s_fb = session->add_subcommand("feedback", "POST /sessions/{id}/feedback");
  id_opt(s_fb);
  s_fb->add_option("--product", ses_product)->required();
  s_fb->add_option("--liked", ses_liked, "true or false")->required();
  auto* s_show = session->add_subcommand("recommendation", "GET /sessions/{id}/recommendation");
  id_opt(s_show);
  auto* s_hr = session->add_subcommand("hit-ratio", "GET /sessions/{id}/hit-ratio");
  id_opt(s_hr);
  auto* s_get = session->add_subcommand("show", "GET /sessions/{id}");
  id_opt(s_get);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*demo) {
      const DemoData data = make_demo(demo_opts);
      write_demo(data, demo_out);
      emit({{"items", data.catalog.size()},
            {"pairs_per_class", demo_opts.pairs_per_class},
            {"test_outfits", data.testset.size()},
            {"dir", demo_out}},
           "");
    } else if (*retrieve) {
      Runtime rt(retrieve_data, false);
      r_pref.chosen = split_list(r_chosen);
      const auto ranked = rpi(CatalogView(rt.catalog), rt.features, parse_occasion(r_occasion), r_pref,
                              parse_clothing_type(r_type));
      json out = json::array();
      for (const auto& r : ranked) {
        out.push_back({{"id", r.item->id}, {"category", r.item->category}, {"price", r.item->price},
                       {"distance", r.distance}});
      }
      emit(out, "");
    } else if (*train) {
      Runtime rt(train_data, false);
      const PairType pair = PairType::parse(t_pair);
      HyperParams hyper = HyperParams::desk();
      if (!t_config.empty()) hyper = read_json_file(t_config).get<HyperParams>();
      if (t_epochs) hyper.epochs = *t_epochs;
      const PairDataset data = read_pairs_jsonl(t_data, pair, rt.catalog);
      const auto [tr, va] = split_dataset(data, t_val, hyper.seed);
      const TrainResult result = train_decoder(tr, va, rt.catalog, rt.features, hyper);
      Checkpoint ckpt;
      ckpt.hyper = hyper;
      ckpt.hyper.shape = result.params.shape();
      ckpt.vocab_hash = rt.catalog.vocabulary().hash();
      ckpt.decoders.push_back(result.params);
      save_checkpoint(ckpt, t_out);
      json log = json::array();
      for (const auto& e : result.log) {
        log.push_back({{"epoch", e.epoch},
                       {"learning_rate", e.learning_rate},
                       {"train_loss", e.train_loss},
                       {"validation_auc", e.validation_auc ? json(*e.validation_auc) : json(nullptr)}});
      }
      emit({{"pair", pair.name()}, {"train", tr.size()}, {"validation", va.size()}, {"log", log},
            {"checkpoint", t_out}},
           "");
    } else if (*score) {
      Runtime rt(score_data, false);
      DecoderSet set(rt.features, rt.catalog.vocabulary());
      Checkpoint ckpt = load_checkpoint(s_ckpt);
      if (ckpt.vocab_hash != rt.catalog.vocabulary().hash()) {
        throw Error("checkpoint was trained on a different vocabulary");
      }
      for (auto& d : ckpt.decoders) set.add(std::move(d));
      const Item* a = &rt.catalog.at(s_a);
      const Item* b = &rt.catalog.at(s_b);
      if (index_of(a->type) > index_of(b->type)) std::swap(a, b);
      const Eigen::Vector2d p = set.probability(*a, *b);
      emit({{"a", a->id}, {"b", b->id}, {"p_mismatch", p(0)}, {"p_match", p(1)}, {"score", binary_score(p)}},
           "");
    } else if (*generate) {
      Runtime rt(gen_data);
      const PreferenceQuery query = query_from_json(read_json_file(g_query));
      const PreferredOutfitSet set = generate_preferred_outfits(rt.catalog, rt.features, *rt.model, query, g_L);
      json outfits = json::array();
      for (const auto& so : set.outfits) {
        outfits.push_back({{"items", {so.outfit[ClothingType::top_wear].id, so.outfit[ClothingType::bottom_wear].id,
                                      so.outfit[ClothingType::foot_wear].id}},
                           {"price", so.outfit.price()},
                           {"pairs", pairs_json(so.score)},
                           {"c1", so.score.c1},
                           {"c2", so.score.c2}});
      }
      json rounds = json::array();
      for (const auto& r : set.rounds) {
        rounds.push_back({{"retrieved", r.retrieved},
                          {"combinations", r.combinations},
                          {"checked", r.checked},
                          {"admitted", r.admitted}});
      }
      emit({{"outfits", outfits}, {"complete", set.complete}, {"rounds", rounds}}, g_out);
      if (!g_instance.empty()) {
        json items = json::array();
        std::set<std::string> seen;
        json inst_outfits = json::array();
        for (const auto& so : set.outfits) {
          json ids = json::array();
          for (const Item* item : so.outfit.items) {
            if (seen.insert(item->id).second) items.push_back({{"id", item->id}, {"price", item->price}});
            ids.push_back(item->id);
          }
          inst_outfits.push_back(ids);
        }
        if (g_budget <= 0) throw Error("--instance-out needs a positive --budget");
        write_text_file(g_instance, json{{"items", items}, {"outfits", inst_outfits}, {"budget", g_budget}}.dump(1));
      }
    } else if (*solve) {
      const BoxInstance inst = BoxInstance::from_json(read_json_file(v_instance));
      if (v_exact) {
        const Box box = exact_solve(inst);
        json out = box_json(inst, box);
        out["method"] = "exact";
        emit(out, v_out);
      } else {
        const SolveResult r = olr_solve(inst);
        json out = box_json(inst, r.box);
        out["method"] = "overload-remove";
        out["dropped"] = r.dropped;
        out["trace"] = {{"overload_remove", collection_json(r.after_overload)},
                        {"boxes", collection_json(r.decantation.after_boxes)},
                        {"components", collection_json(r.decantation.after_components)},
                        {"outfits", collection_json(r.decantation.after_outfits)}};
        emit(out, v_out);
      }
    } else if (*evaluate) {
      Runtime rt(eval_data);
      const auto cases = testset_from_json(read_json_file(e_testset));
      const OsfReport report = report_osf(cases, rt.catalog, *rt.model);
      json out = {{"pairwise_auc", report.pairwise_auc},
                  {"ap_auc", report.ap_auc ? json(*report.ap_auc) : json(nullptr)},
                  {"c1_auc", report.c1_auc},
                  {"c2_auc", report.c2_auc},
                  {"accuracy", report.accuracy},
                  {"cases", cases.size()},
                  {"notices", report.notices}};
      emit(out, e_out);
    } else if (*dump) {
      SessionStore store(d_store);
      const auto s = store.get(d_session);
      if (!s) throw Error("no session '" + d_session + "'");
      std::vector<Feedback> events;
      for (const auto& [product, f] : s->feedback) events.push_back(f);
      std::sort(events.begin(), events.end(),
                [](const Feedback& a, const Feedback& b) { return a.timestamp < b.timestamp; });
      for (const auto& f : events) std::cout << feedback_json(f).dump() << "\n";
    } else if (*serve) {
      Runtime rt(serve_data);
      SessionStore store(sv_store);
      Service service(rt.catalog, rt.features, *rt.model, store);
      const auto colon = sv_bind.rfind(':');
      if (colon == std::string::npos) throw Error("--bind must be host:port");
      std::cerr << "listening on " << sv_bind << std::endl;
      serve_http(service, sv_bind.substr(0, colon), std::stoi(sv_bind.substr(colon + 1)));
    } else if (*session) {
      const bool needs_model = static_cast<bool>(*s_rec);
      Runtime rt(ses_data, needs_model);
      SessionStore store(ses_store);
      Service service(rt.catalog, rt.features, *rt.model, store);
      ApiRequest req;
      const std::string base = "/sessions/" + ses_id;
      if (*s_create) {
        req = {"POST", "/sessions", {}, ""};
      } else if (*s_occ) {
        req = {"POST", base + "/occasion", {}, json{{"occasion", ses_occasion}}.dump()};
      } else if (*s_items) {
        req = {"GET", base + "/items", {{"type", ses_type}, {"page", std::to_string(ses_page)}}, ""};
      } else if (*s_choices) {
        req = {"POST", base + "/choices", {}, json{{"type", ses_type}, {"items", split_list(ses_items)}}.dump()};
      } else if (*s_cons) {
        json ranges = json::object();
        for (const auto& [name, raw] : {std::pair<std::string, std::string>{"tw", ses_tw}, {"bw", ses_bw}, {"fw", ses_fw}}) {
          const auto [lo, hi] = parse_range(raw);
          ranges[name] = {lo, hi};
        }
        req = {"POST", base + "/constraints", {}, json{{"price_ranges", ranges}, {"budget", ses_budget}}.dump()};
      } else if (*s_rec) {
        req = {"POST", base + "/recommend", {}, ""};
      } else if (*s_fb) {
        req = {"POST", base + "/feedback", {}, json{{"product", ses_product}, {"liked", ses_liked}}.dump()};
      } else if (*s_show) {
        req = {"GET", base + "/recommendation", {}, ""};
      } else if (*s_hr) {
        req = {"GET", base + "/hit-ratio", {}, ""};
      } else if (*s_get) {
        req = {"GET", base, {}, ""};
      }
      const ApiResponse res = handle_request(service, req);
      std::cout << res.body.dump(2) << std::endl;
      if (res.status >= 400) {
        std::cerr << "error " << res.status << ": " << res.body.value("message", "") << std::endl;
        return 3;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
