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
#include "boxrec/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "boxrec/metrics.hpp"
#include "boxrec/random.hpp"

namespace boxrec {

using nlohmann::json;

HyperParams HyperParams::desk() {
  // A few hundred pairs give a few dozen steps per epoch, far too few for
  // the full-size schedule, so the small network starts hotter and decays later.
  HyperParams h;
  h.learning_rate = 1e-2;
  h.lr_decay_every_epochs = 20;
  return h;
}

HyperParams HyperParams::full() {
  HyperParams h;
  h.learning_rate = 1e-3;
  h.lr_decay_every_epochs = 5;
  h.shape.channels = 768;
  h.shape.patches = 289;
  h.shape.latent = 900;
  h.shape.shared = 1024;
  h.shape.vocab = 920;
  return h;
}

void HyperParams::validate() const {
  if (shape.channels <= 0 || shape.patches <= 0 || shape.latent <= 0 || shape.shared <= 0) {
    throw Error("hyperparameters: network dimensions must be positive");
  }
  if (lambda_reg < 0 || lambda_vse < 0) throw Error("hyperparameters: lambdas must be >= 0");
  if (!(clip_lo < clip_hi)) throw Error("hyperparameters: clip_lo must be < clip_hi");
  if (batch_size == 0) throw Error("hyperparameters: batch_size must be positive");
  if (epochs < 0) throw Error("hyperparameters: epochs must be >= 0");
  if (learning_rate <= 0 || lr_decay_factor <= 0 || lr_decay_every_epochs <= 0) {
    throw Error("hyperparameters: learning-rate schedule must be positive");
  }
}

double HyperParams::learning_rate_at(int epoch) const {
  return learning_rate / std::pow(lr_decay_factor, epoch / lr_decay_every_epochs);
}

void to_json(json& j, const HyperParams& h) {
  j = json{{"channels", h.shape.channels},
           {"patches", h.shape.patches},
           {"latent", h.shape.latent},
           {"shared", h.shape.shared},
           {"vocab", h.shape.vocab},
           {"lambda_reg", h.lambda_reg},
           {"lambda_vse", h.lambda_vse},
           {"learning_rate", h.learning_rate},
           {"lr_decay_factor", h.lr_decay_factor},
           {"lr_decay_every_epochs", h.lr_decay_every_epochs},
           {"clip_lo", h.clip_lo},
           {"clip_hi", h.clip_hi},
           {"batch_size", h.batch_size},
           {"epochs", h.epochs},
           {"seed", h.seed},
           {"beta1", h.beta1},
           {"beta2", h.beta2},
           {"epsilon", h.epsilon},
           {"weight_decay", h.weight_decay}};
}

void from_json(const json& j, HyperParams& h) {
  h = HyperParams::desk();
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("channels", h.shape.channels);
  get("patches", h.shape.patches);
  get("latent", h.shape.latent);
  get("shared", h.shape.shared);
  get("vocab", h.shape.vocab);
  get("lambda_reg", h.lambda_reg);
  get("lambda_vse", h.lambda_vse);
  get("learning_rate", h.learning_rate);
  get("lr_decay_factor", h.lr_decay_factor);
  get("lr_decay_every_epochs", h.lr_decay_every_epochs);
  get("clip_lo", h.clip_lo);
  get("clip_hi", h.clip_hi);
  get("batch_size", h.batch_size);
  get("epochs", h.epochs);
  get("seed", h.seed);
  get("beta1", h.beta1);
  get("beta2", h.beta2);
  get("epsilon", h.epsilon);
  get("weight_decay", h.weight_decay);
}

void PairDataset::validate(const Catalog& catalog) const {
  std::set<std::pair<std::string, std::string>> pos(positives.begin(), positives.end());
  auto check = [&](const std::pair<std::string, std::string>& p) {
    const Item& a = catalog.at(p.first);
    const Item& b = catalog.at(p.second);
    if (a.type != pair.first() || b.type != pair.second()) {
      throw Error("pair (" + p.first + ", " + p.second + ") does not have types " +
                  pair.name());
    }
  };
  for (const auto& p : positives) check(p);
  for (const auto& p : negatives) {
    check(p);
    if (pos.count(p)) {
      throw Error("pair (" + p.first + ", " + p.second + ") is both positive and negative");
    }
  }
}

std::pair<PairDataset, PairDataset> split_dataset(const PairDataset& data,
                                                  double validation_fraction,
                                                  std::uint64_t seed) {
  if (validation_fraction < 0.0 || validation_fraction >= 1.0) {
    throw Error("validation fraction must lie in [0, 1)");
  }
  Rng rng(seed);
  PairDataset train{data.pair, {}, {}};
  PairDataset val{data.pair, {}, {}};
  auto split = [&](const auto& src, auto& dst_train, auto& dst_val) {
    auto shuffled = src;
    rng.shuffle(shuffled);
    const auto n_val = static_cast<std::size_t>(
        std::llround(validation_fraction * static_cast<double>(shuffled.size())));
    dst_val.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_val));
    dst_train.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_val), shuffled.end());
  };
  split(data.positives, train.positives, val.positives);
  split(data.negatives, train.negatives, val.negatives);
  return {std::move(train), std::move(val)};
}

std::vector<PairExample> make_examples(const PairDataset& data, const Catalog& catalog,
                                       const FeatureStore& features) {
  data.validate(catalog);
  std::vector<PairExample> out;
  out.reserve(data.size());
  auto add = [&](const std::pair<std::string, std::string>& p, int label) {
    const Item& a = catalog.at(p.first);
    const Item& b = catalog.at(p.second);
    out.push_back(PairExample{&features.at(a.feature_ref).map, &features.at(b.feature_ref).map,
                              token_indices(a, catalog.vocabulary()),
                              token_indices(b, catalog.vocabulary()), label});
  };
  for (const auto& p : data.positives) add(p, 1);
  for (const auto& p : data.negatives) add(p, 0);
  return out;
}

namespace {

// Backpropagates d(loss)/d(attended) through one attention direction.
void attention_backward(const FeatureMap& local, const Eigen::MatrixXd& hidden,
                        const Eigen::VectorXd& alpha, const Eigen::VectorXd& other_pool,
                        const Eigen::VectorXd& d_attended, const Decoder& p, Decoder& g) {
  const Eigen::VectorXd d_alpha = local * d_attended;
  const Eigen::VectorXd d_logit =
      (alpha.array() * (d_alpha.array() - alpha.dot(d_alpha))).matrix();
  g.attn_score.noalias() += hidden.transpose() * d_logit;
  const Eigen::MatrixXd d_pre =
      ((d_logit * p.attn_score.transpose()).array() * (1.0 - hidden.array().square()))
          .matrix();
  g.attn_local.noalias() += d_pre.transpose() * local;
  g.attn_context.noalias() += d_pre.colwise().sum().transpose() * other_pool.transpose();
}

// Per-example likelihood and embedding terms; accumulates into `g` if given.
std::pair<double, double> example_loss(const PairExample& ex, const Decoder& p,
                                       double lambda_vse, Decoder* g) {
  const auto f = forward_pair(*ex.local_a, *ex.local_b,
                              std::span<const std::size_t>(ex.tokens_a),
                              std::span<const std::size_t>(ex.tokens_b), p);
  const int y = ex.label;
  const double p_true = f.prob(y);
  const bool floored = p_true < kProbabilityFloor;
  const double nll = -std::log(floored ? kProbabilityFloor : p_true);

  const Eigen::VectorXd diff_a = f.visual_a - f.text_a;
  const Eigen::VectorXd diff_b = f.visual_b - f.text_b;
  const double vse = diff_a.squaredNorm() + diff_b.squaredNorm();
  if (!g) return {nll, vse};

  Eigen::Vector2d d_logits = Eigen::Vector2d::Zero();
  if (!floored) {
    d_logits = f.prob;
    d_logits(y) -= 1.0;
  }
  g->classifier.noalias() += d_logits * f.shared.transpose();
  const Eigen::VectorXd d_shared = p.classifier.transpose() * d_logits;
  const Eigen::VectorXd d_shared_pre =
      (d_shared.array() *
       f.shared_pre.array().unaryExpr([](double v) { return v > 0.0 ? 1.0 : kLeakySlope; }))
          .matrix();
  g->shared_first.noalias() += d_shared_pre * f.latent_a.transpose();
  g->shared_second.noalias() += d_shared_pre * f.latent_b.transpose();

  auto branch = [&](const Eigen::VectorXd& d_latent, const Eigen::VectorXd& latent,
                    const Eigen::VectorXd& diff, const Eigen::VectorXd& proj,
                    const Eigen::VectorXd& attended, const std::vector<std::size_t>& tokens)
      -> Eigen::VectorXd {
    const Eigen::VectorXd d_sum = (d_latent.array() * (1.0 - latent.array().square())).matrix();
    const Eigen::VectorXd d_visual = d_sum + 2.0 * lambda_vse * diff;
    const Eigen::VectorXd d_text = d_sum - 2.0 * lambda_vse * diff;
    for (std::size_t k : tokens) g->text_embed.col(static_cast<Eigen::Index>(k)) += d_text;
    const Eigen::VectorXd d_proj =
        (d_visual.array() * (proj.array() > 0.0).cast<double>()).matrix();
    g->visual_proj.noalias() += d_proj * attended.transpose();
    return p.visual_proj.transpose() * d_proj;
  };
  const Eigen::VectorXd d_att_a =
      branch(p.shared_first.transpose() * d_shared_pre, f.latent_a, diff_a, f.proj_a,
             f.attended_a, ex.tokens_a);
  const Eigen::VectorXd d_att_b =
      branch(p.shared_second.transpose() * d_shared_pre, f.latent_b, diff_b, f.proj_b,
             f.attended_b, ex.tokens_b);

  attention_backward(*ex.local_a, f.hidden_a, f.alpha_a, f.pool_b, d_att_a, p, *g);
  attention_backward(*ex.local_b, f.hidden_b, f.alpha_b, f.pool_a, d_att_b, p, *g);
  return {nll, vse};
}

// Flat (pointer, length) views over every tensor, in for_each_tensor order.
std::vector<Eigen::Map<Eigen::ArrayXd>> flat(Decoder& d) {
  std::vector<Eigen::Map<Eigen::ArrayXd>> out;
  d.for_each_tensor(
      [&](const char*, auto& t) { out.emplace_back(t.data(), t.size()); });
  return out;
}

std::vector<Eigen::Map<const Eigen::ArrayXd>> flat(const Decoder& d) {
  std::vector<Eigen::Map<const Eigen::ArrayXd>> out;
  d.for_each_tensor(
      [&](const char*, const auto& t) { out.emplace_back(t.data(), t.size()); });
  return out;
}

}  // namespace

LossTerms loss_total(std::span<const PairExample> batch, const Decoder& params,
                     double lambda_reg, double lambda_vse, Decoder* gradient) {
  if (batch.empty()) throw Error("loss_total: empty batch");
  if (gradient) *gradient = Decoder::zeros(params.pair, params.shape());
  LossTerms terms;
  for (const auto& ex : batch) {
    const auto [nll, vse] = example_loss(ex, params, lambda_vse, gradient);
    terms.compat += nll;
    terms.vse += vse;
  }
  terms.reg = params.squared_norm();
  terms.total = terms.compat + lambda_reg * terms.reg + lambda_vse * terms.vse;
  if (gradient && lambda_reg != 0.0) {
    auto g = flat(*gradient);
    const auto p = flat(params);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.0 * lambda_reg * p[i];
  }
  return terms;
}

Decoder xavier_init(PairType pair, const DecoderShape& shape, std::uint64_t seed) {
  Decoder d = Decoder::zeros(pair, shape);
  Rng rng(seed);
  d.for_each_tensor([&](const char*, auto& t) {
    // A vector is a 1 x n map from its input space.
    const bool is_vector = t.cols() == 1;
    const double fan_in = static_cast<double>(is_vector ? t.rows() : t.cols());
    const double fan_out = static_cast<double>(is_vector ? 1 : t.rows());
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-limit, limit);
  });
  return d;
}

double examples_auc(std::span<const PairExample> examples, const Decoder& params) {
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(examples.size());
  for (const auto& ex : examples) {
    scores.push_back(forward_pair(*ex.local_a, *ex.local_b,
                                  std::span<const std::size_t>(ex.tokens_a),
                                  std::span<const std::size_t>(ex.tokens_b), params)
                         .prob(1));
    labels.push_back(ex.label);
  }
  return auc(scores, labels);
}

TrainResult train_decoder(PairType pair, std::span<const PairExample> train,
                          std::span<const PairExample> validation, std::size_t vocab_size,
                          const HyperParams& hyper) {
  hyper.validate();
  if (train.empty()) throw Error("train_decoder: empty training set");
  DecoderShape shape = hyper.shape;
  shape.vocab = static_cast<Eigen::Index>(vocab_size);
  for (const auto& ex : train) {
    if (ex.local_a->cols() != shape.channels || ex.local_b->cols() != shape.channels) {
      throw Error("train_decoder: feature channels differ from hyperparameters");
    }
  }

  TrainResult result;
  result.params = xavier_init(pair, shape, hyper.seed);
  Decoder first_moment = Decoder::zeros(pair, shape);
  Decoder second_moment = Decoder::zeros(pair, shape);
  Decoder grad;
  auto theta = flat(result.params);
  auto m = flat(first_moment);
  auto v = flat(second_moment);

  bool two_classes = false;
  if (!validation.empty()) {
    const int first = validation.front().label;
    for (const auto& ex : validation) two_classes = two_classes || ex.label != first;
  }

  Rng order_rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<PairExample> batch;
  long step = 0;

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double lr = hyper.learning_rate_at(epoch);
    order_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
      const std::size_t stop = std::min(order.size(), start + hyper.batch_size);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(train[order[i]]);
      epoch_loss += loss_total(batch, result.params, hyper.lambda_reg, hyper.lambda_vse, &grad)
                        .total;

      ++step;
      const double bias1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
      const double bias2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
      auto gv = flat(grad);
      for (std::size_t t = 0; t < theta.size(); ++t) {
        const Eigen::ArrayXd clipped = gv[t].max(hyper.clip_lo).min(hyper.clip_hi);
        m[t] = hyper.beta1 * m[t] + (1.0 - hyper.beta1) * clipped;
        v[t] = hyper.beta2 * v[t] + (1.0 - hyper.beta2) * clipped.square();
        theta[t] -= lr * ((m[t] / bias1) / ((v[t] / bias2).sqrt() + hyper.epsilon) +
                          hyper.weight_decay * theta[t]);
      }
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.learning_rate = lr;
    entry.train_loss = epoch_loss / static_cast<double>(train.size());
    if (two_classes) entry.validation_auc = examples_auc(validation, result.params);
    result.log.push_back(entry);
  }
  return result;
}

TrainResult train_decoder(const PairDataset& train, const PairDataset& validation,
                          const Catalog& catalog, const FeatureStore& features,
                          const HyperParams& hyper) {
  if (train.size() == 0) throw Error("train_decoder: empty dataset");
  const auto train_ex = make_examples(train, catalog, features);
  const auto val_ex = make_examples(validation, catalog, features);
  return train_decoder(train.pair, train_ex, val_ex, catalog.vocabulary().size(), hyper);
}

namespace {

json tensor_json(const auto& t) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(t.size()));
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) data.push_back(t(r, c));
  }
  return json{{"rows", t.rows()}, {"cols", t.cols()}, {"data", data}};
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  json doc;
  doc["format"] = "boxrec-decoder";
  doc["version"] = Checkpoint::kVersion;
  doc["hyper"] = ckpt.hyper;
  doc["vocab_hash"] = ckpt.vocab_hash;
  doc["decoders"] = json::array();
  for (const auto& d : ckpt.decoders) {
    json tensors;
    d.for_each_tensor([&](const char* name, const auto& t) { tensors[name] = tensor_json(t); });
    doc["decoders"].push_back({{"pair", d.pair.name()}, {"tensors", tensors}});
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out << doc.dump();
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  if (doc.value("format", "") != "boxrec-decoder") {
    throw Error(path.string() + " is not a decoder checkpoint");
  }
  if (doc.value("version", 0) != Checkpoint::kVersion) {
    throw Error("unsupported checkpoint version in " + path.string());
  }
  Checkpoint ckpt;
  ckpt.hyper = doc.at("hyper").get<HyperParams>();
  ckpt.vocab_hash = doc.at("vocab_hash").get<std::string>();
  for (const auto& entry : doc.at("decoders")) {
    Decoder d;
    d.pair = PairType::parse(entry.at("pair").get<std::string>());
    const auto& tensors = entry.at("tensors");
    d.for_each_tensor([&](const char* name, auto& t) {
      const auto& rec = tensors.at(name);
      const auto rows = rec.at("rows").get<Eigen::Index>();
      const auto cols = rec.at("cols").get<Eigen::Index>();
      const auto& data = rec.at("data");
      if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw Error(std::string("checkpoint tensor ") + name + " has wrong element count");
      }
      if constexpr (std::decay_t<decltype(t)>::ColsAtCompileTime == 1) {
        if (cols != 1) throw Error(std::string("checkpoint tensor ") + name + " must be a vector");
        t.resize(rows);
      } else {
        t.resize(rows, cols);
      }
      std::size_t k = 0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) t(r, c) = data[k++].get<double>();
      }
    });
    d.check_shapes();
    if (!d.all_finite()) throw Error("checkpoint tensor contains non-finite values");
    ckpt.decoders.push_back(std::move(d));
  }
  return ckpt;
}

}  // namespace boxrec
