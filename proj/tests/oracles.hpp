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

// Independent reference computations used by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boxrec/training.hpp"

namespace boxrec::testing {

// AUC by counting every (positive, negative) pair; ties count one half.
inline double pairwise_auc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

// A small decoder problem with random feature maps and token sets.
struct TinyProblem {
  DecoderShape shape;
  std::vector<FeatureMap> maps;
  std::vector<PairExample> examples;
  Decoder params;
};

inline TinyProblem tiny_problem(std::uint64_t seed, Eigen::Index channels = 8,
                                Eigen::Index patches = 4, int pairs = 4) {
  TinyProblem p;
  p.shape = {channels, patches, 6, 5, 5};
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  p.maps.resize(static_cast<std::size_t>(2 * pairs));
  for (auto& m : p.maps) {
    m.resize(patches, channels);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(gen);
  }
  for (int k = 0; k < pairs; ++k) {
    PairExample ex;
    ex.local_a = &p.maps[static_cast<std::size_t>(2 * k)];
    ex.local_b = &p.maps[static_cast<std::size_t>(2 * k + 1)];
    for (std::size_t t = 0; t < static_cast<std::size_t>(p.shape.vocab); ++t) {
      if ((gen() & 1u) != 0) ex.tokens_a.push_back(t);
      if ((gen() & 1u) != 0) ex.tokens_b.push_back(t);
    }
    ex.label = k % 2;
    p.examples.push_back(std::move(ex));
  }
  p.params = xavier_init(PairType(ClothingType::top_wear, ClothingType::bottom_wear), p.shape,
                         seed + 1);
  // Scale up so that the attention and the classifier are far from uniform.
  p.params.for_each_tensor([](const char*, auto& t) { t *= 2.0; });
  return p;
}

// Per-tensor ||analytic - numeric|| / max(||analytic||, ||numeric||) with
// central differences.
inline std::map<std::string, double> gradient_relative_errors(const TinyProblem& p,
                                                              double lambda_reg,
                                                              double lambda_vse,
                                                              double eps = 1e-4) {
  Decoder analytic;
  loss_total(p.examples, p.params, lambda_reg, lambda_vse, &analytic);

  std::map<std::string, Eigen::MatrixXd> numeric;
  Decoder probe = p.params;
  probe.for_each_tensor([&](const char* name, auto& t) {
    Eigen::MatrixXd g(t.rows(), t.cols());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double keep = t.data()[i];
      t.data()[i] = keep + eps;
      const double up = loss_total(p.examples, probe, lambda_reg, lambda_vse).total;
      t.data()[i] = keep - eps;
      const double down = loss_total(p.examples, probe, lambda_reg, lambda_vse).total;
      t.data()[i] = keep;
      g.data()[i] = (up - down) / (2.0 * eps);
    }
    numeric[name] = g;
  });

  std::map<std::string, double> errors;
  analytic.for_each_tensor([&](const char* name, const auto& t) {
    const Eigen::MatrixXd a = t;
    const Eigen::MatrixXd& n = numeric.at(name);
    const double scale = std::max({a.norm(), n.norm(), 1e-12});
    errors[name] = (a - n).norm() / scale;
  });
  return errors;
}

// Logistic regression on the element-wise product of the pooled maps of
// the two items, by full-batch gradient descent. Returns validation AUC.
inline double logistic_baseline_auc(std::span<const PairExample> train,
                                    std::span<const PairExample> validation,
                                    int iterations = 500, double step = 0.5) {
  auto feature = [](const PairExample& ex) {
    const Eigen::VectorXd ga = ex.local_a->colwise().mean().transpose();
    const Eigen::VectorXd gb = ex.local_b->colwise().mean().transpose();
    return Eigen::VectorXd(ga.cwiseProduct(gb));
  };
  const Eigen::Index d = train.front().local_a->cols();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(train.size()), d + 1);
  Eigen::VectorXd y(x.rows());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    x.row(r).head(d) = feature(train[i]).transpose();
    x(r, d) = 1.0;
    y(r) = train[i].label;
  }
  // Standardise the feature columns.
  Eigen::VectorXd mean = x.colwise().mean().transpose();
  Eigen::VectorXd sd = ((x.rowwise() - mean.transpose()).array().square().colwise().mean())
                           .sqrt()
                           .transpose();
  mean(d) = 0.0;
  sd(d) = 1.0;
  for (Eigen::Index j = 0; j < sd.size(); ++j) if (sd(j) < 1e-12) sd(j) = 1.0;
  x = ((x.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array()).matrix();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd p = (1.0 / (1.0 + (-(x * w)).array().exp())).matrix();
    w -= step * x.transpose() * (p - y) / static_cast<double>(x.rows());
  }
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& ex : validation) {
    Eigen::VectorXd f(d + 1);
    f.head(d) = feature(ex);
    f(d) = 1.0;
    f = ((f - mean).array() / sd.array()).matrix();
    scores.push_back(f.dot(w));
    labels.push_back(ex.label);
  }
  return pairwise_auc(scores, labels);
}

}  // namespace boxrec::testing
