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

// Pairwise compatibility decoder with mutual attention.
//
// For a pair (a, b) with local feature maps F_a, F_b (M x D1, one row per
// image location):
//
//   g_a, g_b      global average pools of F_a, F_b
//   alpha_b       softmax_i( attn_score . tanh(attn_local f_b^i + attn_context g_a) )
//   ghat_b        sum_i alpha_b[i] f_b^i          (and symmetrically ghat_a)
//   vf            ReLU(visual_proj ghat)
//   vw            text_embed t                    (t = bag-of-words indicator)
//   v             tanh(vf + vw)
//   s             LeakyReLU(shared_first v_a + shared_second v_b)
//   p             softmax(classifier s)           p(0) = mismatch, p(1) = match
//
// Both attention directions share the three attention tensors.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "boxrec/catalog.hpp"
#include "boxrec/features.hpp"
#include "boxrec/types.hpp"

namespace boxrec {

inline constexpr double kLeakySlope = 0.01;

struct DecoderShape {
  Eigen::Index channels = 16;  // D1
  Eigen::Index patches = 9;    // M
  Eigen::Index latent = 24;    // A1
  Eigen::Index shared = 32;    // B1
  Eigen::Index vocab = 0;      // |V|
  friend bool operator==(const DecoderShape&, const DecoderShape&) = default;
};

/// Learnable tensors of one pair-type decoder.
template <typename Scalar>
struct DecoderParams {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  PairType pair{ClothingType::top_wear, ClothingType::bottom_wear};
  Matrix attn_local;     // D1 x D1, applied to each location of the attended map
  Matrix attn_context;   // D1 x D1, applied to the other item's pooled vector
  Vector attn_score;     // D1
  Matrix visual_proj;    // A1 x D1
  Matrix text_embed;     // A1 x |V|
  Matrix shared_first;   // B1 x A1
  Matrix shared_second;  // B1 x A1
  Matrix classifier;     // 2 x B1

  static DecoderParams zeros(PairType pair, const DecoderShape& s) {
    DecoderParams p;
    p.pair = pair;
    p.attn_local = Matrix::Zero(s.channels, s.channels);
    p.attn_context = Matrix::Zero(s.channels, s.channels);
    p.attn_score = Vector::Zero(s.channels);
    p.visual_proj = Matrix::Zero(s.latent, s.channels);
    p.text_embed = Matrix::Zero(s.latent, s.vocab);
    p.shared_first = Matrix::Zero(s.shared, s.latent);
    p.shared_second = Matrix::Zero(s.shared, s.latent);
    p.classifier = Matrix::Zero(2, s.shared);
    return p;
  }

  DecoderShape shape(Eigen::Index patches = 0) const {
    return {attn_local.rows(), patches, visual_proj.rows(), shared_first.rows(),
            text_embed.cols()};
  }

  /// Visits (name, tensor) for all eight tensors in a fixed order. The vector
  /// is passed as a matrix view so callers can treat every tensor alike.
  template <typename Fn>
  void for_each_tensor(Fn&& fn) {
    fn("attn_local", attn_local);
    fn("attn_context", attn_context);
    fn("attn_score", attn_score);
    fn("visual_proj", visual_proj);
    fn("text_embed", text_embed);
    fn("shared_first", shared_first);
    fn("shared_second", shared_second);
    fn("classifier", classifier);
  }
  template <typename Fn>
  void for_each_tensor(Fn&& fn) const {
    fn("attn_local", attn_local);
    fn("attn_context", attn_context);
    fn("attn_score", attn_score);
    fn("visual_proj", visual_proj);
    fn("text_embed", text_embed);
    fn("shared_first", shared_first);
    fn("shared_second", shared_second);
    fn("classifier", classifier);
  }

  Scalar squared_norm() const {
    Scalar total(0);
    for_each_tensor([&](const char*, const auto& t) { total += t.squaredNorm(); });
    return total;
  }

  bool all_finite() const {
    bool ok = true;
    for_each_tensor([&](const char*, const auto& t) { ok = ok && t.allFinite(); });
    return ok;
  }

  /// Throws unless every tensor matches the shape implied by attn_local,
  /// visual_proj, text_embed and shared_first.
  void check_shapes() const {
    const auto s = shape();
    auto expect = [](const char* name, const auto& t, Eigen::Index r, Eigen::Index c) {
      if (t.rows() != r || t.cols() != c) {
        throw Error(std::string("decoder tensor ") + name + " has shape " +
                    std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                    ", expected " + std::to_string(r) + "x" + std::to_string(c));
      }
    };
    expect("attn_local", attn_local, s.channels, s.channels);
    expect("attn_context", attn_context, s.channels, s.channels);
    expect("attn_score", attn_score, s.channels, 1);
    expect("visual_proj", visual_proj, s.latent, s.channels);
    expect("text_embed", text_embed, s.latent, s.vocab);
    expect("shared_first", shared_first, s.shared, s.latent);
    expect("shared_second", shared_second, s.shared, s.latent);
    expect("classifier", classifier, 2, s.shared);
  }
};

using Decoder = DecoderParams<double>;

template <typename Scalar>
using LocalFeatures = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Numerically stable softmax.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(
    const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar top = logits.maxCoeff();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

/// Mean of the rows of a local feature map.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> global_pool(
    const Eigen::MatrixBase<Derived>& local) {
  return local.colwise().mean().transpose();
}

/// Unnormalized attention logits over the rows of `target`, conditioned on
/// the pooled vector of the other item.
template <typename Scalar, typename DerivedF, typename DerivedG>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> attention_logits(
    const Eigen::MatrixBase<DerivedF>& target, const Eigen::MatrixBase<DerivedG>& source_pool,
    const DecoderParams<Scalar>& p) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> context = p.attn_context * source_pool;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pre =
      target * p.attn_local.transpose();
  pre.rowwise() += context.transpose();
  return pre.array().tanh().matrix() * p.attn_score;
}

template <typename Scalar, typename DerivedF, typename DerivedG>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> attention_weights(
    const Eigen::MatrixBase<DerivedF>& target, const Eigen::MatrixBase<DerivedG>& source_pool,
    const DecoderParams<Scalar>& p) {
  return softmax(attention_logits(target, source_pool, p));
}

/// Convex combination of the rows of `local` with weights `alpha`.
template <typename DerivedF, typename DerivedA>
Eigen::Matrix<typename DerivedF::Scalar, Eigen::Dynamic, 1> attend(
    const Eigen::MatrixBase<DerivedF>& local, const Eigen::MatrixBase<DerivedA>& alpha) {
  if (alpha.size() != local.rows()) throw Error("attend: weight count must equal row count");
  return local.transpose() * alpha;
}

template <typename Scalar>
struct AttendedPair {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> first;   // attended features of a
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> second;  // attended features of b
};

/// b is attended under a's pooled vector and a under b's.
template <typename Scalar, typename DerivedA, typename DerivedB>
AttendedPair<Scalar> mutual_attention(const Eigen::MatrixBase<DerivedA>& local_a,
                                      const Eigen::MatrixBase<DerivedB>& local_b,
                                      const DecoderParams<Scalar>& p) {
  const auto pool_a = global_pool(local_a);
  const auto pool_b = global_pool(local_b);
  AttendedPair<Scalar> out;
  out.second = attend(local_b, attention_weights(local_b, pool_a, p));
  out.first = attend(local_a, attention_weights(local_a, pool_b, p));
  return out;
}

template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> project_visual(
    const Eigen::MatrixBase<Derived>& attended, const DecoderParams<Scalar>& p) {
  return (p.visual_proj * attended).cwiseMax(Scalar(0));
}

/// Sum of text_embed columns at the given vocabulary indices; equivalent to
/// multiplying by the binary bag-of-words indicator.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> embed_text(std::span<const std::size_t> tokens,
                                                    const DecoderParams<Scalar>& p) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(p.text_embed.rows());
  for (std::size_t k : tokens) {
    if (static_cast<Eigen::Index>(k) >= p.text_embed.cols()) {
      throw Error("embed_text: token index outside the vocabulary");
    }
    out += p.text_embed.col(static_cast<Eigen::Index>(k));
  }
  return out;
}

/// Vocabulary indices of an item's tokens, deduplicated and sorted.
std::vector<std::size_t> token_indices(const Item& item, const Vocabulary& vocabulary);

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> embed_text(const Item& item,
                                                    const Vocabulary& vocabulary,
                                                    const DecoderParams<Scalar>& p) {
  const auto idx = token_indices(item, vocabulary);
  return embed_text<Scalar>(idx, p);
}

template <typename DerivedF, typename DerivedW>
Eigen::Matrix<typename DerivedF::Scalar, Eigen::Dynamic, 1> fuse(
    const Eigen::MatrixBase<DerivedF>& visual, const Eigen::MatrixBase<DerivedW>& text) {
  if (visual.size() != text.size()) throw Error("fuse: dimension mismatch");
  return (visual + text).array().tanh().matrix();
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> leaky_relu(
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([](Scalar v) { return v > Scalar(0) ? v : Scalar(kLeakySlope) * v; });
}

/// (p(mismatch), p(match)).
template <typename Scalar, typename DerivedA, typename DerivedB>
Eigen::Matrix<Scalar, 2, 1> compat_probability(const Eigen::MatrixBase<DerivedA>& latent_a,
                                               const Eigen::MatrixBase<DerivedB>& latent_b,
                                               const DecoderParams<Scalar>& p) {
  const auto shared = leaky_relu(p.shared_first * latent_a + p.shared_second * latent_b);
  return softmax(p.classifier * shared);
}

/// 1 iff p(match) > p(mismatch), strictly.
template <typename Derived>
int binary_score(const Eigen::MatrixBase<Derived>& prob) {
  return prob(1) > prob(0) ? 1 : 0;
}

/// Every intermediate of one forward pass, kept for backpropagation.
template <typename Scalar>
struct PairForward {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Vector pool_a, pool_b;
  Matrix hidden_a, hidden_b;  // tanh activations of the attention MLP (M x D1)
  Vector alpha_a, alpha_b;    // weights over the locations of a and of b
  Vector attended_a, attended_b;
  Vector proj_a, proj_b;      // pre-ReLU visual projections
  Vector visual_a, visual_b;
  Vector text_a, text_b;
  Vector latent_a, latent_b;
  Vector shared_pre;
  Vector shared;
  Eigen::Matrix<Scalar, 2, 1> prob;
};

template <typename Scalar, typename DerivedA, typename DerivedB>
PairForward<Scalar> forward_pair(const Eigen::MatrixBase<DerivedA>& local_a,
                                 const Eigen::MatrixBase<DerivedB>& local_b,
                                 std::span<const std::size_t> tokens_a,
                                 std::span<const std::size_t> tokens_b,
                                 const DecoderParams<Scalar>& p) {
  if (local_a.cols() != p.attn_local.cols() || local_b.cols() != p.attn_local.cols()) {
    throw Error("feature map channel count does not match decoder");
  }
  PairForward<Scalar> f;
  f.pool_a = global_pool(local_a);
  f.pool_b = global_pool(local_b);

  auto hidden = [&](const auto& local, const auto& pool) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pre =
        local * p.attn_local.transpose();
    pre.rowwise() += (p.attn_context * pool).transpose();
    return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(pre.array().tanh());
  };
  f.hidden_b = hidden(local_b, f.pool_a);
  f.hidden_a = hidden(local_a, f.pool_b);
  f.alpha_b = softmax(f.hidden_b * p.attn_score);
  f.alpha_a = softmax(f.hidden_a * p.attn_score);
  f.attended_b = local_b.transpose() * f.alpha_b;
  f.attended_a = local_a.transpose() * f.alpha_a;

  f.proj_a = p.visual_proj * f.attended_a;
  f.proj_b = p.visual_proj * f.attended_b;
  f.visual_a = f.proj_a.cwiseMax(Scalar(0));
  f.visual_b = f.proj_b.cwiseMax(Scalar(0));
  f.text_a = embed_text<Scalar>(tokens_a, p);
  f.text_b = embed_text<Scalar>(tokens_b, p);
  f.latent_a = fuse(f.visual_a, f.text_a);
  f.latent_b = fuse(f.visual_b, f.text_b);
  f.shared_pre = p.shared_first * f.latent_a + p.shared_second * f.latent_b;
  f.shared = leaky_relu(f.shared_pre);
  f.prob = softmax(p.classifier * f.shared);
  return f;
}

/// Probability pair for two catalog items. The first item must be of the
/// decoder's first type and the second of its second type.
Eigen::Vector2d pair_probability(const Item& a, const Item& b, const FeatureStore& features,
                                 const Vocabulary& vocabulary, const Decoder& decoder);

/// Binary compatibility of two catalog items under the decoder of their pair type.
int pairwise_score(const Item& a, const Item& b, const FeatureStore& features,
                   const Vocabulary& vocabulary, const Decoder& decoder);

}  // namespace boxrec
