/*
   Copyright 2026 The ovaner Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "ovaner/corpus.hpp"
#include "ovaner/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ovaner {

enum class Method
{
   Ce,
   OvaBce,
   OvaAuc,
   OvaAucMaml,
};

std::string_view to_string(Method method) noexcept;
/// Accepts "ce", "ova-bce", "ova-auc", "ova-auc-maml".
Method parse_method(std::string_view name);

struct EncoderDims
{
   std::size_t word_dim = 32;
   std::size_t case_dim = 8;
   std::size_t hidden_dim = 64;
   std::size_t window = 1; ///< tokens of context on each side

   std::size_t token_width() const noexcept { return word_dim + case_dim; }
   std::size_t input_width() const noexcept { return (2 * window + 1) * token_width(); }
   bool operator==(const EncoderDims&) const = default;
};

/// Shared encoder: word and case embeddings feeding a tanh window layer.
struct EncoderParams
{
   EncoderDims dims;
   Matrix word_emb;              ///< [words + 1 (unk), word_dim]
   Matrix case_emb;              ///< [5, case_dim]
   Matrix hidden_w;              ///< [hidden_dim, input_width]
   std::vector<double> hidden_b; ///< [hidden_dim]

   bool operator==(const EncoderParams&) const = default;
};

/// One binary classifier on top of the encoder features.
struct HeadParams
{
   std::vector<double> weight; ///< [hidden_dim]
   double bias = 0.0;

   bool operator==(const HeadParams&) const = default;
};

/// Softmax layer used only by the multi-class cross-entropy baseline.
struct MulticlassHead
{
   Matrix weight;             ///< [K, hidden_dim]
   std::vector<double> bias;  ///< [K]

   bool operator==(const MulticlassHead&) const = default;
};

/// Everything that is trained. Also used as the gradient and velocity record.
struct Parameters
{
   EncoderParams encoder;
   std::vector<HeadParams> heads;
   std::optional<MulticlassHead> multiclass;

   bool operator==(const Parameters&) const = default;
};

/// Run identity carried along with a model so metrics rows can be keyed.
struct RunInfo
{
   Method method = Method::OvaAuc;
   std::string corpus;
   std::size_t train_size = 0;
   std::optional<double> entity_pct;
   std::uint64_t seed = 0;

   bool operator==(const RunInfo&) const = default;
};

struct ModelState
{
   Parameters params;
   LabelSet label_set;
   Vocabulary vocabulary;
   RunInfo info;

   std::size_t label_count() const noexcept { return label_set.size(); }
};

/// Fresh model: weights uniform(-0.1, 0.1) from `seed`, biases zero.
/// The multi-class head is created iff info.method == Method::Ce.
ModelState init_model(LabelSet label_set, Vocabulary vocabulary, const EncoderDims& dims, const RunInfo& info,
                      std::uint64_t seed);

/// Same shapes as `params`, all zeros.
Parameters zeros_like(const Parameters& params);
void set_zero(Parameters& params);

/// Named view of one contiguous parameter block.
struct ParamGroup
{
   std::string name;
   std::span<double> values;
};

/// Which blocks a training step touches.
struct GroupSelection
{
   bool encoder = true;
   std::vector<std::size_t> heads;
   bool multiclass = false;
};

/// Blocks in a fixed order: encoder (word_emb, case_emb, hidden_w, hidden_b),
/// then head[k].weight / head[k].bias for each selected k, then multiclass.
std::vector<ParamGroup> param_groups(Parameters& params, const GroupSelection& selection);
GroupSelection all_groups(const Parameters& params);

/// Intermediate values kept from the forward pass for backward().
struct EncoderCache
{
   std::vector<std::size_t> word_ids;
   std::vector<std::size_t> case_ids;
   Matrix inputs;   ///< [l, input_width], windowed embeddings, zeros past the edges
   Matrix features; ///< [l, hidden_dim]
};

EncoderCache encode_cached(const ModelState& model, const Sentence& sentence);

/// Row i is tanh(hidden_w * window_i + hidden_b).
Matrix encode(const ModelState& model, const Sentence& sentence);

/// Clamp applied to logistic outputs so that scores stay strictly in (0, 1).
inline constexpr double kScoreFloor = 1e-12;

double logistic(double x) noexcept;

/// Per-token probability of label k: logistic(w_k . f_i + b_k).
std::vector<double> head_score(const ModelState& model, const Matrix& features, std::size_t k);

/// Scores of all heads, [l, K].
Matrix head_scores(const ModelState& model, const Matrix& features);

/// Multi-class logits [l, K]; requires the CE head.
Matrix multiclass_logits(const ModelState& model, const Matrix& features);

/// Upstream derivatives of a scalar loss.
struct Upstream
{
   /// d loss / d score, one vector per head; an empty vector means the head
   /// is not part of the loss.
   std::vector<std::vector<double>> head_scores;
   /// d loss / d logits [l, K] for the multi-class head; empty when unused.
   Matrix logits;
};

/// Adds the parameter gradients for one sentence into `grads`.
void accumulate_gradients(const ModelState& model, const EncoderCache& cache, const Upstream& upstream,
                          Parameters& grads);

/// Parameter gradients for one sentence.
Parameters backward(const ModelState& model, const Sentence& sentence, const Upstream& upstream);

inline constexpr int kModelFormatVersion = 1;

void write_model(std::ostream& out, const ModelState& model);
ModelState read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const ModelState& model);
ModelState load_model(const std::filesystem::path& path);

} // namespace ovaner
