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
#include "ovaner/losses.hpp"
#include "ovaner/model.hpp"
#include "ovaner/optimizer.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ovaner {

struct TrainConfig
{
   Method method = Method::OvaAuc;
   std::size_t batch_sentences = 8;
   std::size_t max_epochs = 100;
   std::size_t patience = 10;           ///< epochs without dev F1 improvement before stopping
   std::optional<std::size_t> maml_m;   ///< heads sampled per epoch; default ceil(K / 3)
   double margin = 1.0;
   std::uint64_t seed = 0;
   std::size_t min_count = 1;
   OptimizerConfig optimizer;
   EncoderDims dims;

   /// Throws ConfigError on out-of-range values; `label_count` is K.
   void validate(std::size_t label_count) const;

   std::size_t sampled_heads(std::size_t label_count) const;

   bool operator==(const TrainConfig&) const = default;
};

/// Flat JSON object; every key optional, unknown keys rejected.
TrainConfig train_config_from_json(const nlohmann::json& j);
/// Applies the keys of `j` on top of `base`.
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base);
nlohmann::json to_json(const TrainConfig& cfg);

struct EpochLog
{
   std::size_t epoch = 0;
   double loss = 0.0;   ///< mean summed loss per batch, added over the epoch's passes
   double dev_f1 = 0.0;
   bool improved = false;
};

struct TrainOptions
{
   /// Overrides the label set derived from the training corpus (must be a
   /// superset of it). Used when a small sample should keep the full
   /// corpus's heads.
   std::optional<LabelSet> label_set;
   RunInfo info;
   /// Called after each epoch; purely observational.
   std::function<void(const EpochLog&)> on_epoch;
};

struct TrainResult
{
   ModelState model;
   std::vector<EpochLog> log;
   std::optional<std::size_t> best_epoch;
};

/// Trains with the configured method and returns the best-dev snapshot.
TrainResult train(const Corpus& train_corpus, const Corpus& dev, const TrainConfig& cfg,
                  const TrainOptions& options = {});

void write_train_log(std::ostream& out, const std::vector<EpochLog>& log);

/// Head indices whose label starts with `prefix` ('B', 'I' or 'O').
std::vector<std::size_t> heads_with_prefix(const LabelSet& label_set, char prefix);

/// The prefix groups visited by one OVA-AUC epoch, in B, I, O order,
/// skipping empty groups.
std::vector<std::vector<std::size_t>> prefix_groups(const LabelSet& label_set);

/// `count` distinct head indices drawn uniformly for `epoch`, ascending.
std::vector<std::size_t> sample_heads(std::size_t label_count, std::size_t count, std::uint64_t seed,
                                      std::size_t epoch);

/// Sentence batches for one pass. Methods share this so that equal seeds
/// give equal batch sequences.
std::vector<std::vector<std::size_t>> make_batches(std::size_t sentence_count, std::size_t batch_sentences,
                                                   std::uint64_t seed, std::size_t epoch, std::size_t pass);

/// Per-head training state (dual variables) plus the optimizer velocity.
struct TrainingState
{
   ModelState model;
   Parameters velocity;
   Parameters grads; ///< scratch, same shapes as the parameters
   std::vector<HeadDualState> duals;
};

/// Training data with tags resolved to head indices.
struct TrainingData
{
   const Corpus* corpus = nullptr;
   std::vector<std::vector<std::size_t>> label_ids;
};

TrainingData index_corpus(const Corpus& corpus, const LabelSet& label_set);

/// Positive-token fraction per head, clamped.
std::vector<double> head_priors(const TrainingData& data, std::size_t label_count);

/// Dual variables of every head at their closed-form optimum for the
/// model's current scores on `data`.
std::vector<HeadDualState> initial_duals(const ModelState& model, const TrainingData& data, double margin);

/// One pass over `batches` optimising the summed loss of `heads`
/// (AUC margin when `auc` is true, BCE otherwise). Returns mean batch loss.
double run_ova_pass(TrainingState& state, const TrainingData& data,
                    const std::vector<std::vector<std::size_t>>& batches, std::span<const std::size_t> heads,
                    bool auc, const OptimizerConfig& opt, std::size_t epoch);

/// One pass of softmax cross entropy on the multi-class head.
double run_ce_pass(TrainingState& state, const TrainingData& data,
                   const std::vector<std::vector<std::size_t>>& batches, const OptimizerConfig& opt,
                   std::size_t epoch);

/// Algorithm-level epochs.
double epoch_ova_auc(TrainingState& state, const TrainingData& data, const TrainConfig& cfg, std::size_t epoch);
double epoch_ova_auc_maml(TrainingState& state, const TrainingData& data, const TrainConfig& cfg,
                          std::size_t epoch);
double epoch_ova_bce(TrainingState& state, const TrainingData& data, const TrainConfig& cfg, std::size_t epoch);
double epoch_ce(TrainingState& state, const TrainingData& data, const TrainConfig& cfg, std::size_t epoch);

} // namespace ovaner
