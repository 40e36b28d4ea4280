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

#include "ovaner/training.hpp"

#include "ovaner/errors.hpp"
#include "ovaner/evaluation.hpp"
#include "ovaner/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

namespace ovaner {

void TrainConfig::validate(std::size_t label_count) const
{
   if (batch_sentences < 1)
   {
      throw ConfigError("batch_sentences must be >= 1");
   }
   if (max_epochs > 0 && patience > max_epochs)
   {
      throw ConfigError("patience (" + std::to_string(patience) + ") must not exceed max_epochs (" +
                        std::to_string(max_epochs) + ")");
   }
   if (maml_m && (*maml_m < 1 || *maml_m > label_count))
   {
      throw ConfigError("maml_m must lie in [1, K] with K = " + std::to_string(label_count));
   }
   if (!(margin > 0.0) || !std::isfinite(margin))
   {
      throw ConfigError("margin must be > 0");
   }
   if (min_count < 1)
   {
      throw ConfigError("min_count must be >= 1");
   }
   if (dims.word_dim < 1 || dims.case_dim < 1 || dims.hidden_dim < 1)
   {
      throw ConfigError("word_dim, case_dim and hidden_dim must be >= 1");
   }
   optimizer.validate();
}

std::size_t TrainConfig::sampled_heads(std::size_t label_count) const
{
   return maml_m.value_or((label_count + 2) / 3);
}

namespace {

template <typename T>
T get_key(const nlohmann::json& value, const std::string& key)
{
   try
   {
      return value.get<T>();
   }
   catch (const nlohmann::json::exception&)
   {
      throw ConfigError("config key '" + key + "' has the wrong type: " + value.dump());
   }
}

std::size_t get_count(const nlohmann::json& value, const std::string& key)
{
   if (!value.is_number_integer() || value.get<long long>() < 0)
   {
      throw ConfigError("config key '" + key + "' must be a non-negative integer, got " + value.dump());
   }
   return value.get<std::size_t>();
}

} // namespace

TrainConfig train_config_from_json(const nlohmann::json& j)
{
   return train_config_from_json(j, TrainConfig{});
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig cfg)
{
   if (!j.is_object())
   {
      throw ConfigError("training config must be a JSON object");
   }
   for (const auto& [key, value] : j.items())
   {
      if (key == "method")
      {
         cfg.method = parse_method(get_key<std::string>(value, key));
      }
      else if (key == "batch_sentences")
      {
         cfg.batch_sentences = get_count(value, key);
      }
      else if (key == "max_epochs")
      {
         cfg.max_epochs = get_count(value, key);
      }
      else if (key == "patience")
      {
         cfg.patience = get_count(value, key);
      }
      else if (key == "maml_m")
      {
         cfg.maml_m = value.is_null() ? std::nullopt : std::optional<std::size_t>(get_count(value, key));
      }
      else if (key == "margin")
      {
         cfg.margin = get_key<double>(value, key);
      }
      else if (key == "seed")
      {
         if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
         {
            throw ConfigError("config key 'seed' must be a non-negative integer, got " + value.dump());
         }
         cfg.seed = value.get<std::uint64_t>();
      }
      else if (key == "min_count")
      {
         cfg.min_count = get_count(value, key);
      }
      else if (key == "lr_primal")
      {
         cfg.optimizer.lr_primal = get_key<double>(value, key);
      }
      else if (key == "lr_dual")
      {
         cfg.optimizer.lr_dual = get_key<double>(value, key);
      }
      else if (key == "lr_decay")
      {
         cfg.optimizer.lr_decay = get_key<double>(value, key);
      }
      else if (key == "momentum")
      {
         cfg.optimizer.momentum = get_key<double>(value, key);
      }
      else if (key == "word_dim")
      {
         cfg.dims.word_dim = get_count(value, key);
      }
      else if (key == "case_dim")
      {
         cfg.dims.case_dim = get_count(value, key);
      }
      else if (key == "hidden_dim")
      {
         cfg.dims.hidden_dim = get_count(value, key);
      }
      else if (key == "window")
      {
         cfg.dims.window = get_count(value, key);
      }
      else
      {
         throw ConfigError("unknown config key '" + key + "'");
      }
   }
   return cfg;
}

nlohmann::json to_json(const TrainConfig& cfg)
{
   nlohmann::json j;
   j["method"] = std::string(to_string(cfg.method));
   j["batch_sentences"] = cfg.batch_sentences;
   j["max_epochs"] = cfg.max_epochs;
   j["patience"] = cfg.patience;
   j["maml_m"] = cfg.maml_m ? nlohmann::json(*cfg.maml_m) : nlohmann::json(nullptr);
   j["margin"] = cfg.margin;
   j["seed"] = cfg.seed;
   j["min_count"] = cfg.min_count;
   j["lr_primal"] = cfg.optimizer.lr_primal;
   j["lr_dual"] = cfg.optimizer.lr_dual;
   j["lr_decay"] = cfg.optimizer.lr_decay;
   j["momentum"] = cfg.optimizer.momentum;
   j["word_dim"] = cfg.dims.word_dim;
   j["case_dim"] = cfg.dims.case_dim;
   j["hidden_dim"] = cfg.dims.hidden_dim;
   j["window"] = cfg.dims.window;
   return j;
}

void write_train_log(std::ostream& out, const std::vector<EpochLog>& log)
{
   out << "epoch,loss,dev_f1,improved\n";
   for (const auto& e : log)
   {
      out << e.epoch << ',' << format_fixed(e.loss, 9) << ',' << format_fixed(e.dev_f1, 6) << ','
          << (e.improved ? 1 : 0) << '\n';
   }
}

std::vector<std::size_t> heads_with_prefix(const LabelSet& label_set, char prefix)
{
   std::vector<std::size_t> out;
   for (std::size_t k = 0; k < label_set.size(); ++k)
   {
      if (parse_tag(label_set.label(k)).prefix == prefix)
      {
         out.push_back(k);
      }
   }
   return out;
}

std::vector<std::vector<std::size_t>> prefix_groups(const LabelSet& label_set)
{
   std::vector<std::vector<std::size_t>> groups;
   for (char prefix : {'B', 'I', 'O'})
   {
      auto g = heads_with_prefix(label_set, prefix);
      if (!g.empty())
      {
         groups.push_back(std::move(g));
      }
   }
   return groups;
}

std::vector<std::size_t> sample_heads(std::size_t label_count, std::size_t count, std::uint64_t seed,
                                      std::size_t epoch)
{
   std::vector<std::size_t> all(label_count);
   std::iota(all.begin(), all.end(), std::size_t{0});
   Rng rng(derive_seed(seed, {0x4d414d4c, epoch}));
   count = std::min(count, label_count);
   for (std::size_t i = 0; i < count; ++i)
   {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(label_count - i));
      std::swap(all[i], all[j]);
   }
   all.resize(count);
   std::sort(all.begin(), all.end());
   return all;
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t sentence_count, std::size_t batch_sentences,
                                                   std::uint64_t seed, std::size_t epoch, std::size_t pass)
{
   std::vector<std::size_t> order(sentence_count);
   std::iota(order.begin(), order.end(), std::size_t{0});
   Rng rng(derive_seed(seed, {0xba7c, epoch, pass}));
   rng.shuffle(std::span<std::size_t>(order));
   std::vector<std::vector<std::size_t>> batches;
   for (std::size_t i = 0; i < order.size(); i += batch_sentences)
   {
      const auto end = std::min(order.size(), i + batch_sentences);
      batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                           order.begin() + static_cast<std::ptrdiff_t>(end));
   }
   return batches;
}

TrainingData index_corpus(const Corpus& corpus, const LabelSet& label_set)
{
   TrainingData data;
   data.corpus = &corpus;
   data.label_ids.reserve(corpus.sentences.size());
   for (const auto& sentence : corpus.sentences)
   {
      std::vector<std::size_t> ids(sentence.size());
      for (std::size_t i = 0; i < sentence.size(); ++i)
      {
         ids[i] = label_set.index(sentence.labels[i]);
      }
      data.label_ids.push_back(std::move(ids));
   }
   return data;
}

std::vector<double> head_priors(const TrainingData& data, std::size_t label_count)
{
   std::vector<std::size_t> counts(label_count, 0);
   std::size_t total = 0;
   for (const auto& ids : data.label_ids)
   {
      for (auto k : ids)
      {
         ++counts[k];
      }
      total += ids.size();
   }
   std::vector<double> priors(label_count);
   for (std::size_t k = 0; k < label_count; ++k)
   {
      priors[k] = clamp_prior(total == 0 ? 0.0 : static_cast<double>(counts[k]) / static_cast<double>(total));
   }
   return priors;
}

std::vector<HeadDualState> initial_duals(const ModelState& model, const TrainingData& data, double margin)
{
   const std::size_t k_count = model.label_count();
   const auto priors = head_priors(data, k_count);
   std::vector<double> pos_sum(k_count, 0.0);
   std::vector<double> neg_sum(k_count, 0.0);
   std::vector<std::size_t> pos_n(k_count, 0);
   std::size_t total = 0;
   for (std::size_t s = 0; s < data.label_ids.size(); ++s)
   {
      const auto scores = head_scores(model, encode(model, data.corpus->sentences[s]));
      const auto& ids = data.label_ids[s];
      for (std::size_t i = 0; i < ids.size(); ++i)
      {
         for (std::size_t k = 0; k < k_count; ++k)
         {
            (ids[i] == k ? pos_sum : neg_sum)[k] += scores(i, k);
         }
         ++pos_n[ids[i]];
      }
      total += ids.size();
   }

   std::vector<HeadDualState> duals(k_count);
   for (std::size_t k = 0; k < k_count; ++k)
   {
      const double all = (pos_sum[k] + neg_sum[k]) / static_cast<double>(std::max<std::size_t>(total, 1));
      const std::size_t neg_n = total - pos_n[k];
      const double pos_mean = pos_n[k] > 0 ? pos_sum[k] / static_cast<double>(pos_n[k]) : all;
      const double neg_mean = neg_n > 0 ? neg_sum[k] / static_cast<double>(neg_n) : all;
      const auto opt = dual_optima(pos_mean, neg_mean, margin);
      duals[k] = HeadDualState{opt.a, opt.b, opt.alpha, margin, priors[k]};
   }
   return duals;
}

namespace {

void zero_groups(Parameters& grads, const GroupSelection& selection)
{
   for (auto& g : param_groups(grads, selection))
   {
      std::fill(g.values.begin(), g.values.end(), 0.0);
   }
}

void apply_primal(TrainingState& state, const GroupSelection& selection, const OptimizerConfig& opt,
                  std::size_t epoch)
{
   auto params = param_groups(state.model.params, selection);
   auto grads = param_groups(state.grads, selection);
   auto velocity = param_groups(state.velocity, selection);
   const double lr = opt.primal_rate(epoch);
   for (std::size_t i = 0; i < params.size(); ++i)
   {
      step_primal(params[i].values, grads[i].values, velocity[i].values, lr, opt.momentum, params[i].name);
   }
}

} // namespace

double run_ova_pass(TrainingState& state, const TrainingData& data,
                    const std::vector<std::vector<std::size_t>>& batches, std::span<const std::size_t> heads,
                    bool auc, const OptimizerConfig& opt, std::size_t epoch)
{
   if (heads.empty() || batches.empty())
   {
      return 0.0;
   }
   const auto& model = state.model;
   const std::size_t k_count = model.label_count();
   GroupSelection selection;
   selection.encoder = true;
   selection.heads.assign(heads.begin(), heads.end());

   struct DualGrad
   {
      double d_a = 0.0;
      double d_b = 0.0;
      double d_alpha = 0.0;
   };

   double total_loss = 0.0;
   std::vector<EncoderCache> caches;
   std::vector<Upstream> upstream;
   std::vector<DualGrad> dual_grads(k_count);
   std::vector<double> scores;
   std::vector<int> labels;

   for (const auto& batch : batches)
   {
      caches.clear();
      upstream.assign(batch.size(), Upstream{});
      for (auto s : batch)
      {
         caches.push_back(encode_cached(model, data.corpus->sentences[s]));
      }

      double batch_loss = 0.0;
      for (auto k : heads)
      {
         scores.clear();
         labels.clear();
         for (std::size_t b = 0; b < batch.size(); ++b)
         {
            const auto h = head_score(model, caches[b].features, k);
            scores.insert(scores.end(), h.begin(), h.end());
            for (auto id : data.label_ids[batch[b]])
            {
               labels.push_back(id == k ? 1 : -1);
            }
         }

         std::vector<double> d_scores;
         if (auc)
         {
            auto r = auc_margin_loss(scores, labels, state.duals[k]);
            batch_loss += r.loss;
            dual_grads[k] = {r.d_a, r.d_b, r.d_alpha};
            d_scores = std::move(r.d_scores);
         }
         else
         {
            auto r = bce_loss(scores, labels);
            batch_loss += r.loss;
            d_scores = std::move(r.d_scores);
         }

         std::size_t offset = 0;
         for (std::size_t b = 0; b < batch.size(); ++b)
         {
            auto& up = upstream[b].head_scores;
            up.resize(k_count);
            const auto l = caches[b].features.rows();
            up[k].assign(d_scores.begin() + static_cast<std::ptrdiff_t>(offset),
                         d_scores.begin() + static_cast<std::ptrdiff_t>(offset + l));
            offset += l;
         }
      }

      zero_groups(state.grads, selection);
      for (std::size_t b = 0; b < batch.size(); ++b)
      {
         accumulate_gradients(model, caches[b], upstream[b], state.grads);
      }
      apply_primal(state, selection, opt, epoch);
      if (auc)
      {
         const double lr = opt.dual_rate(epoch);
         for (auto k : heads)
         {
            state.duals[k] = step_dual(state.duals[k], dual_grads[k].d_a, dual_grads[k].d_b,
                                       dual_grads[k].d_alpha, lr);
         }
      }
      total_loss += batch_loss;
   }
   return total_loss / static_cast<double>(batches.size());
}

double run_ce_pass(TrainingState& state, const TrainingData& data,
                   const std::vector<std::vector<std::size_t>>& batches, const OptimizerConfig& opt,
                   std::size_t epoch)
{
   if (batches.empty())
   {
      return 0.0;
   }
   const auto& model = state.model;
   GroupSelection selection;
   selection.encoder = true;
   selection.multiclass = true;

   double total_loss = 0.0;
   std::vector<EncoderCache> caches;
   for (const auto& batch : batches)
   {
      caches.clear();
      std::vector<Matrix> logits;
      std::size_t n = 0;
      for (auto s : batch)
      {
         caches.push_back(encode_cached(model, data.corpus->sentences[s]));
         logits.push_back(multiclass_logits(model, caches.back().features));
         n += logits.back().rows();
      }
      const std::size_t k_count = model.label_count();
      Matrix stacked(n, k_count);
      std::vector<std::size_t> targets;
      targets.reserve(n);
      std::size_t row = 0;
      for (std::size_t b = 0; b < batch.size(); ++b)
      {
         for (std::size_t i = 0; i < logits[b].rows(); ++i, ++row)
         {
            std::copy(logits[b].row(i).begin(), logits[b].row(i).end(), stacked.row(row).begin());
         }
         const auto& ids = data.label_ids[batch[b]];
         targets.insert(targets.end(), ids.begin(), ids.end());
      }
      const auto r = ce_loss(stacked, targets);

      zero_groups(state.grads, selection);
      row = 0;
      for (std::size_t b = 0; b < batch.size(); ++b)
      {
         Upstream up;
         up.logits = Matrix(logits[b].rows(), k_count);
         for (std::size_t i = 0; i < logits[b].rows(); ++i, ++row)
         {
            std::copy(r.d_logits.row(row).begin(), r.d_logits.row(row).end(), up.logits.row(i).begin());
         }
         accumulate_gradients(model, caches[b], up, state.grads);
      }
      apply_primal(state, selection, opt, epoch);
      total_loss += r.loss;
   }
   return total_loss / static_cast<double>(batches.size());
}

double epoch_ova_auc(TrainingState& state, const TrainingData& data, const TrainConfig& cfg, std::size_t epoch)
{
   double loss = 0.0;
   std::size_t pass = 0;
   for (const auto& group : prefix_groups(state.model.label_set))
   {
      const auto batches = make_batches(data.label_ids.size(), cfg.batch_sentences, cfg.seed, epoch, pass++);
      loss += run_ova_pass(state, data, batches, group, true, cfg.optimizer, epoch);
   }
   return loss;
}

double epoch_ova_auc_maml(TrainingState& state, const TrainingData& data, const TrainConfig& cfg,
                          std::size_t epoch)
{
   const std::size_t k_count = state.model.label_count();
   const auto heads = sample_heads(k_count, cfg.sampled_heads(k_count), cfg.seed, epoch);
   const auto batches = make_batches(data.label_ids.size(), cfg.batch_sentences, cfg.seed, epoch, 0);
   return run_ova_pass(state, data, batches, heads, true, cfg.optimizer, epoch);
}

double epoch_ova_bce(TrainingState& state, const TrainingData& data, const TrainConfig& cfg, std::size_t epoch)
{
   std::vector<std::size_t> heads(state.model.label_count());
   std::iota(heads.begin(), heads.end(), std::size_t{0});
   const auto batches = make_batches(data.label_ids.size(), cfg.batch_sentences, cfg.seed, epoch, 0);
   return run_ova_pass(state, data, batches, heads, false, cfg.optimizer, epoch);
}

double epoch_ce(TrainingState& state, const TrainingData& data, const TrainConfig& cfg, std::size_t epoch)
{
   const auto batches = make_batches(data.label_ids.size(), cfg.batch_sentences, cfg.seed, epoch, 0);
   return run_ce_pass(state, data, batches, cfg.optimizer, epoch);
}

namespace {

double dev_entity_f1(const ModelState& model, const Corpus& dev)
{
   std::vector<std::vector<std::string>> predicted;
   predicted.reserve(dev.sentences.size());
   for (const auto& sentence : dev.sentences)
   {
      predicted.push_back(predict_tags(model, sentence));
   }
   return entity_f1(dev, predicted).f1;
}

} // namespace

TrainResult train(const Corpus& train_corpus, const Corpus& dev, const TrainConfig& cfg, const TrainOptions& options)
{
   if (train_corpus.sentences.empty())
   {
      throw ValidationError("training corpus is empty");
   }
   if (dev.sentences.empty())
   {
      throw ValidationError("dev corpus is empty");
   }
   for (const auto& s : train_corpus.sentences)
   {
      validate(s);
   }

   LabelSet label_set = options.label_set.value_or(build_label_set(train_corpus));
   for (const auto& s : train_corpus.sentences)
   {
      for (const auto& tag : s.labels)
      {
         if (!label_set.contains(tag))
         {
            throw ValidationError("training label '" + tag + "' missing from the given label set");
         }
      }
   }
   for (const auto& s : dev.sentences)
   {
      validate(s);
      for (const auto& tag : s.labels)
      {
         if (!label_set.contains(tag))
         {
            throw ValidationError("dev label '" + tag + "' does not occur in the training data");
         }
      }
   }
   cfg.validate(label_set.size());

   RunInfo info = options.info;
   info.method = cfg.method;
   info.seed = cfg.seed;
   if (info.corpus.empty())
   {
      info.corpus = train_corpus.name;
   }
   if (info.train_size == 0)
   {
      info.train_size = train_corpus.sentences.size();
   }

   TrainingState state;
   state.model =
      init_model(label_set, build_vocabulary(train_corpus, cfg.min_count), cfg.dims, info, cfg.seed);
   state.velocity = zeros_like(state.model.params);
   state.grads = zeros_like(state.model.params);

   const auto data = index_corpus(train_corpus, state.model.label_set);
   state.duals = initial_duals(state.model, data, cfg.margin);

   TrainResult result;
   result.model = state.model;
   double best_f1 = -std::numeric_limits<double>::infinity();
   std::size_t since_best = 0;
   for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch)
   {
      EpochLog entry;
      entry.epoch = epoch;
      switch (cfg.method)
      {
      case Method::Ce:
         entry.loss = epoch_ce(state, data, cfg, epoch);
         break;
      case Method::OvaBce:
         entry.loss = epoch_ova_bce(state, data, cfg, epoch);
         break;
      case Method::OvaAuc:
         entry.loss = epoch_ova_auc(state, data, cfg, epoch);
         break;
      case Method::OvaAucMaml:
         entry.loss = epoch_ova_auc_maml(state, data, cfg, epoch);
         break;
      }
      entry.dev_f1 = dev_entity_f1(state.model, dev);
      entry.improved = entry.dev_f1 > best_f1;
      if (entry.improved)
      {
         best_f1 = entry.dev_f1;
         result.model = state.model;
         result.best_epoch = epoch;
         since_best = 0;
      }
      else
      {
         ++since_best;
      }
      result.log.push_back(entry);
      if (options.on_epoch)
      {
         options.on_epoch(entry);
      }
      if (!entry.improved && since_best >= cfg.patience)
      {
         break;
      }
   }
   return result;
}

} // namespace ovaner
