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

#include "support/helpers.hpp"

#include <ovaner/errors.hpp>
#include <ovaner/evaluation.hpp>
#include <ovaner/rng.hpp>
#include <ovaner/synthetic.hpp>
#include <ovaner/training.hpp>

#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

using namespace ovaner;
using ovaner::testing::corpus_from_text;

namespace {

const char* kFive = "John B-PER\nSmith I-PER\nvisited O\nParis B-LOC\n.\tO\n\n"
                    "The O\nUN B-ORG\nmet O\nin O\nGeneva B-LOC\n\n"
                    "Mary B-PER\nlikes O\nNew B-LOC\nYork I-LOC\n\n"
                    "It O\nrained O\ntoday O\n\n"
                    "Acme B-ORG\nCorp I-ORG\nhired O\nBob B-PER\n\n";

Corpus five()
{
   return corpus_from_text(kFive, "five");
}

Corpus synthetic(std::size_t n, std::uint64_t seed, std::vector<std::string> types = {"PER", "LOC"})
{
   SyntheticSpec spec;
   spec.sentences = n;
   spec.entity_types = std::move(types);
   spec.begin_pct = 8;
   spec.inside_pct = 6;
   spec.seed = seed;
   return make_synthetic_corpus(spec, "syn");
}

TrainConfig small_config(Method method, std::size_t epochs)
{
   TrainConfig cfg;
   cfg.method = method;
   cfg.max_epochs = epochs;
   cfg.patience = epochs;
   cfg.dims = {8, 4, 16, 1};
   return cfg;
}

std::string model_text(const ModelState& m)
{
   std::ostringstream out;
   write_model(out, m);
   return out.str();
}

std::string log_text(const std::vector<EpochLog>& log)
{
   std::ostringstream out;
   write_train_log(out, log);
   return out.str();
}

TrainingState fresh_state(const Corpus& c, Method method, std::uint64_t seed)
{
   RunInfo info;
   info.method = method;
   TrainingState st;
   st.model = init_model(build_label_set(c), build_vocabulary(c, 1), {6, 3, 10, 1}, info, seed);
   st.velocity = zeros_like(st.model.params);
   st.grads = zeros_like(st.model.params);
   st.duals.resize(st.model.label_count());
   return st;
}

} // namespace

TEST_CASE("TrainConfig defaults and validation")
{
   TrainConfig cfg;
   CHECK(cfg.method == Method::OvaAuc);
   CHECK(cfg.batch_sentences == 8);
   CHECK(cfg.max_epochs == 100);
   CHECK(cfg.patience == 10);
   CHECK(cfg.margin == 1.0);
   CHECK(cfg.sampled_heads(9) == 3);
   CHECK(cfg.sampled_heads(10) == 4);
   CHECK(cfg.sampled_heads(1) == 1);
   CHECK_NOTHROW(cfg.validate(9));

   auto with = [](auto mutate) {
      TrainConfig c;
      mutate(c);
      return c;
   };
   CHECK_THROWS_AS(with([](auto& c) { c.maml_m = 10; }).validate(9), ConfigError);
   CHECK_THROWS_AS(with([](auto& c) { c.maml_m = 0; }).validate(9), ConfigError);
   CHECK_THROWS_AS(with([](auto& c) { c.patience = 101; }).validate(9), ConfigError);
   CHECK_THROWS_AS(with([](auto& c) { c.batch_sentences = 0; }).validate(9), ConfigError);
   CHECK_THROWS_AS(with([](auto& c) { c.margin = 0; }).validate(9), ConfigError);
   CHECK_THROWS_AS(with([](auto& c) { c.optimizer.momentum = 1.5; }).validate(9), ConfigError);
   CHECK_NOTHROW(with([](auto& c) { c.max_epochs = 0; }).validate(9));
}

TEST_CASE("train config JSON")
{
   TrainConfig cfg;
   cfg.method = Method::OvaAucMaml;
   cfg.maml_m = 2;
   cfg.seed = 123456789012345ULL;
   cfg.optimizer.lr_primal = 0.125;
   cfg.dims.window = 2;
   CHECK(train_config_from_json(to_json(cfg)) == cfg);
   CHECK(train_config_from_json(nlohmann::json::object()) == TrainConfig{});

   const auto partial = train_config_from_json(nlohmann::json{{"method", "ce"}, {"lr_dual", 0.01}});
   CHECK(partial.method == Method::Ce);
   CHECK(partial.optimizer.lr_dual == 0.01);
   CHECK(partial.batch_sentences == 8);

   CHECK_THROWS_WITH_AS(train_config_from_json(nlohmann::json{{"learning_rate", 0.1}}),
                        "unknown config key 'learning_rate'", ConfigError);
   CHECK_THROWS_AS(train_config_from_json(nlohmann::json{{"max_epochs", -1}}), ConfigError);
   CHECK_THROWS_AS(train_config_from_json(nlohmann::json{{"method", 3}}), ConfigError);
   CHECK_THROWS_AS(train_config_from_json(nlohmann::json{{"method", "svm"}}), ConfigError);
   CHECK_THROWS_AS(train_config_from_json(nlohmann::json::array()), ConfigError);
}

TEST_CASE("prefix groups")
{
   const LabelSet conll({"B-LOC", "B-MISC", "B-ORG", "B-PER", "I-LOC", "I-MISC", "I-ORG", "I-PER"});
   const auto groups = prefix_groups(conll);
   REQUIRE(groups.size() == 3);
   CHECK(groups[0].size() == 4);
   CHECK(groups[1].size() == 4);
   CHECK(groups[2] == std::vector<std::size_t>{0});
   for (auto k : groups[0])
   {
      CHECK(conll.label(k)[0] == 'B');
   }
   for (auto k : groups[1])
   {
      CHECK(conll.label(k)[0] == 'I');
   }

   const LabelSet only_o(std::vector<std::string>{});
   CHECK(prefix_groups(only_o) == std::vector<std::vector<std::size_t>>{{0}});
   const LabelSet no_inside({"B-X"});
   CHECK(prefix_groups(no_inside).size() == 2);
}

TEST_CASE("make_batches partitions the sentences every pass")
{
   for (std::size_t n : {1, 7, 8, 9, 50})
   {
      for (std::size_t bs : {1, 3, 8})
      {
         for (std::size_t pass = 0; pass < 3; ++pass)
         {
            const auto batches = make_batches(n, bs, 17, 4, pass);
            std::multiset<std::size_t> seen;
            for (const auto& b : batches)
            {
               CHECK(b.size() >= 1);
               CHECK(b.size() <= bs);
               seen.insert(b.begin(), b.end());
            }
            CHECK(seen.size() == n);
            CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == n);
            CHECK(batches.size() == (n + bs - 1) / bs);
         }
      }
   }
   CHECK(make_batches(50, 8, 1, 2, 0) == make_batches(50, 8, 1, 2, 0));
   CHECK(make_batches(50, 8, 1, 2, 0) != make_batches(50, 8, 1, 2, 1));
   CHECK(make_batches(50, 8, 1, 2, 0) != make_batches(50, 8, 1, 3, 0));
}

TEST_CASE("sample_heads draws distinct heads at the expected rate")
{
   std::vector<int> counts(9, 0);
   for (std::size_t epoch = 0; epoch < 1000; ++epoch)
   {
      const auto h = sample_heads(9, 3, 2024, epoch);
      REQUIRE(h.size() == 3);
      CHECK(std::set<std::size_t>(h.begin(), h.end()).size() == 3);
      CHECK(std::is_sorted(h.begin(), h.end()));
      for (auto k : h)
      {
         ++counts[k];
      }
   }
   for (int c : counts)
   {
      CHECK(c >= 270);
      CHECK(c <= 400);
   }
   CHECK(sample_heads(9, 9, 1, 0) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8});
   CHECK(sample_heads(9, 3, 1, 5) == sample_heads(9, 3, 1, 5));
}

TEST_CASE("head_priors are clamped positive fractions")
{
   const auto c = five();
   const auto ls = build_label_set(c);
   const auto data = index_corpus(c, ls);
   const auto p = head_priors(data, ls.size());
   CHECK(p[ls.index("O")] == doctest::Approx(10.0 / 21.0));
   CHECK(p[ls.index("B-PER")] == doctest::Approx(3.0 / 21.0));
   const auto with_unused = index_corpus(c, LabelSet({"B-PER", "I-PER", "B-LOC", "I-LOC", "B-ORG", "I-ORG", "B-X"}));
   const auto q = head_priors(with_unused, 8);
   CHECK(q[LabelSet({"B-PER", "I-PER", "B-LOC", "I-LOC", "B-ORG", "I-ORG", "B-X"}).index("B-X")] == kPriorClamp);
}

TEST_CASE("an OVA-AUC pass touches only its group's heads, shared encoder and duals")
{
   const auto c = synthetic(40, 1);
   auto st = fresh_state(c, Method::OvaAuc, 3);
   const auto data = index_corpus(c, st.model.label_set);
   const auto priors = head_priors(data, st.model.label_count());
   for (std::size_t k = 0; k < priors.size(); ++k)
   {
      st.duals[k].prior = priors[k];
   }
   const auto before = st;
   const auto groups = prefix_groups(st.model.label_set);
   REQUIRE(groups.size() == 3);
   const auto& b_group = groups[0];
   run_ova_pass(st, data, make_batches(40, 8, 0, 0, 0), b_group, true, OptimizerConfig{}, 0);

   CHECK_FALSE(st.model.params.encoder == before.model.params.encoder);
   for (std::size_t k = 0; k < st.model.label_count(); ++k)
   {
      const bool in_group = std::find(b_group.begin(), b_group.end(), k) != b_group.end();
      CHECK((st.model.params.heads[k] == before.model.params.heads[k]) != in_group);
      CHECK((st.duals[k].a == before.duals[k].a && st.duals[k].alpha == before.duals[k].alpha) != in_group);
      CHECK((st.velocity.heads[k] == before.velocity.heads[k]) != in_group);
   }
}

TEST_CASE("OVA-AUC epoch visits the B, I and O groups")
{
   const auto c = synthetic(24, 2);
   auto st = fresh_state(c, Method::OvaAuc, 4);
   const auto before = st;
   const auto data = index_corpus(c, st.model.label_set);
   TrainConfig cfg;
   epoch_ova_auc(st, data, cfg, 0);
   for (std::size_t k = 0; k < st.model.label_count(); ++k)
   {
      CHECK_FALSE(st.model.params.heads[k] == before.model.params.heads[k]);
   }

   // The same three passes done by hand.
   auto manual = before;
   std::size_t pass = 0;
   for (const auto& g : prefix_groups(manual.model.label_set))
   {
      run_ova_pass(manual, data, make_batches(24, cfg.batch_sentences, cfg.seed, 0, pass++), g, true, cfg.optimizer,
                   0);
   }
   CHECK(manual.model.params == st.model.params);
}

TEST_CASE("OVA-AUC-MAML epochs")
{
   const auto c = synthetic(24, 3, {"A", "B", "C", "D"});
   const auto data_labels = build_label_set(c);
   REQUIRE(data_labels.size() == 9);

   SUBCASE("maml_m == K is one all-heads pass")
   {
      auto st = fresh_state(c, Method::OvaAucMaml, 5);
      auto manual = st;
      const auto data = index_corpus(c, st.model.label_set);
      TrainConfig cfg;
      cfg.method = Method::OvaAucMaml;
      cfg.maml_m = 9;
      epoch_ova_auc_maml(st, data, cfg, 3);
      std::vector<std::size_t> all(9);
      std::iota(all.begin(), all.end(), std::size_t{0});
      run_ova_pass(manual, data, make_batches(24, cfg.batch_sentences, cfg.seed, 3, 0), all, true, cfg.optimizer, 3);
      CHECK(manual.model.params == st.model.params);
   }
   SUBCASE("maml_m == 1 updates exactly one head")
   {
      auto st = fresh_state(c, Method::OvaAucMaml, 6);
      const auto before = st;
      const auto data = index_corpus(c, st.model.label_set);
      TrainConfig cfg;
      cfg.maml_m = 1;
      for (std::size_t epoch = 0; epoch < 5; ++epoch)
      {
         const auto prev = st;
         epoch_ova_auc_maml(st, data, cfg, epoch);
         int changed = 0;
         for (std::size_t k = 0; k < 9; ++k)
         {
            changed += st.model.params.heads[k] == prev.model.params.heads[k] ? 0 : 1;
         }
         CHECK(changed == 1);
         CHECK_FALSE(st.model.params.encoder == prev.model.params.encoder);
      }
   }
}

TEST_CASE("CE epoch keeps the softmax bias balanced")
{
   // Rows of the CE gradient sum to zero, so the bias total stays at zero.
   const auto c = synthetic(30, 4);
   auto st = fresh_state(c, Method::Ce, 7);
   const auto data = index_corpus(c, st.model.label_set);
   TrainConfig cfg;
   cfg.method = Method::Ce;
   for (std::size_t epoch = 0; epoch < 3; ++epoch)
   {
      epoch_ce(st, data, cfg, epoch);
   }
   const auto& bias = st.model.params.multiclass->bias;
   CHECK(std::abs(std::accumulate(bias.begin(), bias.end(), 0.0)) < 1e-12);
   CHECK(std::any_of(bias.begin(), bias.end(), [](double b) { return b != 0.0; }));
}

TEST_CASE("OVA-BCE with a single head is logistic regression on the O label")
{
   const auto c = corpus_from_text("a O\nb O\n\nc O\n");
   auto st = fresh_state(c, Method::OvaBce, 8);
   REQUIRE(st.model.label_count() == 1);
   const auto data = index_corpus(c, st.model.label_set);
   TrainConfig cfg;
   cfg.method = Method::OvaBce;
   double previous = 0.0;
   for (std::size_t epoch = 0; epoch < 30; ++epoch)
   {
      const double loss = epoch_ova_bce(st, data, cfg, epoch);
      if (epoch > 0)
      {
         CHECK(loss < previous);
      }
      previous = loss;
   }
   const auto scores = head_score(st.model, encode(st.model, c.sentences[0]), 0);
   CHECK(scores[0] > 0.9);
}

TEST_CASE("train with max_epochs = 0 returns the initial model")
{
   const auto c = five();
   auto cfg = small_config(Method::OvaAuc, 0);
   cfg.seed = 5;
   const auto r = train(c, c, cfg);
   CHECK(r.log.empty());
   CHECK_FALSE(r.best_epoch.has_value());
   const auto init = init_model(build_label_set(c), build_vocabulary(c, 1), cfg.dims, r.model.info, 5);
   CHECK(r.model.params == init.params);
}

TEST_CASE("train is deterministic for every method")
{
   const auto c = synthetic(30, 5);
   const auto dev = synthetic(10, 6);
   for (auto method : {Method::Ce, Method::OvaBce, Method::OvaAuc, Method::OvaAucMaml})
   {
      auto cfg = small_config(method, 4);
      cfg.seed = 77;
      const auto a = train(c, dev, cfg);
      const auto b = train(c, dev, cfg);
      CHECK(model_text(a.model) == model_text(b.model));
      CHECK(log_text(a.log) == log_text(b.log));
      cfg.seed = 78;
      CHECK(model_text(train(c, dev, cfg).model) != model_text(a.model));
   }
}

TEST_CASE("OVA-AUC memorizes a five-sentence training set")
{
   const auto c = five();
   // One update per sentence and no early exit; otherwise defaults.
   TrainConfig cfg;
   cfg.method = Method::OvaAuc;
   cfg.batch_sentences = 1;
   cfg.patience = cfg.max_epochs;
   const auto r = train(c, c, cfg);
   REQUIRE_FALSE(r.log.empty());
   CHECK(r.log.size() <= 100);
   double best = 0;
   for (const auto& e : r.log)
   {
      best = std::max(best, e.dev_f1);
   }
   CHECK(best == 1.0);
   CHECK(evaluate(r.model, c).f1 == 1.0);
}

TEST_CASE("early stopping returns the best dev snapshot")
{
   // A large constant learning rate makes dev F1 wander; look for a run
   // whose peak is strictly inside the run and higher than its last epoch.
   const auto c = synthetic(40, 7);
   const auto dev = synthetic(20, 8);
   bool found = false;
   for (std::uint64_t seed = 0; seed < 30 && !found; ++seed)
   {
      auto cfg = small_config(Method::OvaAuc, 25);
      cfg.seed = seed;
      cfg.optimizer.lr_primal = 0.5;
      cfg.optimizer.lr_decay = 1.0;
      const auto full = train(c, dev, cfg);
      REQUIRE(full.best_epoch.has_value());
      const auto best = *full.best_epoch;
      if (best == 0 || best + 1 >= full.log.size() || full.log.back().dev_f1 >= full.log[best].dev_f1)
      {
         continue;
      }
      found = true;
      for (const auto& e : full.log)
      {
         CHECK(e.dev_f1 <= full.log[best].dev_f1);
      }
      CHECK(evaluate(full.model, dev).f1 == doctest::Approx(full.log[best].dev_f1).epsilon(1e-12));

      // Stopping right at the peak reproduces the same parameters.
      cfg.max_epochs = best + 1;
      cfg.patience = best + 1;
      const auto cut = train(c, dev, cfg);
      CHECK(cut.best_epoch == best);
      CHECK(cut.model.params == full.model.params);
   }
   CHECK(found);
}

TEST_CASE("patience stops training")
{
   const auto c = five();
   auto cfg = small_config(Method::OvaBce, 50);
   cfg.patience = 2;
   cfg.optimizer.lr_primal = 1e-9; // nothing improves after the first epoch
   const auto r = train(c, c, cfg);
   CHECK(r.log.size() == 3);
   CHECK(r.best_epoch == std::optional<std::size_t>(0));
}

TEST_CASE("frozen encoder: head and duals alone learn a linear rule")
{
   const auto c = synthetic(30, 9);
   auto st = fresh_state(c, Method::OvaAuc, 10);
   Rng rng(10);
   std::vector<double> direction(st.model.params.encoder.dims.hidden_dim);
   for (auto& d : direction)
   {
      d = rng.uniform(-1, 1);
   }
   // Labels from a linear rule on the frozen features, with a gap.
   std::vector<Matrix> features;
   std::vector<std::vector<int>> labels;
   double pos = 0;
   double total = 0;
   for (const auto& s : c.sentences)
   {
      features.push_back(encode(st.model, s));
      std::vector<int> z;
      for (std::size_t i = 0; i < s.size(); ++i)
      {
         const auto row = features.back().row(i);
         const double v = dot(row, direction);
         z.push_back(v > 0.02 ? 1 : -1);
         pos += v > 0.02 ? 1 : 0;
         ++total;
      }
      labels.push_back(std::move(z));
   }
   REQUIRE(pos > 0);
   REQUIRE(pos < total);

   HeadDualState dual;
   dual.prior = pos / total;
   const OptimizerConfig opt;
   std::vector<double> vel_w(direction.size(), 0.0);
   std::vector<double> vel_b(1, 0.0);
   std::vector<double> all_scores;
   std::vector<int> all_labels;
   double first_auc = -1;
   for (int step = 0; step < 3000; ++step)
   {
      all_scores.clear();
      all_labels.clear();
      for (std::size_t s = 0; s < features.size(); ++s)
      {
         const auto h = head_score(st.model, features[s], 0);
         all_scores.insert(all_scores.end(), h.begin(), h.end());
         all_labels.insert(all_labels.end(), labels[s].begin(), labels[s].end());
      }
      const auto r = auc_margin_loss(all_scores, all_labels, dual);
      if (first_auc < 0)
      {
         first_auc = token_auc(all_scores, all_labels);
      }
      // Chain rule through the logistic head only.
      std::vector<double> gw(direction.size(), 0.0);
      std::vector<double> gb(1, 0.0);
      std::size_t t = 0;
      for (const auto& f : features)
      {
         for (std::size_t i = 0; i < f.rows(); ++i, ++t)
         {
            const double d = r.d_scores[t] * all_scores[t] * (1 - all_scores[t]);
            for (std::size_t j = 0; j < gw.size(); ++j)
            {
               gw[j] += d * f(i, j);
            }
            gb[0] += d;
         }
      }
      auto& head = st.model.params.heads[0];
      std::vector<double> bias{head.bias};
      step_primal(head.weight, gw, vel_w, opt.lr_primal * 20, opt.momentum, "head");
      step_primal(bias, gb, vel_b, opt.lr_primal * 20, opt.momentum, "head");
      head.bias = bias[0];
      dual = step_dual(dual, r.d_a, r.d_b, r.d_alpha, opt.lr_dual);
   }
   // The square surrogate is not a ranking loss, so perfect AUC is not owed.
   const double auc = token_auc(all_scores, all_labels);
   CHECK(auc > first_auc);
   CHECK(auc > 0.95);
}

TEST_CASE("train honours a label-set override and fills run info")
{
   const auto c = five();
   const LabelSet wide({"B-PER", "I-PER", "B-LOC", "I-LOC", "B-ORG", "I-ORG", "B-MISC", "I-MISC"});
   TrainOptions opts;
   opts.label_set = wide;
   opts.info.entity_pct = 5.0;
   auto cfg = small_config(Method::OvaAucMaml, 2);
   int calls = 0;
   opts.on_epoch = [&](const EpochLog&) { ++calls; };
   const auto r = train(c, c, cfg, opts);
   CHECK(r.model.label_count() == 9);
   CHECK(r.model.info.corpus == "five");
   CHECK(r.model.info.train_size == 5);
   CHECK(r.model.info.entity_pct == std::optional<double>(5.0));
   CHECK(r.model.info.method == Method::OvaAucMaml);
   CHECK(calls == 2);
}

TEST_CASE("train errors")
{
   const auto c = five();
   const auto cfg = small_config(Method::OvaAuc, 1);
   CHECK_THROWS_AS(train(Corpus{}, c, cfg), ValidationError);
   CHECK_THROWS_AS(train(c, Corpus{}, cfg), ValidationError);
   const auto dev = corpus_from_text("x B-MISC\n");
   CHECK_THROWS_WITH_AS(train(c, dev, cfg), doctest::Contains("B-MISC"), ValidationError);
   auto bad = cfg;
   bad.maml_m = 99;
   CHECK_THROWS_AS(train(c, c, bad), ConfigError);
   TrainOptions narrow;
   narrow.label_set = LabelSet({"B-PER"});
   CHECK_THROWS_AS(train(c, c, cfg, narrow), ValidationError);
}

TEST_CASE("write_train_log")
{
   std::ostringstream out;
   write_train_log(out, {{0, 1.5, 0.25, true}, {1, 1.25, 0.2, false}});
   CHECK(out.str() == "epoch,loss,dev_f1,improved\n0,1.500000000,0.250000,1\n1,1.250000000,0.200000,0\n");
}
