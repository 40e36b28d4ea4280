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

#include <ovaner/corpus.hpp>
#include <ovaner/evaluation.hpp>
#include <ovaner/losses.hpp>
#include <ovaner/model.hpp>
#include <ovaner/rng.hpp>
#include <ovaner/sampling.hpp>
#include <ovaner/synthetic.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace ovaner;

const Corpus& pool()
{
   static const Corpus corpus = [] {
      SyntheticSpec spec;
      spec.sentences = 2000;
      spec.seed = 1;
      return make_synthetic_corpus(spec, "bench");
   }();
   return corpus;
}

ModelState bench_model(Method method)
{
   const auto& c = pool();
   RunInfo info;
   info.method = method;
   return init_model(build_label_set(c), build_vocabulary(c, 1), EncoderDims{}, info, 3);
}

void BM_Encode(benchmark::State& state)
{
   const auto model = bench_model(Method::OvaAuc);
   const auto& s = pool().sentences[0];
   for (auto _ : state)
   {
      benchmark::DoNotOptimize(encode_cached(model, s));
   }
   state.SetItemsProcessed(state.iterations() * static_cast<long>(s.tokens.size()));
}
BENCHMARK(BM_Encode);

void BM_Backward(benchmark::State& state)
{
   const auto model = bench_model(Method::OvaAuc);
   const auto& s = pool().sentences[0];
   const auto cache = encode_cached(model, s);
   Upstream up;
   up.head_scores.assign(model.label_count(), std::vector<double>(s.tokens.size(), 0.1));
   auto grads = zeros_like(model.params);
   for (auto _ : state)
   {
      accumulate_gradients(model, cache, up, grads);
      benchmark::ClobberMemory();
   }
   state.SetItemsProcessed(state.iterations() * static_cast<long>(s.tokens.size()));
}
BENCHMARK(BM_Backward);

std::pair<std::vector<double>, std::vector<int>> random_scores(std::size_t n)
{
   std::mt19937_64 gen(n);
   std::uniform_real_distribution<double> u(0.0, 1.0);
   std::vector<double> scores(n);
   std::vector<int> labels(n);
   for (std::size_t i = 0; i < n; ++i)
   {
      labels[i] = u(gen) < 0.05 ? 1 : -1;
      scores[i] = u(gen) + (labels[i] > 0 ? 0.2 : 0.0);
   }
   return {scores, labels};
}

void BM_AucMarginLoss(benchmark::State& state)
{
   const auto [scores, labels] = random_scores(static_cast<std::size_t>(state.range(0)));
   HeadDualState dual;
   dual.a = 0.7;
   dual.b = 0.2;
   dual.alpha = 0.5;
   dual.prior = 0.05;
   for (auto _ : state)
   {
      benchmark::DoNotOptimize(auc_margin_loss(scores, labels, dual));
   }
   state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AucMarginLoss)->Range(64, 1 << 14);

void BM_TokenAuc(benchmark::State& state)
{
   const auto [scores, labels] = random_scores(static_cast<std::size_t>(state.range(0)));
   for (auto _ : state)
   {
      benchmark::DoNotOptimize(token_auc(scores, labels));
   }
   state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TokenAuc)->Range(64, 1 << 16);

void BM_SampleImbalanced(benchmark::State& state)
{
   SampleSpec spec;
   spec.size = static_cast<std::size_t>(state.range(0));
   spec.entity_pct = 2.0;
   std::uint64_t seed = 0;
   for (auto _ : state)
   {
      spec.seed = seed++;
      benchmark::DoNotOptimize(sample_imbalanced(pool(), spec));
   }
}
BENCHMARK(BM_SampleImbalanced)->Arg(50)->Arg(100);

void BM_Evaluate(benchmark::State& state)
{
   const auto model = bench_model(Method::OvaAuc);
   Corpus dev;
   dev.name = "dev";
   dev.sentences.assign(pool().sentences.begin(), pool().sentences.begin() + 100);
   for (auto _ : state)
   {
      benchmark::DoNotOptimize(evaluate(model, dev));
   }
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
