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

#include "ovaner/sampling.hpp"

#include "ovaner/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ovaner {

namespace {

void check_size(const Corpus& corpus, const SampleSpec& spec)
{
   if (spec.size < 1)
   {
      throw ConfigError("sample size must be >= 1");
   }
   if (spec.size > corpus.sentences.size())
   {
      throw ConfigError("sample size " + std::to_string(spec.size) + " exceeds corpus size " +
                        std::to_string(corpus.sentences.size()));
   }
}

Sample make_sample(const Corpus& corpus, std::vector<std::size_t> indices)
{
   std::sort(indices.begin(), indices.end());
   Sample out;
   out.corpus.name = corpus.name;
   out.corpus.sentences.reserve(indices.size());
   for (auto i : indices)
   {
      out.corpus.sentences.push_back(corpus.sentences[i]);
   }
   out.indices = std::move(indices);
   return out;
}

double pct(std::size_t entity, std::size_t total)
{
   return total == 0 ? 0.0 : 100.0 * static_cast<double>(entity) / static_cast<double>(total);
}

} // namespace

double entity_token_pct(const Corpus& corpus)
{
   std::size_t entity = 0;
   for (const auto& s : corpus.sentences)
   {
      entity += entity_token_count(s);
   }
   return pct(entity, corpus.token_count());
}

Sample sample_partition(const Corpus& corpus, const SampleSpec& spec)
{
   check_size(corpus, spec);
   if (spec.entity_pct)
   {
      throw ConfigError("sample_partition takes no entity percentage; use sample_imbalanced");
   }
   std::vector<std::size_t> order(corpus.sentences.size());
   std::iota(order.begin(), order.end(), std::size_t{0});

   // Partial Fisher-Yates: the first `size` slots form the subset.
   Rng rng(derive_seed(spec.seed, {0x5a11}));
   for (std::size_t i = 0; i < spec.size; ++i)
   {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(order.size() - i));
      std::swap(order[i], order[j]);
   }
   order.resize(spec.size);
   return make_sample(corpus, std::move(order));
}

Sample sample_imbalanced(const Corpus& corpus, const SampleSpec& spec)
{
   check_size(corpus, spec);
   if (!spec.entity_pct)
   {
      throw ConfigError("sample_imbalanced requires an entity percentage");
   }
   const double target = *spec.entity_pct;
   if (!(target > 0.0 && target < 100.0))
   {
      throw ConfigError("entity percentage must lie in (0, 100)");
   }
   if (!(spec.tolerance_pp >= 0.0))
   {
      throw ConfigError("tolerance must be >= 0");
   }

   const std::size_t n = corpus.sentences.size();
   std::vector<std::size_t> entity(n);
   std::vector<std::size_t> length(n);
   bool any_plain = false;
   bool any_entity = false;
   for (std::size_t i = 0; i < n; ++i)
   {
      entity[i] = entity_token_count(corpus.sentences[i]);
      length[i] = corpus.sentences[i].size();
      any_plain = any_plain || entity[i] == 0;
      any_entity = any_entity || entity[i] > 0;
   }
   if (!any_plain || !any_entity)
   {
      throw SamplingError("corpus needs both all-O and entity-bearing sentences", entity_token_pct(corpus));
   }

   // Shuffled candidate order doubles as the random tie-break: the first
   // candidate reaching the minimum wins.
   std::vector<std::size_t> pool(n);
   std::iota(pool.begin(), pool.end(), std::size_t{0});
   Rng rng(derive_seed(spec.seed, {0x1b4a}));
   rng.shuffle(std::span<std::size_t>(pool));

   std::size_t ent = 0;
   std::size_t tot = 0;
   for (std::size_t pick = 0; pick < spec.size; ++pick)
   {
      std::size_t best_slot = pick;
      double best_err = INFINITY;
      for (std::size_t slot = pick; slot < n; ++slot)
      {
         const auto c = pool[slot];
         const double err = std::abs(pct(ent + entity[c], tot + length[c]) - target);
         if (err < best_err)
         {
            best_err = err;
            best_slot = slot;
         }
      }
      std::swap(pool[pick], pool[best_slot]);
      const auto c = pool[pick];
      ent += entity[c];
      tot += length[c];
   }

   // pool[0, size) is the selection, pool[size, n) the remainder.
   double err = std::abs(pct(ent, tot) - target);
   const std::size_t budget = 10 * spec.size;
   for (std::size_t attempt = 0; attempt < budget && err > spec.tolerance_pp && spec.size < n; ++attempt)
   {
      const auto out_slot = static_cast<std::size_t>(rng.uniform_index(spec.size));
      const auto out = pool[out_slot];
      const std::size_t ent_wo = ent - entity[out];
      const std::size_t tot_wo = tot - length[out];
      std::size_t best_slot = n;
      double best_err = err;
      for (std::size_t slot = spec.size; slot < n; ++slot)
      {
         const auto c = pool[slot];
         const double e = std::abs(pct(ent_wo + entity[c], tot_wo + length[c]) - target);
         if (e < best_err)
         {
            best_err = e;
            best_slot = slot;
         }
      }
      if (best_slot == n)
      {
         continue;
      }
      std::swap(pool[out_slot], pool[best_slot]);
      const auto in = pool[out_slot];
      ent = ent_wo + entity[in];
      tot = tot_wo + length[in];
      err = best_err;
   }

   const double achieved = pct(ent, tot);
   if (err > spec.tolerance_pp)
   {
      std::ostringstream msg;
      msg << "cannot reach " << target << "% entity tokens with " << spec.size
          << " sentences (best achieved " << achieved << "%)";
      throw SamplingError(msg.str(), achieved);
   }
   pool.resize(spec.size);
   return make_sample(corpus, std::move(pool));
}

Sample draw_sample(const Corpus& corpus, const SampleSpec& spec)
{
   return spec.entity_pct ? sample_imbalanced(corpus, spec) : sample_partition(corpus, spec);
}

} // namespace ovaner
