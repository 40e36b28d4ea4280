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
#include <ovaner/sampling.hpp>
#include <ovaner/synthetic.hpp>

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace ovaner;
using ovaner::testing::corpus_from_text;

namespace {

Corpus three_sentences()
{
   return corpus_from_text("a O\n\nb B-X\n\nc O\nd O\n", "three");
}

Corpus synthetic(std::size_t n, std::uint64_t seed = 0)
{
   SyntheticSpec spec;
   spec.sentences = n;
   spec.begin_pct = 3.0;
   spec.inside_pct = 3.0;
   spec.seed = seed;
   return make_synthetic_corpus(spec, "syn");
}

std::string as_text(const Corpus& c)
{
   std::ostringstream out;
   write_conll(out, c);
   return out.str();
}

bool distinct(const std::vector<std::size_t>& v)
{
   return std::set<std::size_t>(v.begin(), v.end()).size() == v.size();
}

} // namespace

TEST_CASE("sample_partition is deterministic under seed")
{
   const auto c = three_sentences();
   const auto a = sample_partition(c, {2, std::nullopt, 11});
   const auto b = sample_partition(c, {2, std::nullopt, 11});
   CHECK(a.indices == b.indices);
   CHECK(a.corpus.sentences.size() == 2);
   CHECK(as_text(a.corpus) == as_text(b.corpus));
}

TEST_CASE("sample_partition of the full size returns the whole corpus")
{
   const auto c = synthetic(40);
   const auto s = sample_partition(c, {40, std::nullopt, 3});
   auto got = s.corpus.sentences;
   auto want = c.sentences;
   auto by_text = [](const Sentence& x, const Sentence& y) { return x.tokens < y.tokens || (x.tokens == y.tokens && x.labels < y.labels); };
   std::sort(got.begin(), got.end(), by_text);
   std::sort(want.begin(), want.end(), by_text);
   CHECK(got == want);
}

TEST_CASE("sample_partition differs across seeds")
{
   const auto c = synthetic(200);
   int differ = 0;
   for (std::uint64_t s = 0; s < 100; ++s)
   {
      const auto a = sample_partition(c, {20, std::nullopt, s});
      const auto b = sample_partition(c, {20, std::nullopt, s + 1000});
      differ += a.indices != b.indices ? 1 : 0;
   }
   CHECK(differ >= 95);
}

TEST_CASE("sample_partition indices are distinct and in range")
{
   const auto c = synthetic(120);
   for (std::uint64_t s = 0; s < 30; ++s)
   {
      const auto p = sample_partition(c, {50, std::nullopt, s});
      CHECK(p.indices.size() == 50);
      CHECK(distinct(p.indices));
      CHECK(std::is_sorted(p.indices.begin(), p.indices.end()));
      CHECK(p.indices.back() < c.sentences.size());
      for (std::size_t i = 0; i < p.indices.size(); ++i)
      {
         CHECK(p.corpus.sentences[i] == c.sentences[p.indices[i]]);
      }
   }
}

TEST_CASE("sample_partition is roughly uniform over sentences")
{
   // Each of 10 sentences should be drawn in about half of 4000 size-5 samples.
   std::string text;
   for (int i = 0; i < 10; ++i)
   {
      text += "w" + std::to_string(i) + " O\n\n";
   }
   const auto c = corpus_from_text(text);
   std::vector<int> hits(10, 0);
   for (std::uint64_t s = 0; s < 4000; ++s)
   {
      for (auto i : sample_partition(c, {5, std::nullopt, s}).indices)
      {
         ++hits[i];
      }
   }
   for (int h : hits)
   {
      CHECK(h > 1850);
      CHECK(h < 2150);
   }
}

TEST_CASE("sample_partition errors")
{
   const auto c = three_sentences();
   CHECK_THROWS_AS(sample_partition(c, {4, std::nullopt, 0}), ConfigError);
   CHECK_THROWS_AS(sample_partition(c, {0, std::nullopt, 0}), ConfigError);
   CHECK_THROWS_AS(sample_partition(c, {2, 5.0, 0}), ConfigError);
}

TEST_CASE("sample_imbalanced reaches the 1, 2, 5 and 10 percent targets within tolerance")
{
   const auto c = synthetic(3000);
   for (double target : {1.0, 2.0, 5.0, 10.0})
   {
      for (std::size_t size : {50, 200, 500})
      {
         for (std::uint64_t seed = 0; seed < 3; ++seed)
         {
            CAPTURE(target);
            CAPTURE(size);
            const auto s = sample_imbalanced(c, {size, target, seed, 0.5});
            CHECK(s.corpus.sentences.size() == size);
            CHECK(distinct(s.indices));
            CHECK(std::abs(entity_token_pct(s.corpus) - target) <= 0.5);
         }
      }
   }
}

TEST_CASE("sample_imbalanced is reproducible")
{
   const auto c = synthetic(800);
   const auto a = sample_imbalanced(c, {100, 2.0, 5, 0.5});
   const auto b = sample_imbalanced(c, {100, 2.0, 5, 0.5});
   CHECK(a.indices == b.indices);
   CHECK(as_text(a.corpus) == as_text(b.corpus));
   const auto other = sample_imbalanced(c, {100, 2.0, 6, 0.5});
   CHECK(other.indices != a.indices);
}

TEST_CASE("sample_imbalanced at full size reproduces the corpus percentage")
{
   const auto c = synthetic(60);
   const double whole = entity_token_pct(c);
   const auto s = sample_imbalanced(c, {60, whole, 1, 0.0});
   CHECK(entity_token_pct(s.corpus) == doctest::Approx(whole).epsilon(1e-12));
}

TEST_CASE("sample_imbalanced reports the best percentage on infeasible targets")
{
   // Densest sentence is 1/10 entity tokens; plain sentences are longer.
   std::string text;
   const std::vector<std::pair<int, int>> shapes = {{10, 1}, {12, 1}, {20, 1}, {8, 0}, {15, 0}, {5, 0}, {10, 0}};
   for (auto [len, ent] : shapes)
   {
      for (int t = 0; t < len; ++t)
      {
         text += "w " + std::string(t < ent ? "B-X" : "O") + "\n";
      }
      text += "\n";
   }
   const auto c = corpus_from_text(text);

   // Exhaustive best over all 3-sentence subsets.
   double best = 0.0;
   const std::size_t n = shapes.size();
   for (std::size_t i = 0; i < n; ++i)
   {
      for (std::size_t j = i + 1; j < n; ++j)
      {
         for (std::size_t k = j + 1; k < n; ++k)
         {
            const int e = shapes[i].second + shapes[j].second + shapes[k].second;
            const int t = shapes[i].first + shapes[j].first + shapes[k].first;
            best = std::max(best, 100.0 * e / t);
         }
      }
   }
   CHECK(best == doctest::Approx(200.0 / 27));

   try
   {
      sample_imbalanced(c, {3, 50.0, 0, 0.5});
      FAIL("expected infeasible target");
   }
   catch (const SamplingError& e)
   {
      CHECK(e.best_pct() == doctest::Approx(best).epsilon(1e-12));
      CHECK(std::string(e.what()).find("best achieved") != std::string::npos);
   }
}

TEST_CASE("sample_imbalanced never returns off-target subsets")
{
   const auto c = synthetic(300, 9);
   for (std::uint64_t seed = 0; seed < 40; ++seed)
   {
      const double target = 0.5 + static_cast<double>(seed % 20);
      try
      {
         const auto s = sample_imbalanced(c, {30, target, seed, 0.25});
         CHECK(std::abs(entity_token_pct(s.corpus) - target) <= 0.25);
      }
      catch (const SamplingError& e)
      {
         CHECK(std::abs(e.best_pct() - target) > 0.25);
      }
   }
}

TEST_CASE("sample_imbalanced errors")
{
   const auto c = synthetic(50);
   CHECK_THROWS_AS(sample_imbalanced(c, {10, std::nullopt, 0}), ConfigError);
   CHECK_THROWS_AS(sample_imbalanced(c, {10, 0.0, 0}), ConfigError);
   CHECK_THROWS_AS(sample_imbalanced(c, {10, 100.0, 0}), ConfigError);
   CHECK_THROWS_AS(sample_imbalanced(c, {51, 2.0, 0}), ConfigError);
   const auto all_o = corpus_from_text("a O\n\nb O\n");
   CHECK_THROWS_AS(sample_imbalanced(all_o, {1, 2.0, 0}), SamplingError);
}

TEST_CASE("draw_sample dispatches on entity_pct")
{
   const auto c = synthetic(200);
   CHECK(draw_sample(c, {20, std::nullopt, 4}).indices == sample_partition(c, {20, std::nullopt, 4}).indices);
   CHECK(draw_sample(c, {20, 5.0, 4}).indices == sample_imbalanced(c, {20, 5.0, 4}).indices);
}
