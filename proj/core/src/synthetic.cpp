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

#include "ovaner/synthetic.hpp"

#include "ovaner/errors.hpp"
#include "ovaner/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ovaner {

namespace {

class WordFactory
{
public:
   explicit WordFactory(std::uint64_t seed) : m_rng(seed) {}

   std::string make(bool capitalised)
   {
      static constexpr std::string_view consonants = "bcdfghklmnprstvz";
      static constexpr std::string_view vowels = "aeiou";
      for (;;)
      {
         const auto syllables = 2 + m_rng.uniform_index(3);
         std::string w;
         for (std::uint64_t s = 0; s < syllables; ++s)
         {
            w += consonants[m_rng.uniform_index(consonants.size())];
            w += vowels[m_rng.uniform_index(vowels.size())];
         }
         if (m_rng.uniform01() < 0.3)
         {
            w += consonants[m_rng.uniform_index(consonants.size())];
         }
         if (!m_used.insert(w).second)
         {
            continue;
         }
         if (capitalised)
         {
            w[0] = static_cast<char>(w[0] - 'a' + 'A');
         }
         return w;
      }
   }

   std::vector<std::string> lexicon(std::size_t n, bool capitalised)
   {
      std::vector<std::string> out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i)
      {
         out.push_back(make(capitalised));
      }
      return out;
   }

private:
   Rng m_rng;
   std::set<std::string> m_used;
};

/// Zipf(1) sampler over ranks [0, n).
class Zipf
{
public:
   explicit Zipf(std::size_t n, double exponent = 1.0)
   {
      m_cdf.resize(n);
      double total = 0.0;
      for (std::size_t r = 0; r < n; ++r)
      {
         total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
         m_cdf[r] = total;
      }
      for (auto& c : m_cdf)
      {
         c /= total;
      }
   }

   std::size_t draw(Rng& rng) const
   {
      const double u = rng.uniform01();
      const auto it = std::upper_bound(m_cdf.begin(), m_cdf.end(), u);
      return std::min(static_cast<std::size_t>(it - m_cdf.begin()), m_cdf.size() - 1);
   }

private:
   std::vector<double> m_cdf;
};

std::size_t poisson(Rng& rng, double lambda)
{
   const double limit = std::exp(-lambda);
   double prod = rng.uniform01();
   std::size_t k = 0;
   while (prod > limit)
   {
      prod *= rng.uniform01();
      ++k;
   }
   return k;
}

struct TypeLexicon
{
   std::string type;
   std::vector<std::string> heads;
   std::vector<std::string> modifiers;
   std::string cue;
};

struct Piece
{
   std::string token;
   std::string tag;
};

} // namespace

Corpus make_synthetic_corpus(const SyntheticSpec& spec, std::string name)
{
   if (spec.entity_types.empty() || spec.min_length < 2 || spec.max_length < spec.min_length ||
       spec.head_words == 0 || spec.modifier_words == 0 || spec.filler_words == 0 || spec.sentences == 0)
   {
      throw ConfigError("invalid synthetic corpus settings");
   }
   if (!(spec.begin_pct > 0.0) || !(spec.inside_pct >= 0.0) || spec.begin_pct + spec.inside_pct >= 50.0)
   {
      throw ConfigError("synthetic label mix must have 0 < B and B + I < 50");
   }

   WordFactory words(derive_seed(spec.lexicon_seed, {0x1e1c}));
   std::vector<TypeLexicon> types;
   for (const auto& t : spec.entity_types)
   {
      TypeLexicon lex;
      lex.type = t;
      lex.cue = words.make(false);
      lex.heads = words.lexicon(spec.head_words, true);
      lex.modifiers = words.lexicon(spec.modifier_words, false);
      types.push_back(std::move(lex));
   }
   std::vector<std::string> filler;
   {
      Rng cap_rng(derive_seed(spec.lexicon_seed, {0xca9}));
      for (std::size_t i = 0; i < spec.filler_words; ++i)
      {
         filler.push_back(words.make(cap_rng.uniform01() < spec.capitalised_filler));
      }
   }

   const Zipf filler_dist(filler.size());
   const Zipf head_dist(spec.head_words, 0.8);
   const Zipf modifier_dist(spec.modifier_words, 0.8);

   // Extra tokens per span ~ geometric with mean I/B, so that B:I matches.
   const double extra_mean = spec.inside_pct / spec.begin_pct;
   const double continue_prob = extra_mean / (1.0 + extra_mean);

   Rng rng(derive_seed(spec.seed, {0x5e47}));
   Corpus corpus;
   corpus.name = std::move(name);
   corpus.sentences.reserve(spec.sentences);
   for (std::size_t s = 0; s < spec.sentences; ++s)
   {
      const auto length =
         spec.min_length + static_cast<std::size_t>(rng.uniform_index(spec.max_length - spec.min_length + 1));
      const auto span_count = poisson(rng, spec.begin_pct / 100.0 * static_cast<double>(length));

      std::vector<std::vector<Piece>> spans;
      std::size_t used = 0;
      for (std::size_t k = 0; k < span_count; ++k)
      {
         const auto& lex = types[rng.uniform_index(types.size())];
         std::vector<Piece> pieces;
         if (rng.uniform01() < spec.cue_prob)
         {
            pieces.push_back({lex.cue, std::string(kOutsideTag)});
         }
         pieces.push_back({lex.heads[head_dist.draw(rng)], "B-" + lex.type});
         for (std::size_t extra = 0; extra < 5 && rng.uniform01() < continue_prob; ++extra)
         {
            pieces.push_back({lex.modifiers[modifier_dist.draw(rng)], "I-" + lex.type});
         }
         if (used + pieces.size() >= length)
         {
            break;
         }
         used += pieces.size();
         spans.push_back(std::move(pieces));
      }

      const std::size_t filler_count = length - used;
      std::vector<std::size_t> slots;
      for (std::size_t k = 0; k < spans.size(); ++k)
      {
         slots.push_back(static_cast<std::size_t>(rng.uniform_index(filler_count + 1)));
      }
      std::sort(slots.begin(), slots.end());

      Sentence sentence;
      auto push = [&](const Piece& p) {
         sentence.tokens.push_back(p.token);
         sentence.labels.push_back(p.tag);
      };
      std::size_t next_span = 0;
      for (std::size_t f = 0; f <= filler_count; ++f)
      {
         while (next_span < spans.size() && slots[next_span] == f)
         {
            for (const auto& p : spans[next_span])
            {
               push(p);
            }
            ++next_span;
         }
         if (f == filler_count)
         {
            break;
         }
         if (rng.uniform01() < spec.stray_cue_prob)
         {
            push({types[rng.uniform_index(types.size())].cue, std::string(kOutsideTag)});
         }
         else
         {
            push({filler[filler_dist.draw(rng)], std::string(kOutsideTag)});
         }
      }
      // Sentence-initial capitalisation for non-entity openers.
      auto& first = sentence.tokens.front();
      if (sentence.labels.front() == kOutsideTag && first[0] >= 'a' && first[0] <= 'z')
      {
         first[0] = static_cast<char>(first[0] - 'a' + 'A');
      }
      corpus.sentences.push_back(std::move(sentence));
   }
   return corpus;
}

} // namespace ovaner
