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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ovaner {

/// Parameters of a generated BIO corpus with controllable label mix.
///
/// Entities are a capitalised head word followed by lowercase modifier words
/// from per-type lexicons, usually preceded by a per-type cue word. Filler
/// words are Zipf-distributed; some are capitalised so that case alone does
/// not identify an entity.
struct SyntheticSpec
{
   std::size_t sentences = 1000;
   std::vector<std::string> entity_types{"Species"};
   double begin_pct = 1.7;    ///< expected % of B- tokens
   double inside_pct = 2.3;   ///< expected % of I- tokens
   std::size_t min_length = 15;
   std::size_t max_length = 35;
   std::size_t head_words = 80;      ///< per entity type
   std::size_t modifier_words = 120; ///< per entity type
   std::size_t filler_words = 1500;
   double capitalised_filler = 0.1;  ///< fraction of filler lexicon in init-cap
   double cue_prob = 0.7;            ///< chance a span is preceded by its cue word
   double stray_cue_prob = 0.01;     ///< chance any filler slot is replaced by a cue word
   std::uint64_t lexicon_seed = 7;   ///< shared by train/dev/test draws
   std::uint64_t seed = 0;           ///< sentence draws
};

Corpus make_synthetic_corpus(const SyntheticSpec& spec, std::string name);

} // namespace ovaner
