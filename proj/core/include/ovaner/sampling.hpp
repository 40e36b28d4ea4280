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
#include "ovaner/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace ovaner {

struct SampleSpec
{
   std::size_t size = 1;                 ///< number of sentences to draw
   std::optional<double> entity_pct;     ///< target % of non-"O" tokens
   std::uint64_t seed = 0;
   double tolerance_pp = 0.5;            ///< allowed |achieved - target|, percentage points
};

/// Thrown when no subset within tolerance was found; carries the best try.
class SamplingError : public Error
{
public:
   SamplingError(const std::string& what, double best_pct) : Error(what), m_best_pct(best_pct) {}
   double best_pct() const noexcept { return m_best_pct; }

private:
   double m_best_pct;
};

/// Result of a draw: chosen source indices (ascending) and the subset itself.
struct Sample
{
   std::vector<std::size_t> indices;
   Corpus corpus;
};

/// Uniform subset of `spec.size` distinct sentences, kept in source order.
Sample sample_partition(const Corpus& corpus, const SampleSpec& spec);

/// Subset of `spec.size` sentences whose entity-token percentage lies within
/// `spec.tolerance_pp` of `*spec.entity_pct`.
///
/// Greedy construction over a seeded shuffle of the candidates, followed by
/// at most 10 * size single-sentence swaps. Throws SamplingError when the
/// target is still out of reach.
Sample sample_imbalanced(const Corpus& corpus, const SampleSpec& spec);

/// Dispatches on whether `spec.entity_pct` is set.
Sample draw_sample(const Corpus& corpus, const SampleSpec& spec);

/// Percentage of non-"O" tokens over the whole corpus.
double entity_token_pct(const Corpus& corpus);

} // namespace ovaner
