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
#include "ovaner/csv.hpp"
#include "ovaner/matrix.hpp"
#include "ovaner/model.hpp"

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ovaner {

/// Entity mention covering tokens [start, end] (inclusive).
struct Span
{
   std::size_t start = 0;
   std::size_t end = 0;
   std::string type;

   auto operator<=>(const Span&) const = default;
};

struct HeadAuc
{
   std::string label;
   std::optional<double> auc; ///< unset when the data had a single class for this head
};

struct MetricsRecord
{
   double precision = 0.0;
   double recall = 0.0;
   double f1 = 0.0;
   std::size_t gold_spans = 0;
   std::size_t predicted_spans = 0;
   std::size_t true_positives = 0;
   std::map<std::string, std::size_t> support; ///< gold spans per entity type
   std::vector<HeadAuc> per_head_auc;          ///< label-set order
};

/// Index of the largest entry of each row; the lowest index wins ties.
std::vector<std::size_t> argmax_rows(const Matrix& scores);

/// Maximum-confidence decoding of per-head scores [l, K].
std::vector<std::string> predict_ova(const LabelSet& label_set, const Matrix& scores);

/// Per-label scores [l, K]: head probabilities for OVA models, softmax
/// probabilities for the multi-class baseline.
Matrix label_scores(const ModelState& model, const Sentence& sentence);

/// Predicted tag sequence for any model kind.
std::vector<std::string> predict_tags(const ModelState& model, const Sentence& sentence);

/// conlleval-style BIO decoding: B-X opens a span, I-X extends a running
/// span of type X and opens a new one otherwise.
std::vector<Span> decode_spans(std::span<const std::string> tags);

/// Inverse of decode_spans for non-overlapping spans: B- on the first token,
/// I- on the rest, "O" elsewhere.
std::vector<std::string> encode_spans(std::span<const Span> spans, std::size_t length);

/// Exact-match micro precision/recall/F1 over entity spans.
MetricsRecord entity_f1(const Corpus& gold, const std::vector<std::vector<std::string>>& predicted);

/// Mann-Whitney AUC with ties counted as one half, O(n log n).
/// Throws ValidationError unless both classes are present.
double token_auc(std::span<const double> scores, std::span<const int> labels);

/// Predictions plus per-head token AUC over a whole corpus.
MetricsRecord evaluate(const ModelState& model, const Corpus& corpus);

/// Writes the metrics.csv header for the given label set.
void write_metrics_header(std::ostream& out, const LabelSet& label_set);
void write_metrics_row(std::ostream& out, const RunInfo& info, const MetricsRecord& metrics);

/// One row per token: ids, token, gold and predicted tag, max score, then
/// one score column per label.
void export_probs(std::ostream& out, const ModelState& model, const Corpus& corpus);

/// Fixed-point text with `digits` decimals.
std::string format_fixed(double value, int digits);

} // namespace ovaner
