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

#include "ovaner/evaluation.hpp"

#include "ovaner/errors.hpp"
#include "ovaner/losses.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>

namespace ovaner {

std::vector<std::size_t> argmax_rows(const Matrix& scores)
{
   std::vector<std::size_t> out(scores.rows(), 0);
   for (std::size_t i = 0; i < scores.rows(); ++i)
   {
      const auto row = scores.row(i);
      for (std::size_t k = 1; k < row.size(); ++k)
      {
         if (row[k] > row[out[i]])
         {
            out[i] = k;
         }
      }
   }
   return out;
}

std::vector<std::string> predict_ova(const LabelSet& label_set, const Matrix& scores)
{
   if (scores.cols() != label_set.size())
   {
      throw ShapeError("score matrix has " + std::to_string(scores.cols()) + " columns for " +
                       std::to_string(label_set.size()) + " labels");
   }
   std::vector<std::string> tags;
   tags.reserve(scores.rows());
   for (auto k : argmax_rows(scores))
   {
      tags.push_back(label_set.label(k));
   }
   return tags;
}

Matrix label_scores(const ModelState& model, const Sentence& sentence)
{
   const auto features = encode(model, sentence);
   if (model.info.method == Method::Ce)
   {
      return softmax_rows(multiclass_logits(model, features));
   }
   return head_scores(model, features);
}

std::vector<std::string> predict_tags(const ModelState& model, const Sentence& sentence)
{
   return predict_ova(model.label_set, label_scores(model, sentence));
}

std::vector<Span> decode_spans(std::span<const std::string> tags)
{
   std::vector<Span> spans;
   bool open = false;
   for (std::size_t i = 0; i < tags.size(); ++i)
   {
      const auto parts = parse_tag(tags[i]);
      if (parts.prefix == 'O')
      {
         open = false;
         continue;
      }
      const bool continues = parts.prefix == 'I' && open && spans.back().type == parts.type;
      if (continues)
      {
         spans.back().end = i;
      }
      else
      {
         spans.push_back({i, i, std::string(parts.type)});
         open = true;
      }
   }
   return spans;
}

std::vector<std::string> encode_spans(std::span<const Span> spans, std::size_t length)
{
   std::vector<std::string> tags(length, std::string(kOutsideTag));
   for (const auto& s : spans)
   {
      if (s.start > s.end || s.end >= length)
      {
         throw ValidationError("span out of range");
      }
      tags[s.start] = "B-" + s.type;
      for (std::size_t i = s.start + 1; i <= s.end; ++i)
      {
         tags[i] = "I-" + s.type;
      }
   }
   return tags;
}

MetricsRecord entity_f1(const Corpus& gold, const std::vector<std::vector<std::string>>& predicted)
{
   if (gold.sentences.size() != predicted.size())
   {
      throw ShapeError("gold has " + std::to_string(gold.sentences.size()) + " sentences, predictions " +
                       std::to_string(predicted.size()));
   }
   MetricsRecord m;
   for (std::size_t s = 0; s < predicted.size(); ++s)
   {
      const auto& sentence = gold.sentences[s];
      if (sentence.labels.size() != predicted[s].size())
      {
         throw ShapeError("sentence " + std::to_string(s) + ": gold length " + std::to_string(sentence.size()) +
                          ", predicted length " + std::to_string(predicted[s].size()));
      }
      const auto g = decode_spans(sentence.labels);
      const auto p = decode_spans(predicted[s]);
      const std::set<Span> gold_set(g.begin(), g.end());
      for (const auto& span : g)
      {
         ++m.support[span.type];
      }
      m.gold_spans += g.size();
      m.predicted_spans += p.size();
      for (const auto& span : p)
      {
         m.true_positives += gold_set.count(span);
      }
   }
   const auto tp = static_cast<double>(m.true_positives);
   m.precision = m.predicted_spans == 0 ? 0.0 : tp / static_cast<double>(m.predicted_spans);
   m.recall = m.gold_spans == 0 ? 0.0 : tp / static_cast<double>(m.gold_spans);
   m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
   return m;
}

double token_auc(std::span<const double> scores, std::span<const int> labels)
{
   if (scores.size() != labels.size())
   {
      throw ShapeError("scores and labels differ in length");
   }
   std::vector<std::size_t> order(scores.size());
   std::iota(order.begin(), order.end(), std::size_t{0});
   std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return scores[x] < scores[y]; });

   // Sum of midranks of the positives (ranks are 1-based).
   double positive_rank_sum = 0.0;
   std::size_t positives = 0;
   for (std::size_t i = 0; i < order.size();)
   {
      std::size_t j = i;
      std::size_t tied_positives = 0;
      while (j < order.size() && scores[order[j]] == scores[order[i]])
      {
         tied_positives += labels[order[j]] > 0 ? 1 : 0;
         ++j;
      }
      const double midrank = 0.5 * static_cast<double>(i + 1 + j);
      positive_rank_sum += midrank * static_cast<double>(tied_positives);
      positives += tied_positives;
      i = j;
   }
   const std::size_t negatives = scores.size() - positives;
   if (positives == 0 || negatives == 0)
   {
      throw ValidationError("AUC is undefined unless both classes are present");
   }
   const double np = static_cast<double>(positives);
   const double nn = static_cast<double>(negatives);
   return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricsRecord evaluate(const ModelState& model, const Corpus& corpus)
{
   const std::size_t k_count = model.label_count();
   std::vector<std::vector<std::string>> predicted;
   predicted.reserve(corpus.sentences.size());
   std::vector<std::vector<double>> scores(k_count);
   std::vector<std::vector<int>> truth(k_count);
   for (const auto& sentence : corpus.sentences)
   {
      const auto s = label_scores(model, sentence);
      predicted.push_back(predict_ova(model.label_set, s));
      for (std::size_t k = 0; k < k_count; ++k)
      {
         const auto& label = model.label_set.label(k);
         for (std::size_t i = 0; i < sentence.size(); ++i)
         {
            scores[k].push_back(s(i, k));
            truth[k].push_back(sentence.labels[i] == label ? 1 : -1);
         }
      }
   }
   auto m = entity_f1(corpus, predicted);
   for (std::size_t k = 0; k < k_count; ++k)
   {
      const bool has_pos = std::find(truth[k].begin(), truth[k].end(), 1) != truth[k].end();
      const bool has_neg = std::find(truth[k].begin(), truth[k].end(), -1) != truth[k].end();
      HeadAuc h{model.label_set.label(k), std::nullopt};
      if (has_pos && has_neg)
      {
         h.auc = token_auc(scores[k], truth[k]);
      }
      m.per_head_auc.push_back(std::move(h));
   }
   return m;
}

std::string format_fixed(double value, int digits)
{
   char buf[64];
   const int n = std::snprintf(buf, sizeof buf, "%.*f", digits, value);
   return std::string(buf, static_cast<std::size_t>(n));
}

void write_metrics_header(std::ostream& out, const LabelSet& label_set)
{
   out << "method,corpus,train_size,entity_pct,seed,precision,recall,f1";
   for (const auto& label : label_set.labels())
   {
      out << ',' << csv_field("auc:" + label);
   }
   out << '\n';
}

void write_metrics_row(std::ostream& out, const RunInfo& info, const MetricsRecord& metrics)
{
   out << to_string(info.method) << ',' << csv_field(info.corpus) << ',' << info.train_size << ','
       << (info.entity_pct ? format_fixed(*info.entity_pct, 2) : std::string()) << ',' << info.seed << ','
       << format_fixed(metrics.precision, 6) << ',' << format_fixed(metrics.recall, 6) << ','
       << format_fixed(metrics.f1, 6);
   for (const auto& h : metrics.per_head_auc)
   {
      out << ',' << (h.auc ? format_fixed(*h.auc, 6) : std::string());
   }
   out << '\n';
}

void export_probs(std::ostream& out, const ModelState& model, const Corpus& corpus)
{
   out << "sentence_id,token_index,token,gold_tag,predicted_tag,max_score";
   for (const auto& label : model.label_set.labels())
   {
      out << ',' << csv_field(label);
   }
   out << '\n';
   for (std::size_t s = 0; s < corpus.sentences.size(); ++s)
   {
      const auto& sentence = corpus.sentences[s];
      const auto scores = label_scores(model, sentence);
      const auto best = argmax_rows(scores);
      for (std::size_t i = 0; i < sentence.size(); ++i)
      {
         out << s << ',' << i << ',' << csv_field(sentence.tokens[i]) << ',' << csv_field(sentence.labels[i]) << ','
             << csv_field(model.label_set.label(best[i])) << ',' << format_fixed(scores(i, best[i]), 6);
         for (std::size_t k = 0; k < scores.cols(); ++k)
         {
            out << ',' << format_fixed(scores(i, k), 6);
         }
         out << '\n';
      }
   }
}

} // namespace ovaner
