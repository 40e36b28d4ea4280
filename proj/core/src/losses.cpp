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

#include "ovaner/losses.hpp"

#include "ovaner/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ovaner {

namespace {

void check_batch(std::span<const double> scores, std::span<const int> labels)
{
   if (scores.empty())
   {
      throw ShapeError("empty batch");
   }
   if (scores.size() != labels.size())
   {
      throw ShapeError("scores and labels differ in length");
   }
}

} // namespace

double clamp_prior(double fraction) noexcept
{
   return std::clamp(fraction, kPriorClamp, 1.0 - kPriorClamp);
}

AucLossResult auc_margin_loss(std::span<const double> scores, std::span<const int> labels,
                              const HeadDualState& dual)
{
   check_batch(scores, labels);
   const double n = static_cast<double>(scores.size());
   const double p = dual.prior;
   const double q = 1.0 - p;
   const double a = dual.a;
   const double b = dual.b;
   const double alpha = dual.alpha;

   AucLossResult r;
   r.d_scores.resize(scores.size());
   double square = 0.0;
   double linear = 0.0; // sum of p h [neg] - (1-p) h [pos]
   double sum_pos_dev = 0.0;
   double sum_neg_dev = 0.0;
   for (std::size_t i = 0; i < scores.size(); ++i)
   {
      const double h = scores[i];
      if (labels[i] > 0)
      {
         const double dev = h - a;
         square += q * dev * dev;
         linear -= q * h;
         sum_pos_dev += dev;
         r.d_scores[i] = (2.0 * q * dev - 2.0 * alpha * q) / n;
      }
      else
      {
         const double dev = h - b;
         square += p * dev * dev;
         linear += p * h;
         sum_neg_dev += dev;
         r.d_scores[i] = (2.0 * p * dev + 2.0 * alpha * p) / n;
      }
   }
   const double pq = p * q;
   r.loss = square / n + 2.0 * alpha * (pq * dual.margin + linear / n) - pq * alpha * alpha;
   r.d_a = -2.0 * q * sum_pos_dev / n;
   r.d_b = -2.0 * p * sum_neg_dev / n;
   r.d_alpha = 2.0 * (pq * dual.margin + linear / n) - 2.0 * pq * alpha;
   return r;
}

DualOptimum dual_optima(double pos_mean, double neg_mean, double margin) noexcept
{
   return {pos_mean, neg_mean, std::max(0.0, margin - pos_mean + neg_mean)};
}

ScoreLossResult bce_loss(std::span<const double> scores, std::span<const int> labels)
{
   check_batch(scores, labels);
   const double n = static_cast<double>(scores.size());
   ScoreLossResult r;
   r.d_scores.resize(scores.size());
   for (std::size_t i = 0; i < scores.size(); ++i)
   {
      const double h = scores[i];
      if (labels[i] > 0)
      {
         r.loss -= std::log(h);
         r.d_scores[i] = -1.0 / (n * h);
      }
      else
      {
         r.loss -= std::log1p(-h);
         r.d_scores[i] = 1.0 / (n * (1.0 - h));
      }
   }
   r.loss /= n;
   return r;
}

Matrix softmax_rows(const Matrix& logits)
{
   Matrix out(logits.rows(), logits.cols());
   for (std::size_t i = 0; i < logits.rows(); ++i)
   {
      const auto row = logits.row(i);
      const double mx = *std::max_element(row.begin(), row.end());
      double z = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k)
      {
         out(i, k) = std::exp(row[k] - mx);
         z += out(i, k);
      }
      for (std::size_t k = 0; k < row.size(); ++k)
      {
         out(i, k) /= z;
      }
   }
   return out;
}

LogitLossResult ce_loss(const Matrix& logits, std::span<const std::size_t> label_indices)
{
   if (logits.rows() == 0)
   {
      throw ShapeError("empty batch");
   }
   if (logits.rows() != label_indices.size())
   {
      throw ShapeError("logits and labels differ in length");
   }
   const double n = static_cast<double>(logits.rows());
   LogitLossResult r;
   r.d_logits = softmax_rows(logits);
   for (std::size_t i = 0; i < logits.rows(); ++i)
   {
      const auto y = label_indices[i];
      if (y >= logits.cols())
      {
         throw ShapeError("label index " + std::to_string(y) + " out of range for " + std::to_string(logits.cols()) +
                          " classes");
      }
      const auto row = logits.row(i);
      const double mx = *std::max_element(row.begin(), row.end());
      double z = 0.0;
      for (double v : row)
      {
         z += std::exp(v - mx);
      }
      r.loss += mx + std::log(z) - row[y];
      r.d_logits(i, y) -= 1.0;
   }
   r.loss /= n;
   for (auto& v : r.d_logits.values())
   {
      v /= n;
   }
   return r;
}

} // namespace ovaner
