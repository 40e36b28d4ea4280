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

#include "ovaner/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ovaner {

/// Auxiliary and dual variables of one head's AUC margin objective.
struct HeadDualState
{
   double a = 0.0;      ///< tracks the mean positive score
   double b = 0.0;      ///< tracks the mean negative score
   double alpha = 0.0;  ///< dual variable, kept >= 0
   double margin = 1.0;
   double prior = 0.5;  ///< positive-class fraction of the training pool
};

inline constexpr double kPriorClamp = 1e-6;

/// Clamps a positive fraction into [1e-6, 1 - 1e-6].
double clamp_prior(double fraction) noexcept;

struct AucLossResult
{
   double loss = 0.0;
   std::vector<double> d_scores;
   double d_a = 0.0;
   double d_b = 0.0;
   double d_alpha = 0.0;
};

/// Minibatch estimate of the prior-weighted square-margin AUC objective
///
///   L = 1/n sum_i [ (1-p)(h_i-a)^2 [z_i=+1] + p(h_i-b)^2 [z_i=-1] ]
///     + 2 alpha ( p(1-p) m + 1/n sum_i [ p h_i [z_i=-1] - (1-p) h_i [z_i=+1] ] )
///     - p(1-p) alpha^2
///
/// with exact partial derivatives. Single-class batches are fine.
AucLossResult auc_margin_loss(std::span<const double> scores, std::span<const int> labels,
                              const HeadDualState& dual);

struct DualOptimum
{
   double a = 0.0;
   double b = 0.0;
   double alpha = 0.0;
};

/// Closed-form minimisers in (a, b) and maximiser in alpha >= 0.
DualOptimum dual_optima(double pos_mean, double neg_mean, double margin) noexcept;

struct ScoreLossResult
{
   double loss = 0.0;
   std::vector<double> d_scores;
};

/// Mean binary cross entropy over scores in (0, 1).
ScoreLossResult bce_loss(std::span<const double> scores, std::span<const int> labels);

struct LogitLossResult
{
   double loss = 0.0;
   Matrix d_logits;
};

/// Mean softmax cross entropy; rows of `logits` are tokens.
LogitLossResult ce_loss(const Matrix& logits, std::span<const std::size_t> label_indices);

/// Row-wise softmax.
Matrix softmax_rows(const Matrix& logits);

} // namespace ovaner
