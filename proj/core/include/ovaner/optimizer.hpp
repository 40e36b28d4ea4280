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

#include "ovaner/losses.hpp"

#include <cstddef>
#include <span>
#include <string_view>

namespace ovaner {

struct OptimizerConfig
{
   double lr_primal = 0.05;
   double lr_dual = 0.05;
   double lr_decay = 0.98; ///< multiplicative, applied once per epoch
   double momentum = 0.9;  ///< primal parameters only

   bool operator==(const OptimizerConfig&) const = default;

   /// Throws ConfigError when a field is out of range.
   void validate() const;

   double primal_rate(std::size_t epoch) const;
   double dual_rate(std::size_t epoch) const;
};

/// Heavy-ball step on one parameter block:
///   velocity = momentum * velocity + grads;  params -= lr * velocity.
/// `lr` is the already-decayed rate. Throws NumericError naming `group`
/// if any gradient is not finite.
void step_primal(std::span<double> params, std::span<const double> grads, std::span<double> velocity,
                 double lr, double momentum, std::string_view group);

/// Descent on a and b, projected ascent on alpha.
HeadDualState step_dual(const HeadDualState& dual, double d_a, double d_b, double d_alpha, double lr);

} // namespace ovaner
