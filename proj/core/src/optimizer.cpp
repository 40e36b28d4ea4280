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

#include "ovaner/optimizer.hpp"

#include "ovaner/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ovaner {

void OptimizerConfig::validate() const
{
   if (!(lr_primal > 0.0) || !std::isfinite(lr_primal))
   {
      throw ConfigError("lr_primal must be > 0");
   }
   if (!(lr_dual > 0.0) || !std::isfinite(lr_dual))
   {
      throw ConfigError("lr_dual must be > 0");
   }
   if (!(lr_decay > 0.0 && lr_decay <= 1.0))
   {
      throw ConfigError("lr_decay must lie in (0, 1]");
   }
   if (!(momentum >= 0.0 && momentum < 1.0))
   {
      throw ConfigError("momentum must lie in [0, 1)");
   }
}

double OptimizerConfig::primal_rate(std::size_t epoch) const
{
   return lr_primal * std::pow(lr_decay, static_cast<double>(epoch));
}

double OptimizerConfig::dual_rate(std::size_t epoch) const
{
   return lr_dual * std::pow(lr_decay, static_cast<double>(epoch));
}

void step_primal(std::span<double> params, std::span<const double> grads, std::span<double> velocity,
                 double lr, double momentum, std::string_view group)
{
   if (params.size() != grads.size() || params.size() != velocity.size())
   {
      throw ShapeError("parameter group '" + std::string(group) + "': size mismatch");
   }
   for (double g : grads)
   {
      if (!std::isfinite(g))
      {
         throw NumericError("non-finite gradient in parameter group '" + std::string(group) + "'");
      }
   }
   for (std::size_t i = 0; i < params.size(); ++i)
   {
      velocity[i] = momentum * velocity[i] + grads[i];
      params[i] -= lr * velocity[i];
   }
}

HeadDualState step_dual(const HeadDualState& dual, double d_a, double d_b, double d_alpha, double lr)
{
   if (!std::isfinite(d_a) || !std::isfinite(d_b) || !std::isfinite(d_alpha))
   {
      throw NumericError("non-finite dual gradient");
   }
   HeadDualState next = dual;
   next.a -= lr * d_a;
   next.b -= lr * d_b;
   next.alpha = std::max(0.0, dual.alpha + lr * d_alpha);
   return next;
}

} // namespace ovaner
