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

#include <ovaner/errors.hpp>
#include <ovaner/losses.hpp>
#include <ovaner/optimizer.hpp>
#include <ovaner/rng.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace ovaner;

TEST_CASE("OptimizerConfig defaults and validation")
{
   OptimizerConfig c;
   CHECK(c.lr_primal == 0.05);
   CHECK(c.lr_dual == 0.05);
   CHECK(c.lr_decay == 0.98);
   CHECK(c.momentum == 0.9);
   CHECK_NOTHROW(c.validate());

   auto bad = [](auto mutate) {
      OptimizerConfig x;
      mutate(x);
      return x;
   };
   CHECK_THROWS_AS(bad([](auto& x) { x.lr_primal = 0; }).validate(), ConfigError);
   CHECK_THROWS_AS(bad([](auto& x) { x.lr_dual = -1; }).validate(), ConfigError);
   CHECK_THROWS_AS(bad([](auto& x) { x.lr_decay = 0; }).validate(), ConfigError);
   CHECK_THROWS_AS(bad([](auto& x) { x.lr_decay = 1.01; }).validate(), ConfigError);
   CHECK_THROWS_AS(bad([](auto& x) { x.momentum = 1.0; }).validate(), ConfigError);
   CHECK_THROWS_AS(bad([](auto& x) { x.lr_primal = std::numeric_limits<double>::quiet_NaN(); }).validate(),
                   ConfigError);
   CHECK_NOTHROW(bad([](auto& x) { x.lr_decay = 1.0; x.momentum = 0.0; }).validate());
}

TEST_CASE("decayed rates follow lr * decay^epoch")
{
   OptimizerConfig c;
   c.lr_primal = 0.1;
   c.lr_dual = 0.03;
   long double primal = 0.1L;
   long double dual = 0.03L;
   for (std::size_t e = 0; e < 200; ++e)
   {
      CHECK(c.primal_rate(e) == doctest::Approx(static_cast<double>(primal)).epsilon(1e-13));
      CHECK(c.dual_rate(e) == doctest::Approx(static_cast<double>(dual)).epsilon(1e-13));
      primal *= 0.98L;
      dual *= 0.98L;
   }
   CHECK(c.primal_rate(0) == 0.1);
   c.lr_decay = 1.0;
   CHECK(c.primal_rate(57) == 0.1);
}

TEST_CASE("step_primal plain SGD and zero gradients")
{
   std::vector<double> p{1.0, -2.0, 0.5};
   std::vector<double> v(3, 0.0);
   const std::vector<double> g{0.4, -1.0, 0.0};
   step_primal(p, g, v, 0.1, 0.0, "w");
   CHECK(p[0] == doctest::Approx(0.96));
   CHECK(p[1] == doctest::Approx(-1.9));
   CHECK(p[2] == 0.5);

   std::vector<double> q{3.0, 4.0};
   std::vector<double> vq(2, 0.0);
   const std::vector<double> zero(2, 0.0);
   step_primal(q, zero, vq, 0.1, 0.9, "w");
   CHECK(q == std::vector<double>{3.0, 4.0});
}

TEST_CASE("step_primal momentum recurrence")
{
   std::vector<double> p{0.0};
   std::vector<double> v{0.0};
   const std::vector<double> g{2.0};
   step_primal(p, g, v, 0.05, 0.9, "w");
   const double first = p[0];
   step_primal(p, g, v, 0.05, 0.9, "w");
   CHECK(first == doctest::Approx(-0.05 * 2.0));
   CHECK(p[0] - first == doctest::Approx(-0.05 * 2.0 * 1.9).epsilon(1e-14));
}

TEST_CASE("step_primal errors name the group")
{
   std::vector<double> p{0.0, 0.0};
   std::vector<double> v{0.0, 0.0};
   const std::vector<double> g{1.0, std::numeric_limits<double>::infinity()};
   CHECK_THROWS_WITH_AS(step_primal(p, g, v, 0.1, 0.9, "hidden_w"), doctest::Contains("hidden_w"), NumericError);
   CHECK(p == std::vector<double>{0.0, 0.0});
   const std::vector<double> short_g{1.0};
   CHECK_THROWS_AS(step_primal(p, short_g, v, 0.1, 0.9, "x"), ShapeError);
}

TEST_CASE("step_dual projection and direction")
{
   const HeadDualState s{0.5, 0.5, 0.0, 1.0, 0.5};
   CHECK(step_dual(s, 0, 0, -3.0, 0.05).alpha == 0.0);
   const HeadDualState t{0.5, 0.5, 0.2, 1.0, 0.5};
   CHECK(step_dual(t, 0, 0, 1e-3, 0.05).alpha > 0.2);
   const auto u = step_dual(t, 1.0, -2.0, 0.0, 0.1);
   CHECK(u.a == doctest::Approx(0.4));
   CHECK(u.b == doctest::Approx(0.7));
   CHECK(u.margin == 1.0);
   CHECK(u.prior == 0.5);
   CHECK_THROWS_AS(step_dual(t, std::nan(""), 0, 0, 0.1), NumericError);
}

TEST_CASE("step_dual fixed point at the dual optimum")
{
   const std::vector<double> h{0.9, 0.6, 0.2, 0.1};
   const std::vector<int> z{1, 1, -1, -1};
   const auto opt = dual_optima(0.75, 0.15, 1.0);
   const HeadDualState s{opt.a, opt.b, opt.alpha, 1.0, 0.5};
   const auto r = auc_margin_loss(h, z, s);
   const auto next = step_dual(s, r.d_a, r.d_b, r.d_alpha, 0.05);
   CHECK(next.a == doctest::Approx(s.a).epsilon(1e-15));
   CHECK(next.b == doctest::Approx(s.b).epsilon(1e-15));
   CHECK(next.alpha == doctest::Approx(s.alpha).epsilon(1e-15));
}

TEST_CASE("alpha stays non-negative for arbitrary gradient sequences")
{
   Rng rng(11);
   HeadDualState s;
   for (int i = 0; i < 100000; ++i)
   {
      s = step_dual(s, rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-50, 10), rng.uniform(0, 1));
      REQUIRE(s.alpha >= 0.0);
   }
}

TEST_CASE("frozen micro-problem converges to the dual optima at default rates")
{
   // Fixed scores; only a, b and alpha move.
   const OptimizerConfig cfg;
   Rng rng(12);
   for (double p : {0.5, 0.25, 0.1})
   {
      for (int trial = 0; trial < 5; ++trial)
      {
         const std::size_t n = 200;
         const auto n_pos = static_cast<std::size_t>(p * n);
         std::vector<double> h(n);
         std::vector<int> z(n, -1);
         double pos_mean = 0;
         double neg_mean = 0;
         for (std::size_t i = 0; i < n; ++i)
         {
            if (i < n_pos)
            {
               z[i] = 1;
               h[i] = rng.uniform(0.2, 0.99);
               pos_mean += h[i];
            }
            else
            {
               h[i] = rng.uniform(0.01, 0.8);
               neg_mean += h[i];
            }
         }
         pos_mean /= static_cast<double>(n_pos);
         neg_mean /= static_cast<double>(n - n_pos);
         const auto opt = dual_optima(pos_mean, neg_mean, 1.0);

         HeadDualState s{rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 2), 1.0, p};
         for (int step = 0; step < 2000; ++step)
         {
            const auto r = auc_margin_loss(h, z, s);
            s = step_dual(s, r.d_a, r.d_b, r.d_alpha, cfg.lr_dual);
         }
         CAPTURE(p);
         CHECK(std::abs(s.a - opt.a) <= 1e-3);
         CHECK(std::abs(s.b - opt.b) <= 1e-3);
         CHECK(std::abs(s.alpha - opt.alpha) <= 1e-3);
      }
   }
}
