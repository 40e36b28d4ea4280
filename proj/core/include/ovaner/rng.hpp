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

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace ovaner {

/// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
   x += 0x9e3779b97f4a7c15ULL;
   x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
   x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
   return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a sequence of stream tags.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept
{
   std::uint64_t s = mix64(seed);
   for (auto tag : tags)
   {
      s = mix64(s ^ mix64(tag + 0x632be59bd9b4e019ULL));
   }
   return s;
}

/// Seeded generator with platform-independent draws.
///
/// The engine is std::mt19937_64 (fully specified by the standard); the
/// mapping to integers and reals is done here because the standard
/// distributions are implementation-defined.
class Rng
{
public:
   explicit Rng(std::uint64_t seed) : m_engine(seed) {}

   std::uint64_t next_u64() { return m_engine(); }

   /// Uniform integer in [0, bound); bound must be > 0.
   std::uint64_t uniform_index(std::uint64_t bound)
   {
      const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
      std::uint64_t x = 0;
      do
      {
         x = m_engine();
      } while (x >= limit);
      return x % bound;
   }

   /// Uniform real in [0, 1) with 53 random bits.
   double uniform01() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

   double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

   template <typename T>
   void shuffle(std::span<T> items)
   {
      for (std::size_t i = items.size(); i > 1; --i)
      {
         const auto j = static_cast<std::size_t>(uniform_index(i));
         std::swap(items[i - 1], items[j]);
      }
   }

private:
   std::mt19937_64 m_engine;
};

} // namespace ovaner
