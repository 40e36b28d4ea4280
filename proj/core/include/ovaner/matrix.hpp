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

#include <cstddef>
#include <algorithm>
#include <span>
#include <vector>

namespace ovaner {

/// Dense row-major matrix of doubles.
class Matrix
{
public:
   Matrix() = default;
   Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : m_rows(rows), m_cols(cols), m_data(rows * cols, fill)
   {
   }

   std::size_t rows() const noexcept { return m_rows; }
   std::size_t cols() const noexcept { return m_cols; }
   std::size_t size() const noexcept { return m_data.size(); }
   bool empty() const noexcept { return m_data.empty(); }

   double& operator()(std::size_t r, std::size_t c) { return m_data[r * m_cols + c]; }
   double operator()(std::size_t r, std::size_t c) const { return m_data[r * m_cols + c]; }

   std::span<double> row(std::size_t r) { return {m_data.data() + r * m_cols, m_cols}; }
   std::span<const double> row(std::size_t r) const { return {m_data.data() + r * m_cols, m_cols}; }

   std::span<double> values() noexcept { return m_data; }
   std::span<const double> values() const noexcept { return m_data; }

   void fill(double v) { std::fill(m_data.begin(), m_data.end(), v); }

   bool operator==(const Matrix&) const = default;

private:
   std::size_t m_rows = 0;
   std::size_t m_cols = 0;
   std::vector<double> m_data;
};

/// Four interleaved partial sums so the loop vectorises without
/// reassociation flags; the summation order is fixed.
inline double dot(std::span<const double> a, std::span<const double> b)
{
   const std::size_t n = a.size();
   const std::size_t n4 = n - n % 4;
   double s0 = 0.0;
   double s1 = 0.0;
   double s2 = 0.0;
   double s3 = 0.0;
   for (std::size_t i = 0; i < n4; i += 4)
   {
      s0 += a[i] * b[i];
      s1 += a[i + 1] * b[i + 1];
      s2 += a[i + 2] * b[i + 2];
      s3 += a[i + 3] * b[i + 3];
   }
   for (std::size_t i = n4; i < n; ++i)
   {
      s0 += a[i] * b[i];
   }
   return (s0 + s2) + (s1 + s3);
}

} // namespace ovaner
