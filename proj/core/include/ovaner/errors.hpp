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
#include <stdexcept>
#include <string>

namespace ovaner {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
   using std::runtime_error::runtime_error;
};

/// Malformed input text (CoNLL rows, model files, CSV).
class ParseError : public Error
{
public:
   ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), m_line(line)
   {
   }

   std::size_t line() const noexcept { return m_line; }

private:
   std::size_t m_line;
};

/// Well-formed input that violates a domain invariant (bad tag, unknown label...).
class ValidationError : public Error
{
public:
   using Error::Error;
};

/// Bad configuration: unknown keys, out-of-range hyperparameters.
class ConfigError : public Error
{
public:
   using Error::Error;
};

/// Array shapes that do not line up.
class ShapeError : public Error
{
public:
   using Error::Error;
};

/// A NaN or infinity reached the optimizer.
class NumericError : public Error
{
public:
   using Error::Error;
};

} // namespace ovaner
