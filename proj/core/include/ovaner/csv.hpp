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

#include <string>
#include <string_view>
#include <vector>

namespace ovaner {

/// RFC 4180 quoting when the field needs it.
std::string csv_field(std::string_view field);

/// Splits one CSV record (no embedded newlines) honouring double quotes.
std::vector<std::string> parse_csv_line(std::string_view line);

} // namespace ovaner
