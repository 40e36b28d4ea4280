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

#include "ovaner/csv.hpp"

#include "ovaner/errors.hpp"

namespace ovaner {

std::string csv_field(std::string_view field)
{
   if (field.find_first_of(",\"\r\n") == std::string_view::npos)
   {
      return std::string(field);
   }
   std::string out = "\"";
   for (char c : field)
   {
      if (c == '"')
      {
         out += '"';
      }
      out += c;
   }
   out += '"';
   return out;
}

std::vector<std::string> parse_csv_line(std::string_view line)
{
   if (!line.empty() && line.back() == '\r')
   {
      line.remove_suffix(1);
   }
   std::vector<std::string> fields;
   std::string current;
   bool quoted = false;
   for (std::size_t i = 0; i < line.size(); ++i)
   {
      const char c = line[i];
      if (quoted)
      {
         if (c == '"')
         {
            if (i + 1 < line.size() && line[i + 1] == '"')
            {
               current += '"';
               ++i;
            }
            else
            {
               quoted = false;
            }
         }
         else
         {
            current += c;
         }
      }
      else if (c == '"')
      {
         quoted = true;
      }
      else if (c == ',')
      {
         fields.push_back(std::move(current));
         current.clear();
      }
      else
      {
         current += c;
      }
   }
   if (quoted)
   {
      throw ParseError("unterminated quoted CSV field", 0);
   }
   fields.push_back(std::move(current));
   return fields;
}

} // namespace ovaner
