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

#include <ovaner/corpus.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ovaner::testing {

inline Corpus corpus_from_text(const std::string& text, std::string name = "mem")
{
   std::istringstream in(text);
   return read_conll(in, std::move(name));
}

inline Sentence make_sentence(std::vector<std::string> tokens, std::vector<std::string> labels)
{
   return Sentence{std::move(tokens), std::move(labels)};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name)
{
   auto dir = std::filesystem::temp_directory_path() / ("ovaner_test_" + name);
   std::filesystem::remove_all(dir);
   std::filesystem::create_directories(dir);
   return dir;
}

inline std::string read_file(const std::filesystem::path& path)
{
   std::ifstream in(path, std::ios::binary);
   std::ostringstream ss;
   ss << in.rdbuf();
   return ss.str();
}

} // namespace ovaner::testing
