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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ovaner {

inline constexpr std::string_view kOutsideTag = "O";

/// One tokenized sentence with a BIO tag per token.
struct Sentence
{
   std::vector<std::string> tokens;
   std::vector<std::string> labels;

   std::size_t size() const noexcept { return tokens.size(); }
   bool operator==(const Sentence&) const = default;
};

struct Corpus
{
   std::string name;
   std::vector<Sentence> sentences;

   std::size_t token_count() const;
};

/// Split of a BIO tag into prefix ('B', 'I' or 'O') and entity type.
struct TagParts
{
   char prefix = 'O';
   std::string_view type;
};

/// Parses a tag; throws ValidationError unless it is "O", "B-<T>" or "I-<T>".
TagParts parse_tag(std::string_view tag);
bool is_valid_tag(std::string_view tag) noexcept;

/// Throws ValidationError if the sentence is empty, ragged or has a bad tag.
void validate(const Sentence& sentence);

/// The K labels in head order: "O" first, remaining tags sorted bytewise.
class LabelSet
{
public:
   LabelSet() = default;
   /// Builds from an arbitrary collection; "O" is always added.
   explicit LabelSet(std::vector<std::string> tags);

   std::size_t size() const noexcept { return m_labels.size(); }
   const std::vector<std::string>& labels() const noexcept { return m_labels; }
   const std::string& label(std::size_t k) const { return m_labels.at(k); }

   bool contains(std::string_view tag) const;
   /// Throws ValidationError for unknown tags.
   std::size_t index(std::string_view tag) const;

   bool operator==(const LabelSet& other) const { return m_labels == other.m_labels; }

private:
   std::vector<std::string> m_labels;
   std::map<std::string, std::size_t, std::less<>> m_index;
};

enum class CasePattern : int
{
   AllLower = 0,
   AllUpper = 1,
   InitCap = 2,
   HasDigit = 3,
   Other = 4,
};

inline constexpr std::size_t kCasePatternCount = 5;

CasePattern case_pattern(std::string_view token) noexcept;

/// ASCII lowercase; bytes >= 0x80 are kept as-is.
std::string lowercase(std::string_view token);

/// Lowercased word ids plus the unknown-word id (== number of words).
class Vocabulary
{
public:
   Vocabulary() = default;
   /// `words` must be distinct; ids are assigned in the given order.
   Vocabulary(std::vector<std::string> words, std::size_t min_count);

   std::size_t word_count() const noexcept { return m_words.size(); }
   std::size_t unk_id() const noexcept { return m_words.size(); }
   std::size_t min_count() const noexcept { return m_min_count; }
   const std::vector<std::string>& words() const noexcept { return m_words; }

   /// Id of the lowercased token, or unk_id().
   std::size_t word_id(std::string_view token) const;
   std::size_t case_id(std::string_view token) const noexcept
   {
      return static_cast<std::size_t>(case_pattern(token));
   }

   bool operator==(const Vocabulary& other) const
   {
      return m_words == other.m_words && m_min_count == other.m_min_count;
   }

private:
   std::vector<std::string> m_words;
   std::unordered_map<std::string, std::size_t> m_ids;
   std::size_t m_min_count = 1;
};

struct CorpusStats
{
   std::string name;
   std::size_t sentences = 0;
   std::size_t tokens = 0;
   std::size_t labels = 0; ///< K, including "O"
   std::size_t begin_tokens = 0;
   std::size_t inside_tokens = 0;
   std::size_t outside_tokens = 0;
   std::size_t entity_sentences = 0;

   double pct_begin() const;
   double pct_inside() const;
   double pct_outside() const;
   double pct_entity_sentences() const;
};

/// Reads CoNLL text: first column token, last column tag, blank line between
/// sentences, "-DOCSTART-" rows skipped.
Corpus read_conll(std::istream& in, std::string name);
Corpus load_conll(const std::filesystem::path& path);

/// Writes "token tag" rows; any middle columns of the source are not kept.
void write_conll(std::ostream& out, const Corpus& corpus);
void save_conll(const std::filesystem::path& path, const Corpus& corpus);

LabelSet build_label_set(const Corpus& corpus);
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count);
CorpusStats corpus_stats(const Corpus& corpus);

/// +1 where the sentence carries `label`, -1 elsewhere.
std::vector<int> binarize_labels(const Sentence& sentence, std::string_view label, const LabelSet& label_set);

/// Number of tokens whose tag is not "O".
std::size_t entity_token_count(const Sentence& sentence);

} // namespace ovaner
