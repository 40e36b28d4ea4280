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

#include "ovaner/corpus.hpp"

#include "ovaner/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace ovaner {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line)
{
   std::vector<std::string_view> fields;
   std::size_t i = 0;
   while (i < line.size())
   {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      {
         ++i;
      }
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      {
         ++i;
      }
      if (i > start)
      {
         fields.push_back(line.substr(start, i - start));
      }
   }
   return fields;
}

bool is_blank(std::string_view line)
{
   return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

double percent(std::size_t part, std::size_t whole)
{
   return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

} // namespace

std::size_t Corpus::token_count() const
{
   std::size_t n = 0;
   for (const auto& s : sentences)
   {
      n += s.size();
   }
   return n;
}

TagParts parse_tag(std::string_view tag)
{
   if (tag == kOutsideTag)
   {
      return {'O', {}};
   }
   if (tag.size() >= 3 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-')
   {
      return {tag[0], tag.substr(2)};
   }
   throw ValidationError("invalid tag '" + std::string(tag) + "' (expected O, B-<TYPE> or I-<TYPE>)");
}

bool is_valid_tag(std::string_view tag) noexcept
{
   return tag == kOutsideTag || (tag.size() >= 3 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-');
}

void validate(const Sentence& sentence)
{
   if (sentence.tokens.empty())
   {
      throw ValidationError("empty sentence");
   }
   if (sentence.tokens.size() != sentence.labels.size())
   {
      throw ValidationError("sentence has " + std::to_string(sentence.tokens.size()) + " tokens but " +
                            std::to_string(sentence.labels.size()) + " labels");
   }
   for (const auto& tag : sentence.labels)
   {
      parse_tag(tag);
   }
}

LabelSet::LabelSet(std::vector<std::string> tags)
{
   std::set<std::string> unique(tags.begin(), tags.end());
   unique.erase(std::string(kOutsideTag));
   m_labels.reserve(unique.size() + 1);
   m_labels.emplace_back(kOutsideTag);
   m_labels.insert(m_labels.end(), unique.begin(), unique.end());
   for (std::size_t k = 0; k < m_labels.size(); ++k)
   {
      m_index.emplace(m_labels[k], k);
   }
}

bool LabelSet::contains(std::string_view tag) const
{
   return m_index.find(tag) != m_index.end();
}

std::size_t LabelSet::index(std::string_view tag) const
{
   const auto it = m_index.find(tag);
   if (it == m_index.end())
   {
      throw ValidationError("unknown label '" + std::string(tag) + "'");
   }
   return it->second;
}

CasePattern case_pattern(std::string_view token) noexcept
{
   bool any_lower = false;
   bool any_upper = false;
   bool rest_upper = false;
   for (std::size_t i = 0; i < token.size(); ++i)
   {
      const auto c = static_cast<unsigned char>(token[i]);
      if (c >= 0x80)
      {
         return CasePattern::Other;
      }
      if (c >= '0' && c <= '9')
      {
         return CasePattern::HasDigit;
      }
      if (c >= 'a' && c <= 'z')
      {
         any_lower = true;
      }
      else if (c >= 'A' && c <= 'Z')
      {
         any_upper = true;
         rest_upper = rest_upper || i > 0;
      }
   }
   if (!any_lower && !any_upper)
   {
      return CasePattern::Other;
   }
   if (!any_upper)
   {
      return CasePattern::AllLower;
   }
   const auto first = static_cast<unsigned char>(token.front());
   const bool first_upper = first >= 'A' && first <= 'Z';
   if (first_upper && !rest_upper)
   {
      return CasePattern::InitCap;
   }
   if (!any_lower)
   {
      return CasePattern::AllUpper;
   }
   return CasePattern::Other;
}

std::string lowercase(std::string_view token)
{
   std::string out(token);
   for (auto& c : out)
   {
      if (c >= 'A' && c <= 'Z')
      {
         c = static_cast<char>(c - 'A' + 'a');
      }
   }
   return out;
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::size_t min_count)
   : m_words(std::move(words)), m_min_count(min_count)
{
   for (std::size_t i = 0; i < m_words.size(); ++i)
   {
      if (!m_ids.emplace(m_words[i], i).second)
      {
         throw ValidationError("duplicate vocabulary entry '" + m_words[i] + "'");
      }
   }
}

std::size_t Vocabulary::word_id(std::string_view token) const
{
   const auto it = m_ids.find(lowercase(token));
   return it == m_ids.end() ? unk_id() : it->second;
}

double CorpusStats::pct_begin() const { return percent(begin_tokens, tokens); }
double CorpusStats::pct_inside() const { return percent(inside_tokens, tokens); }
double CorpusStats::pct_outside() const { return percent(outside_tokens, tokens); }
double CorpusStats::pct_entity_sentences() const { return percent(entity_sentences, sentences); }

Corpus read_conll(std::istream& in, std::string name)
{
   Corpus corpus;
   corpus.name = std::move(name);

   Sentence current;
   std::size_t current_start = 0;
   auto flush = [&]() {
      if (current.tokens.empty())
      {
         return;
      }
      try
      {
         validate(current);
      }
      catch (const ValidationError& e)
      {
         throw ValidationError("sentence starting at line " + std::to_string(current_start) + ": " + e.what());
      }
      corpus.sentences.push_back(std::move(current));
      current = {};
   };

   std::string line;
   std::size_t line_no = 0;
   while (std::getline(in, line))
   {
      ++line_no;
      if (is_blank(line))
      {
         flush();
         continue;
      }
      const auto fields = split_whitespace(line);
      if (fields.front().starts_with("-DOCSTART-"))
      {
         continue;
      }
      if (fields.size() < 2)
      {
         throw ParseError("expected at least two columns (token ... tag)", line_no);
      }
      const auto tag = fields.back();
      if (!is_valid_tag(tag))
      {
         throw ValidationError("line " + std::to_string(line_no) + ": invalid tag '" + std::string(tag) + "'");
      }
      if (current.tokens.empty())
      {
         current_start = line_no;
      }
      current.tokens.emplace_back(fields.front());
      current.labels.emplace_back(tag);
   }
   flush();

   if (corpus.sentences.empty())
   {
      throw ValidationError("no sentences in '" + corpus.name + "'");
   }
   return corpus;
}

Corpus load_conll(const std::filesystem::path& path)
{
   std::ifstream in(path, std::ios::binary);
   if (!in)
   {
      throw Error("cannot open '" + path.string() + "'");
   }
   return read_conll(in, path.stem().string());
}

void write_conll(std::ostream& out, const Corpus& corpus)
{
   for (const auto& sentence : corpus.sentences)
   {
      for (std::size_t i = 0; i < sentence.size(); ++i)
      {
         out << sentence.tokens[i] << ' ' << sentence.labels[i] << '\n';
      }
      out << '\n';
   }
}

void save_conll(const std::filesystem::path& path, const Corpus& corpus)
{
   std::ofstream out(path, std::ios::binary);
   if (!out)
   {
      throw Error("cannot write '" + path.string() + "'");
   }
   write_conll(out, corpus);
}

LabelSet build_label_set(const Corpus& corpus)
{
   std::vector<std::string> tags;
   std::set<std::string_view> seen;
   for (const auto& sentence : corpus.sentences)
   {
      for (const auto& tag : sentence.labels)
      {
         if (seen.insert(tag).second)
         {
            tags.push_back(tag);
         }
      }
   }
   return LabelSet(std::move(tags));
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count)
{
   if (min_count < 1)
   {
      throw ConfigError("min_count must be >= 1");
   }
   std::map<std::string, std::size_t> counts;
   for (const auto& sentence : corpus.sentences)
   {
      for (const auto& token : sentence.tokens)
      {
         ++counts[lowercase(token)];
      }
   }
   std::vector<std::string> words;
   for (const auto& [word, count] : counts)
   {
      if (count >= min_count)
      {
         words.push_back(word);
      }
   }
   return Vocabulary(std::move(words), min_count);
}

CorpusStats corpus_stats(const Corpus& corpus)
{
   CorpusStats stats;
   stats.name = corpus.name;
   stats.sentences = corpus.sentences.size();
   stats.labels = build_label_set(corpus).size();
   for (const auto& sentence : corpus.sentences)
   {
      bool has_entity = false;
      for (const auto& tag : sentence.labels)
      {
         switch (parse_tag(tag).prefix)
         {
         case 'B':
            ++stats.begin_tokens;
            has_entity = true;
            break;
         case 'I':
            ++stats.inside_tokens;
            has_entity = true;
            break;
         default:
            ++stats.outside_tokens;
            break;
         }
      }
      stats.tokens += sentence.size();
      stats.entity_sentences += has_entity ? 1 : 0;
   }
   return stats;
}

std::vector<int> binarize_labels(const Sentence& sentence, std::string_view label, const LabelSet& label_set)
{
   if (!label_set.contains(label))
   {
      throw ValidationError("unknown label '" + std::string(label) + "'");
   }
   std::vector<int> out(sentence.size());
   for (std::size_t i = 0; i < sentence.size(); ++i)
   {
      out[i] = sentence.labels[i] == label ? 1 : -1;
   }
   return out;
}

std::size_t entity_token_count(const Sentence& sentence)
{
   return static_cast<std::size_t>(std::count_if(sentence.labels.begin(), sentence.labels.end(),
                                                 [](const std::string& t) { return t != kOutsideTag; }));
}

} // namespace ovaner
