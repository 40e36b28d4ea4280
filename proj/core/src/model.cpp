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

#include "ovaner/model.hpp"

#include "ovaner/errors.hpp"
#include "ovaner/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ovaner {

std::string_view to_string(Method method) noexcept
{
   switch (method)
   {
   case Method::Ce:
      return "ce";
   case Method::OvaBce:
      return "ova-bce";
   case Method::OvaAuc:
      return "ova-auc";
   case Method::OvaAucMaml:
      return "ova-auc-maml";
   }
   return "?";
}

Method parse_method(std::string_view name)
{
   for (auto m : {Method::Ce, Method::OvaBce, Method::OvaAuc, Method::OvaAucMaml})
   {
      if (to_string(m) == name)
      {
         return m;
      }
   }
   throw ConfigError("unknown method '" + std::string(name) + "' (expected ce, ova-bce, ova-auc or ova-auc-maml)");
}

namespace {

void fill_uniform(std::span<double> values, Rng& rng)
{
   for (auto& v : values)
   {
      v = rng.uniform(-0.1, 0.1);
   }
}

void axpy(double a, std::span<const double> x, std::span<double> y)
{
   for (std::size_t i = 0; i < x.size(); ++i)
   {
      y[i] += a * x[i];
   }
}

} // namespace

ModelState init_model(LabelSet label_set, Vocabulary vocabulary, const EncoderDims& dims, const RunInfo& info,
                      std::uint64_t seed)
{
   if (dims.word_dim < 1 || dims.case_dim < 1 || dims.hidden_dim < 1)
   {
      throw ConfigError("encoder dimensions must be >= 1");
   }
   ModelState model;
   model.label_set = std::move(label_set);
   model.vocabulary = std::move(vocabulary);
   model.info = info;

   auto& enc = model.params.encoder;
   enc.dims = dims;
   enc.word_emb = Matrix(model.vocabulary.word_count() + 1, dims.word_dim);
   enc.case_emb = Matrix(kCasePatternCount, dims.case_dim);
   enc.hidden_w = Matrix(dims.hidden_dim, dims.input_width());
   enc.hidden_b.assign(dims.hidden_dim, 0.0);

   Rng rng(derive_seed(seed, {0x1417}));
   fill_uniform(enc.word_emb.values(), rng);
   fill_uniform(enc.case_emb.values(), rng);
   fill_uniform(enc.hidden_w.values(), rng);

   const std::size_t k = model.label_set.size();
   model.params.heads.resize(k);
   for (auto& head : model.params.heads)
   {
      head.weight.resize(dims.hidden_dim);
      fill_uniform(head.weight, rng);
      head.bias = 0.0;
   }
   if (info.method == Method::Ce)
   {
      MulticlassHead mc{Matrix(k, dims.hidden_dim), std::vector<double>(k, 0.0)};
      fill_uniform(mc.weight.values(), rng);
      model.params.multiclass = std::move(mc);
   }
   return model;
}

void set_zero(Parameters& params)
{
   for (auto& group : param_groups(params, all_groups(params)))
   {
      std::fill(group.values.begin(), group.values.end(), 0.0);
   }
}

Parameters zeros_like(const Parameters& params)
{
   Parameters out = params;
   set_zero(out);
   return out;
}

GroupSelection all_groups(const Parameters& params)
{
   GroupSelection sel;
   sel.encoder = true;
   sel.heads.resize(params.heads.size());
   for (std::size_t k = 0; k < sel.heads.size(); ++k)
   {
      sel.heads[k] = k;
   }
   sel.multiclass = params.multiclass.has_value();
   return sel;
}

std::vector<ParamGroup> param_groups(Parameters& params, const GroupSelection& selection)
{
   std::vector<ParamGroup> groups;
   if (selection.encoder)
   {
      auto& enc = params.encoder;
      groups.push_back({"word_emb", enc.word_emb.values()});
      groups.push_back({"case_emb", enc.case_emb.values()});
      groups.push_back({"hidden_w", enc.hidden_w.values()});
      groups.push_back({"hidden_b", enc.hidden_b});
   }
   for (auto k : selection.heads)
   {
      auto& head = params.heads.at(k);
      const auto prefix = "head[" + std::to_string(k) + "]";
      groups.push_back({prefix + ".weight", head.weight});
      groups.push_back({prefix + ".bias", std::span<double>(&head.bias, 1)});
   }
   if (selection.multiclass && params.multiclass)
   {
      groups.push_back({"multiclass.weight", params.multiclass->weight.values()});
      groups.push_back({"multiclass.bias", params.multiclass->bias});
   }
   return groups;
}

EncoderCache encode_cached(const ModelState& model, const Sentence& sentence)
{
   const auto& enc = model.params.encoder;
   const auto& dims = enc.dims;
   const std::size_t l = sentence.size();
   const std::size_t tw = dims.token_width();

   EncoderCache cache;
   cache.word_ids.resize(l);
   cache.case_ids.resize(l);
   for (std::size_t i = 0; i < l; ++i)
   {
      cache.word_ids[i] = model.vocabulary.word_id(sentence.tokens[i]);
      cache.case_ids[i] = model.vocabulary.case_id(sentence.tokens[i]);
   }

   cache.inputs = Matrix(l, dims.input_width());
   const auto w = static_cast<std::ptrdiff_t>(dims.window);
   for (std::size_t i = 0; i < l; ++i)
   {
      auto row = cache.inputs.row(i);
      for (std::ptrdiff_t o = -w; o <= w; ++o)
      {
         const auto j = static_cast<std::ptrdiff_t>(i) + o;
         if (j < 0 || j >= static_cast<std::ptrdiff_t>(l))
         {
            continue;
         }
         const auto slot = static_cast<std::size_t>(o + w) * tw;
         const auto word = enc.word_emb.row(cache.word_ids[static_cast<std::size_t>(j)]);
         const auto kase = enc.case_emb.row(cache.case_ids[static_cast<std::size_t>(j)]);
         std::copy(word.begin(), word.end(), row.begin() + static_cast<std::ptrdiff_t>(slot));
         std::copy(kase.begin(), kase.end(), row.begin() + static_cast<std::ptrdiff_t>(slot + dims.word_dim));
      }
   }

   cache.features = Matrix(l, dims.hidden_dim);
   for (std::size_t i = 0; i < l; ++i)
   {
      const auto x = cache.inputs.row(i);
      for (std::size_t h = 0; h < dims.hidden_dim; ++h)
      {
         cache.features(i, h) = std::tanh(dot(enc.hidden_w.row(h), x) + enc.hidden_b[h]);
      }
   }
   return cache;
}

Matrix encode(const ModelState& model, const Sentence& sentence)
{
   return encode_cached(model, sentence).features;
}

double logistic(double x) noexcept
{
   if (x >= 0.0)
   {
      return 1.0 / (1.0 + std::exp(-x));
   }
   const double e = std::exp(x);
   return e / (1.0 + e);
}

namespace {

double clamp_score(double s) noexcept
{
   return std::clamp(s, kScoreFloor, 1.0 - kScoreFloor);
}

} // namespace

std::vector<double> head_score(const ModelState& model, const Matrix& features, std::size_t k)
{
   const auto& head = model.params.heads.at(k);
   std::vector<double> out(features.rows());
   for (std::size_t i = 0; i < features.rows(); ++i)
   {
      out[i] = clamp_score(logistic(dot(head.weight, features.row(i)) + head.bias));
   }
   return out;
}

Matrix head_scores(const ModelState& model, const Matrix& features)
{
   const std::size_t k_count = model.params.heads.size();
   Matrix out(features.rows(), k_count);
   for (std::size_t i = 0; i < features.rows(); ++i)
   {
      const auto f = features.row(i);
      for (std::size_t k = 0; k < k_count; ++k)
      {
         const auto& head = model.params.heads[k];
         out(i, k) = clamp_score(logistic(dot(head.weight, f) + head.bias));
      }
   }
   return out;
}

Matrix multiclass_logits(const ModelState& model, const Matrix& features)
{
   if (!model.params.multiclass)
   {
      throw ShapeError("model has no multi-class head");
   }
   const auto& mc = *model.params.multiclass;
   Matrix out(features.rows(), mc.weight.rows());
   for (std::size_t i = 0; i < features.rows(); ++i)
   {
      for (std::size_t k = 0; k < mc.weight.rows(); ++k)
      {
         out(i, k) = dot(mc.weight.row(k), features.row(i)) + mc.bias[k];
      }
   }
   return out;
}

void accumulate_gradients(const ModelState& model, const EncoderCache& cache, const Upstream& upstream,
                          Parameters& grads)
{
   const auto& params = model.params;
   const auto& enc = params.encoder;
   const auto& dims = enc.dims;
   const std::size_t l = cache.features.rows();
   const std::size_t hd = dims.hidden_dim;

   if (upstream.head_scores.size() > params.heads.size())
   {
      throw ShapeError("upstream has more heads than the model");
   }
   if (grads.heads.size() != params.heads.size() || grads.encoder.hidden_w.size() != enc.hidden_w.size() ||
       grads.encoder.word_emb.size() != enc.word_emb.size())
   {
      throw ShapeError("gradient record does not match the model");
   }

   Matrix d_features(l, hd);

   for (std::size_t k = 0; k < upstream.head_scores.size(); ++k)
   {
      const auto& g = upstream.head_scores[k];
      if (g.empty())
      {
         continue;
      }
      if (g.size() != l)
      {
         throw ShapeError("upstream gradient for head " + std::to_string(k) + " has length " +
                          std::to_string(g.size()) + ", expected " + std::to_string(l));
      }
      const auto& head = params.heads[k];
      auto& grad_head = grads.heads[k];
      for (std::size_t i = 0; i < l; ++i)
      {
         const auto f = cache.features.row(i);
         const double s = logistic(dot(head.weight, f) + head.bias);
         const double dz = g[i] * s * (1.0 - s);
         axpy(dz, f, grad_head.weight);
         grad_head.bias += dz;
         axpy(dz, head.weight, d_features.row(i));
      }
   }

   if (!upstream.logits.empty())
   {
      if (!params.multiclass || !grads.multiclass)
      {
         throw ShapeError("logit gradients given but the model has no multi-class head");
      }
      const auto& mc = *params.multiclass;
      auto& grad_mc = *grads.multiclass;
      if (upstream.logits.rows() != l || upstream.logits.cols() != mc.weight.rows())
      {
         throw ShapeError("logit gradient shape mismatch");
      }
      for (std::size_t i = 0; i < l; ++i)
      {
         const auto f = cache.features.row(i);
         for (std::size_t k = 0; k < mc.weight.rows(); ++k)
         {
            const double g = upstream.logits(i, k);
            if (g == 0.0)
            {
               continue;
            }
            axpy(g, f, grad_mc.weight.row(k));
            grad_mc.bias[k] += g;
            axpy(g, mc.weight.row(k), d_features.row(i));
         }
      }
   }

   const std::size_t tw = dims.token_width();
   const auto w = static_cast<std::ptrdiff_t>(dims.window);
   std::vector<double> d_input(dims.input_width());
   for (std::size_t i = 0; i < l; ++i)
   {
      std::fill(d_input.begin(), d_input.end(), 0.0);
      bool any = false;
      for (std::size_t h = 0; h < hd; ++h)
      {
         const double f = cache.features(i, h);
         const double d_pre = d_features(i, h) * (1.0 - f * f);
         if (d_pre == 0.0)
         {
            continue;
         }
         any = true;
         axpy(d_pre, cache.inputs.row(i), grads.encoder.hidden_w.row(h));
         grads.encoder.hidden_b[h] += d_pre;
         axpy(d_pre, enc.hidden_w.row(h), d_input);
      }
      if (!any)
      {
         continue;
      }
      for (std::ptrdiff_t o = -w; o <= w; ++o)
      {
         const auto j = static_cast<std::ptrdiff_t>(i) + o;
         if (j < 0 || j >= static_cast<std::ptrdiff_t>(l))
         {
            continue;
         }
         const auto slot = static_cast<std::size_t>(o + w) * tw;
         const std::span<const double> d(d_input);
         axpy(1.0, d.subspan(slot, dims.word_dim),
              grads.encoder.word_emb.row(cache.word_ids[static_cast<std::size_t>(j)]));
         axpy(1.0, d.subspan(slot + dims.word_dim, dims.case_dim),
              grads.encoder.case_emb.row(cache.case_ids[static_cast<std::size_t>(j)]));
      }
   }
}

Parameters backward(const ModelState& model, const Sentence& sentence, const Upstream& upstream)
{
   Parameters grads = zeros_like(model.params);
   accumulate_gradients(model, encode_cached(model, sentence), upstream, grads);
   return grads;
}

// Model file: line-oriented text, one section per block, values in %.17g.

namespace {

constexpr std::string_view kMagic = "ovaner-model";

std::string format_double(double v)
{
   char buf[32];
   const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
   return std::string(buf, static_cast<std::size_t>(n));
}

void write_values(std::ostream& out, std::span<const double> values)
{
   for (std::size_t i = 0; i < values.size(); ++i)
   {
      if (i > 0)
      {
         out << ' ';
      }
      out << format_double(values[i]);
   }
   out << '\n';
}

void write_matrix(std::ostream& out, std::string_view name, const Matrix& m)
{
   out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
   for (std::size_t r = 0; r < m.rows(); ++r)
   {
      write_values(out, m.row(r));
   }
}

class LineReader
{
public:
   explicit LineReader(std::istream& in) : m_in(in) {}

   std::string next(std::string_view expecting)
   {
      std::string line;
      if (!std::getline(m_in, line))
      {
         throw ParseError("truncated model file: expected " + std::string(expecting), m_line + 1);
      }
      ++m_line;
      if (!line.empty() && line.back() == '\r')
      {
         line.pop_back();
      }
      return line;
   }

   /// Reads "<keyword> <rest>" and returns the fields after the keyword.
   std::vector<std::string> section(std::string_view keyword)
   {
      auto line = next("section '" + std::string(keyword) + "'");
      std::istringstream ss(line);
      std::string head;
      ss >> head;
      if (head != keyword)
      {
         throw ParseError("expected section '" + std::string(keyword) + "', found '" + head + "'", m_line);
      }
      std::vector<std::string> fields;
      std::string f;
      while (ss >> f)
      {
         fields.push_back(f);
      }
      return fields;
   }

   /// Rest of a "<keyword> <text>" line, spaces preserved.
   std::string text_section(std::string_view keyword)
   {
      auto line = next("section '" + std::string(keyword) + "'");
      if (line.rfind(keyword, 0) != 0 || (line.size() > keyword.size() && line[keyword.size()] != ' '))
      {
         throw ParseError("expected section '" + std::string(keyword) + "'", m_line);
      }
      return line.size() > keyword.size() ? line.substr(keyword.size() + 1) : std::string();
   }

   std::size_t to_size(const std::string& s) const
   {
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size())
      {
         throw ParseError("expected an unsigned integer, found '" + s + "'", m_line);
      }
      return v;
   }

   std::uint64_t to_u64(const std::string& s) const
   {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size())
      {
         throw ParseError("expected an unsigned integer, found '" + s + "'", m_line);
      }
      return v;
   }

   double to_double(std::string_view s) const
   {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size())
      {
         throw ParseError("expected a number, found '" + std::string(s) + "'", m_line);
      }
      return v;
   }

   void values(std::span<double> out, std::string_view what)
   {
      const auto line = next(what);
      std::size_t pos = 0;
      std::size_t count = 0;
      while (pos < line.size())
      {
         while (pos < line.size() && line[pos] == ' ')
         {
            ++pos;
         }
         if (pos >= line.size())
         {
            break;
         }
         const auto end = std::min(line.find(' ', pos), line.size());
         if (count == out.size())
         {
            throw ParseError("too many values in " + std::string(what), m_line);
         }
         out[count++] = to_double(std::string_view(line).substr(pos, end - pos));
         pos = end;
      }
      if (count != out.size())
      {
         throw ParseError(std::string(what) + ": expected " + std::to_string(out.size()) + " values, found " +
                             std::to_string(count),
                          m_line);
      }
   }

   Matrix matrix(std::string_view keyword, std::size_t rows, std::size_t cols)
   {
      const auto f = section(keyword);
      if (f.size() != 2)
      {
         throw ParseError("section '" + std::string(keyword) + "' needs rows and cols", m_line);
      }
      if (to_size(f[0]) != rows || to_size(f[1]) != cols)
      {
         throw ParseError("section '" + std::string(keyword) + "' has shape " + f[0] + "x" + f[1] + ", expected " +
                             std::to_string(rows) + "x" + std::to_string(cols),
                          m_line);
      }
      Matrix m(rows, cols);
      for (std::size_t r = 0; r < rows; ++r)
      {
         values(m.row(r), keyword);
      }
      return m;
   }

   std::size_t line() const noexcept { return m_line; }

private:
   std::istream& m_in;
   std::size_t m_line = 0;
};

} // namespace

void write_model(std::ostream& out, const ModelState& model)
{
   const auto& enc = model.params.encoder;
   const auto& dims = enc.dims;
   const auto& info = model.info;

   out << kMagic << ' ' << kModelFormatVersion << '\n';
   out << "method " << to_string(info.method) << '\n';
   out << "corpus " << info.corpus << '\n';
   out << "train_size " << info.train_size << '\n';
   out << "entity_pct " << (info.entity_pct ? format_double(*info.entity_pct) : std::string("-")) << '\n';
   out << "seed " << info.seed << '\n';
   out << "dims " << dims.word_dim << ' ' << dims.case_dim << ' ' << dims.hidden_dim << ' ' << dims.window << '\n';
   out << "labels " << model.label_set.size() << '\n';
   for (const auto& label : model.label_set.labels())
   {
      out << label << '\n';
   }
   out << "vocabulary " << model.vocabulary.word_count() << ' ' << model.vocabulary.min_count() << '\n';
   for (const auto& word : model.vocabulary.words())
   {
      out << word << '\n';
   }
   write_matrix(out, "word_emb", enc.word_emb);
   write_matrix(out, "case_emb", enc.case_emb);
   write_matrix(out, "hidden_w", enc.hidden_w);
   out << "hidden_b " << enc.hidden_b.size() << '\n';
   write_values(out, enc.hidden_b);
   out << "heads " << model.params.heads.size() << ' ' << dims.hidden_dim << '\n';
   for (const auto& head : model.params.heads)
   {
      std::vector<double> row{head.bias};
      row.insert(row.end(), head.weight.begin(), head.weight.end());
      write_values(out, row);
   }
   if (model.params.multiclass)
   {
      write_matrix(out, "multiclass", model.params.multiclass->weight);
      write_values(out, model.params.multiclass->bias);
   }
   else
   {
      out << "multiclass none\n";
   }
   out << "end\n";
}

ModelState read_model(std::istream& in)
{
   LineReader r(in);
   ModelState model;

   const auto magic = r.section(kMagic);
   if (magic.size() != 1)
   {
      throw ParseError("malformed header", r.line());
   }
   if (r.to_size(magic[0]) != static_cast<std::size_t>(kModelFormatVersion))
   {
      throw ParseError("unsupported model format version " + magic[0] + " (this build reads version " +
                          std::to_string(kModelFormatVersion) + ")",
                       r.line());
   }

   auto& info = model.info;
   info.method = parse_method(r.text_section("method"));
   info.corpus = r.text_section("corpus");
   info.train_size = r.to_size(r.text_section("train_size"));
   const auto pct = r.text_section("entity_pct");
   if (pct != "-")
   {
      info.entity_pct = r.to_double(pct);
   }
   info.seed = r.to_u64(r.text_section("seed"));

   const auto d = r.section("dims");
   if (d.size() != 4)
   {
      throw ParseError("dims needs four values", r.line());
   }
   EncoderDims dims{r.to_size(d[0]), r.to_size(d[1]), r.to_size(d[2]), r.to_size(d[3])};
   if (dims.word_dim < 1 || dims.case_dim < 1 || dims.hidden_dim < 1)
   {
      throw ParseError("encoder dimensions must be >= 1", r.line());
   }

   const auto lab = r.section("labels");
   if (lab.size() != 1)
   {
      throw ParseError("labels needs a count", r.line());
   }
   const std::size_t k_count = r.to_size(lab[0]);
   std::vector<std::string> labels;
   for (std::size_t k = 0; k < k_count; ++k)
   {
      labels.push_back(r.next("label"));
      if (!is_valid_tag(labels.back()))
      {
         throw ParseError("invalid label '" + labels.back() + "'", r.line());
      }
   }
   model.label_set = LabelSet(labels);
   if (model.label_set.labels() != labels)
   {
      throw ParseError("label section is not in canonical order or has duplicates", r.line());
   }

   const auto voc = r.section("vocabulary");
   if (voc.size() != 2)
   {
      throw ParseError("vocabulary needs a count and min_count", r.line());
   }
   const std::size_t v_count = r.to_size(voc[0]);
   std::vector<std::string> words;
   words.reserve(v_count);
   for (std::size_t i = 0; i < v_count; ++i)
   {
      words.push_back(r.next("vocabulary word"));
   }
   model.vocabulary = Vocabulary(std::move(words), r.to_size(voc[1]));

   auto& enc = model.params.encoder;
   enc.dims = dims;
   enc.word_emb = r.matrix("word_emb", v_count + 1, dims.word_dim);
   enc.case_emb = r.matrix("case_emb", kCasePatternCount, dims.case_dim);
   enc.hidden_w = r.matrix("hidden_w", dims.hidden_dim, dims.input_width());
   const auto hb = r.section("hidden_b");
   if (hb.size() != 1 || r.to_size(hb[0]) != dims.hidden_dim)
   {
      throw ParseError("hidden_b size does not match dims", r.line());
   }
   enc.hidden_b.resize(dims.hidden_dim);
   r.values(enc.hidden_b, "hidden_b");

   const auto hs = r.section("heads");
   if (hs.size() != 2 || r.to_size(hs[1]) != dims.hidden_dim)
   {
      throw ParseError("heads section must give count and hidden_dim", r.line());
   }
   if (r.to_size(hs[0]) != k_count)
   {
      throw ParseError("model has " + hs[0] + " heads but " + std::to_string(k_count) + " labels", r.line());
   }
   model.params.heads.resize(k_count);
   std::vector<double> row(dims.hidden_dim + 1);
   for (auto& head : model.params.heads)
   {
      r.values(row, "head");
      head.bias = row[0];
      head.weight.assign(row.begin() + 1, row.end());
   }

   const auto mc_line = r.text_section("multiclass");
   if (mc_line != "none")
   {
      std::istringstream ss(mc_line);
      std::size_t rows = 0;
      std::size_t cols = 0;
      if (!(ss >> rows >> cols) || rows != k_count || cols != dims.hidden_dim)
      {
         throw ParseError("multiclass head shape does not match labels and dims", r.line());
      }
      MulticlassHead mc{Matrix(rows, cols), std::vector<double>(rows)};
      for (std::size_t k = 0; k < rows; ++k)
      {
         r.values(mc.weight.row(k), "multiclass");
      }
      r.values(mc.bias, "multiclass bias");
      model.params.multiclass = std::move(mc);
   }
   if ((info.method == Method::Ce) != model.params.multiclass.has_value())
   {
      throw ParseError("multi-class head must be present exactly for method ce", r.line());
   }
   if (r.next("end marker") != "end")
   {
      throw ParseError("expected 'end'", r.line());
   }
   return model;
}

void save_model(const std::filesystem::path& path, const ModelState& model)
{
   std::ofstream out(path, std::ios::binary);
   if (!out)
   {
      throw Error("cannot write '" + path.string() + "'");
   }
   write_model(out, model);
   if (!out)
   {
      throw Error("failed writing '" + path.string() + "'");
   }
}

ModelState load_model(const std::filesystem::path& path)
{
   std::ifstream in(path, std::ios::binary);
   if (!in)
   {
      throw Error("cannot open '" + path.string() + "'");
   }
   return read_model(in);
}

} // namespace ovaner
