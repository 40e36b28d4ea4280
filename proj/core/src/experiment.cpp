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

#include "ovaner/experiment.hpp"

#include "ovaner/csv.hpp"
#include "ovaner/errors.hpp"
#include "ovaner/evaluation.hpp"
#include "ovaner/rng.hpp"
#include "ovaner/sampling.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace ovaner {

namespace fs = std::filesystem;

void ExperimentSpec::validate() const
{
   if (methods.empty() || sizes.empty() || seeds.empty())
   {
      throw ConfigError("experiment needs at least one method, size and seed");
   }
   for (auto s : sizes)
   {
      if (s < 1)
      {
         throw ConfigError("training sizes must be >= 1");
      }
   }
   for (auto p : entity_pcts)
   {
      if (!(p > 0.0 && p < 100.0))
      {
         throw ConfigError("entity percentages must lie in (0, 100)");
      }
   }
   if (!train_overrides.is_object())
   {
      throw ConfigError("train_config must be a JSON object");
   }
   if (train_overrides.contains("method") || train_overrides.contains("seed"))
   {
      throw ConfigError("train_config must not set 'method' or 'seed'; they are set per run");
   }
   train_config_from_json(train_overrides);
}

namespace {

template <typename T>
std::vector<T> get_list(const nlohmann::json& value, const std::string& key)
{
   if (!value.is_array())
   {
      throw ConfigError("experiment key '" + key + "' must be an array");
   }
   try
   {
      return value.get<std::vector<T>>();
   }
   catch (const nlohmann::json::exception&)
   {
      throw ConfigError("experiment key '" + key + "' has elements of the wrong type");
   }
}

fs::path resolve(const nlohmann::json& value, const std::string& key, const fs::path& base)
{
   if (!value.is_string())
   {
      throw ConfigError("experiment key '" + key + "' must be a path string");
   }
   fs::path p = value.get<std::string>();
   return p.is_absolute() ? p : base / p;
}

std::string format_pct(const std::optional<double>& pct)
{
   return pct ? format_fixed(*pct, 2) : std::string();
}

void write_atomically(const fs::path& path, const std::string& content)
{
   const auto tmp = fs::path(path.string() + ".tmp");
   {
      std::ofstream out(tmp, std::ios::binary);
      if (!out)
      {
         throw Error("cannot write '" + tmp.string() + "'");
      }
      out << content;
      if (!out)
      {
         throw Error("failed writing '" + tmp.string() + "'");
      }
   }
   fs::rename(tmp, path);
}

std::optional<nlohmann::json> read_status(const fs::path& path)
{
   std::ifstream in(path, std::ios::binary);
   if (!in)
   {
      return std::nullopt;
   }
   try
   {
      return nlohmann::json::parse(in);
   }
   catch (const nlohmann::json::exception&)
   {
      return std::nullopt;
   }
}

} // namespace

ExperimentSpec experiment_spec_from_json(const nlohmann::json& j, const fs::path& base_dir)
{
   if (!j.is_object())
   {
      throw ConfigError("experiment config must be a JSON object");
   }
   ExperimentSpec spec;
   bool has_train = false;
   bool has_dev = false;
   bool has_test = false;
   for (const auto& [key, value] : j.items())
   {
      if (key == "train")
      {
         spec.train = resolve(value, key, base_dir);
         has_train = true;
      }
      else if (key == "dev")
      {
         spec.dev = resolve(value, key, base_dir);
         has_dev = true;
      }
      else if (key == "test")
      {
         spec.test = resolve(value, key, base_dir);
         has_test = true;
      }
      else if (key == "methods")
      {
         spec.methods.clear();
         for (const auto& m : get_list<std::string>(value, key))
         {
            spec.methods.push_back(parse_method(m));
         }
      }
      else if (key == "sizes")
      {
         spec.sizes = get_list<std::size_t>(value, key);
      }
      else if (key == "entity_pcts")
      {
         spec.entity_pcts = value.is_null() ? std::vector<double>{} : get_list<double>(value, key);
      }
      else if (key == "seeds")
      {
         spec.seeds = get_list<std::uint64_t>(value, key);
      }
      else if (key == "tolerance_pp")
      {
         if (!value.is_number())
         {
            throw ConfigError("experiment key 'tolerance_pp' must be a number");
         }
         spec.tolerance_pp = value.get<double>();
      }
      else if (key == "train_config")
      {
         spec.train_overrides = value;
      }
      else
      {
         throw ConfigError("unknown experiment key '" + key + "'");
      }
   }
   if (!has_train || !has_dev || !has_test)
   {
      throw ConfigError("experiment config needs 'train', 'dev' and 'test'");
   }
   spec.validate();
   return spec;
}

std::string RunKey::id() const
{
   std::string pct = "all";
   if (entity_pct)
   {
      pct = format_fixed(*entity_pct, 2);
   }
   return std::string(to_string(method)) + "_n" + std::to_string(size) + "_p" + pct + "_s" + std::to_string(seed);
}

std::vector<RunKey> expand_grid(const ExperimentSpec& spec)
{
   std::vector<std::optional<double>> pcts;
   if (spec.entity_pcts.empty())
   {
      pcts.emplace_back();
   }
   for (auto p : spec.entity_pcts)
   {
      pcts.emplace_back(p);
   }
   std::vector<RunKey> keys;
   for (auto method : spec.methods)
   {
      for (auto size : spec.sizes)
      {
         for (const auto& pct : pcts)
         {
            for (auto seed : spec.seeds)
            {
               keys.push_back({method, size, pct, seed});
            }
         }
      }
   }
   return keys;
}

std::uint64_t sample_seed(const RunKey& key)
{
   const auto pct_bits = key.entity_pct ? static_cast<std::uint64_t>(std::llround(*key.entity_pct * 1000.0)) + 1 : 0;
   return derive_seed(key.seed, {0x5a3b1e, key.size, pct_bits});
}

TrainConfig run_config(const ExperimentSpec& spec, const RunKey& key)
{
   auto cfg = train_config_from_json(spec.train_overrides);
   cfg.method = key.method;
   cfg.seed = key.seed;
   return cfg;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept
{
   std::uint64_t h = 0xcbf29ce484222325ULL;
   for (unsigned char c : bytes)
   {
      h ^= c;
      h *= 0x100000001b3ULL;
   }
   return h;
}

std::string run_config_hash(const ExperimentSpec& spec, const RunKey& key)
{
   nlohmann::json j;
   j["train_config"] = to_json(run_config(spec, key));
   j["sample"] = {{"size", key.size},
                  {"entity_pct", key.entity_pct ? nlohmann::json(*key.entity_pct) : nlohmann::json(nullptr)},
                  {"seed", sample_seed(key)},
                  {"tolerance_pp", spec.tolerance_pp}};
   j["data"] = {{"train", spec.train.generic_string()},
                {"dev", spec.dev.generic_string()},
                {"test", spec.test.generic_string()}};
   char buf[17];
   std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
   return buf;
}

GridReport run_grid(const ExperimentSpec& spec, const fs::path& out, std::size_t jobs, const GridLogger& log)
{
   spec.validate();
   const auto train_corpus = load_conll(spec.train);
   const auto dev = load_conll(spec.dev);
   const auto test = load_conll(spec.test);
   const auto label_set = build_label_set(train_corpus);

   const auto runs_dir = out / "runs";
   fs::create_directories(runs_dir);

   const auto keys = expand_grid(spec);
   GridReport report;
   report.total = keys.size();

   std::vector<std::size_t> todo;
   for (std::size_t i = 0; i < keys.size(); ++i)
   {
      const auto id = keys[i].id();
      const auto status = read_status(runs_dir / (id + ".json"));
      const bool done = status && status->value("status", "") == "ok" &&
                        status->value("config_hash", "") == run_config_hash(spec, keys[i]) &&
                        fs::exists(runs_dir / (id + ".csv"));
      if (done)
      {
         ++report.skipped;
      }
      else
      {
         todo.push_back(i);
      }
   }

   std::mutex log_mutex;
   auto say = [&](const std::string& msg) {
      if (log)
      {
         std::lock_guard lock(log_mutex);
         log(msg);
      }
   };

   std::atomic<std::size_t> next{0};
   std::atomic<std::size_t> completed{0};
   std::atomic<std::size_t> failed{0};
   auto worker = [&]() {
      for (;;)
      {
         const auto slot = next.fetch_add(1);
         if (slot >= todo.size())
         {
            return;
         }
         const auto& key = keys[todo[slot]];
         const auto id = key.id();
         nlohmann::json status;
         status["run_id"] = id;
         status["config_hash"] = run_config_hash(spec, key);
         try
         {
            SampleSpec sample_spec;
            sample_spec.size = key.size;
            sample_spec.entity_pct = key.entity_pct;
            sample_spec.seed = sample_seed(key);
            sample_spec.tolerance_pp = spec.tolerance_pp;
            const auto sample = draw_sample(train_corpus, sample_spec);

            const auto cfg = run_config(spec, key);
            TrainOptions options;
            options.label_set = label_set;
            options.info.corpus = train_corpus.name;
            options.info.train_size = key.size;
            options.info.entity_pct = key.entity_pct;
            const auto result = train(sample.corpus, dev, cfg, options);
            const auto metrics = evaluate(result.model, test);

            std::ostringstream csv;
            write_metrics_header(csv, result.model.label_set);
            write_metrics_row(csv, result.model.info, metrics);
            write_atomically(runs_dir / (id + ".csv"), csv.str());

            status["status"] = "ok";
            status["message"] = "";
            status["epochs"] = result.log.size();
            status["test_f1"] = format_fixed(metrics.f1, 6);
            ++completed;
            say(id + ": f1=" + format_fixed(metrics.f1, 4));
         }
         catch (const std::exception& e)
         {
            status["status"] = "failed";
            status["message"] = e.what();
            std::error_code ignored;
            fs::remove(runs_dir / (id + ".csv"), ignored);
            ++failed;
            say(id + ": FAILED: " + e.what());
         }
         try
         {
            write_atomically(runs_dir / (id + ".json"), status.dump(2) + "\n");
         }
         catch (const std::exception& e)
         {
            say(id + ": cannot record status: " + e.what());
         }
      }
   };

   jobs = std::max<std::size_t>(1, std::min(jobs, todo.size()));
   if (jobs == 1)
   {
      worker();
   }
   else
   {
      std::vector<std::jthread> pool;
      for (std::size_t j = 0; j < jobs; ++j)
      {
         pool.emplace_back(worker);
      }
   }
   report.completed = completed;
   report.failed = failed;

   std::ostringstream manifest;
   manifest << "run_id,method,train_size,entity_pct,seed,config_hash,status,message\n";
   for (const auto& key : keys)
   {
      const auto id = key.id();
      const auto status = read_status(runs_dir / (id + ".json"));
      manifest << id << ',' << to_string(key.method) << ',' << key.size << ',' << format_pct(key.entity_pct) << ','
               << key.seed << ',' << (status ? status->value("config_hash", "") : std::string()) << ','
               << (status ? status->value("status", "missing") : std::string("missing")) << ','
               << csv_field(status ? status->value("message", "") : std::string()) << '\n';
   }
   write_atomically(out / "manifest.csv", manifest.str());
   return report;
}

double t_critical(double confidence, std::size_t dof)
{
   if (dof < 1)
   {
      throw ConfigError("t distribution needs at least one degree of freedom");
   }
   const boost::math::students_t dist(static_cast<double>(dof));
   return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

std::vector<SummaryRow> summarize(const fs::path& results_dir)
{
   const auto runs_dir = results_dir / "runs";
   if (!fs::is_directory(runs_dir))
   {
      throw Error("no runs directory under '" + results_dir.string() + "'");
   }
   std::vector<fs::path> files;
   for (const auto& entry : fs::directory_iterator(runs_dir))
   {
      if (entry.is_regular_file() && entry.path().extension() == ".csv")
      {
         files.push_back(entry.path());
      }
   }
   std::sort(files.begin(), files.end());

   // Cell key: method, size, pct (unset sorts first).
   using CellKey = std::tuple<std::string, std::size_t, bool, double>;
   std::map<CellKey, std::vector<double>> cells;
   for (const auto& file : files)
   {
      std::ifstream in(file, std::ios::binary);
      std::string header_line;
      std::string row_line;
      if (!std::getline(in, header_line) || !std::getline(in, row_line))
      {
         throw ParseError("metrics file '" + file.string() + "' is incomplete", 0);
      }
      const auto header = parse_csv_line(header_line);
      const auto row = parse_csv_line(row_line);
      auto column = [&](std::string_view name) -> const std::string& {
         const auto it = std::find(header.begin(), header.end(), name);
         if (it == header.end() || static_cast<std::size_t>(it - header.begin()) >= row.size())
         {
            throw ParseError("metrics file '" + file.string() + "' lacks column " + std::string(name), 0);
         }
         return row[static_cast<std::size_t>(it - header.begin())];
      };
      try
      {
         const auto& pct = column("entity_pct");
         const CellKey key{column("method"), std::stoul(column("train_size")), !pct.empty(),
                           pct.empty() ? 0.0 : std::stod(pct)};
         cells[key].push_back(std::stod(column("f1")));
      }
      catch (const std::logic_error&)
      {
         throw ParseError("metrics file '" + file.string() + "' has a non-numeric field", 0);
      }
   }

   std::vector<SummaryRow> rows;
   for (const auto& [key, values] : cells)
   {
      SummaryRow r;
      r.method = std::get<0>(key);
      r.train_size = std::get<1>(key);
      if (std::get<2>(key))
      {
         r.entity_pct = std::get<3>(key);
      }
      r.runs = values.size();
      double sum = 0.0;
      for (double v : values)
      {
         sum += v;
      }
      const double n = static_cast<double>(values.size());
      r.mean_f1 = sum / n;
      if (values.size() < 2)
      {
         r.flag = "insufficient_runs";
      }
      else
      {
         double ss = 0.0;
         for (double v : values)
         {
            ss += (v - r.mean_f1) * (v - r.mean_f1);
         }
         r.std_f1 = std::sqrt(ss / (n - 1.0));
         r.ci95_half = t_critical(0.95, values.size() - 1) * *r.std_f1 / std::sqrt(n);
      }
      rows.push_back(std::move(r));
   }
   return rows;
}

namespace {

std::string opt_fixed(const std::optional<double>& v)
{
   return v ? format_fixed(*v, 6) : std::string();
}

} // namespace

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows)
{
   out << "method,train_size,entity_pct,runs,mean_f1,std_f1,ci95_half_width,flag\n";
   for (const auto& r : rows)
   {
      out << csv_field(r.method) << ',' << r.train_size << ',' << format_pct(r.entity_pct) << ',' << r.runs << ','
          << format_fixed(r.mean_f1, 6) << ',' << opt_fixed(r.std_f1) << ',' << opt_fixed(r.ci95_half) << ','
          << r.flag << '\n';
   }
}

void write_bands(std::ostream& out, const std::vector<SummaryRow>& rows)
{
   out << "method,train_size,entity_pct,stat,value\n";
   for (const auto& r : rows)
   {
      const auto prefix = csv_field(r.method) + ',' + std::to_string(r.train_size) + ',' + format_pct(r.entity_pct);
      const double half = r.ci95_half.value_or(0.0);
      out << prefix << ",mean," << format_fixed(r.mean_f1, 6) << '\n';
      out << prefix << ",lower," << format_fixed(r.mean_f1 - half, 6) << '\n';
      out << prefix << ",upper," << format_fixed(r.mean_f1 + half, 6) << '\n';
   }
}

} // namespace ovaner
