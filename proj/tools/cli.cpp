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

#include "cli.hpp"

#include <ovaner/corpus.hpp>
#include <ovaner/errors.hpp>
#include <ovaner/evaluation.hpp>
#include <ovaner/experiment.hpp>
#include <ovaner/model.hpp>
#include <ovaner/sampling.hpp>
#include <ovaner/synthetic.hpp>
#include <ovaner/training.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace ovaner::cli {

namespace fs = std::filesystem;

namespace {

/// Info-level log sink: stderr unless quiet, plus an optional file.
/// Lines carry a timestamp unless quiet.
class Logger
{
public:
   Logger(std::ostream& err, bool quiet, const std::string& log_file) : m_err(err), m_quiet(quiet)
   {
      if (!log_file.empty())
      {
         m_file = std::make_unique<std::ofstream>(log_file, std::ios::binary | std::ios::app);
         if (!*m_file)
         {
            throw Error("cannot open log file '" + log_file + "'");
         }
      }
   }

   void info(const std::string& msg)
   {
      std::string line = msg;
      if (!m_quiet)
      {
         const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
         std::tm tm{};
         gmtime_r(&now, &tm);
         std::ostringstream ts;
         ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ';
         line = ts.str() + msg;
         m_err << line << '\n';
      }
      if (m_file)
      {
         *m_file << line << '\n';
      }
   }

private:
   std::ostream& m_err;
   bool m_quiet;
   std::unique_ptr<std::ofstream> m_file;
};

nlohmann::json read_json(const fs::path& path)
{
   std::ifstream in(path, std::ios::binary);
   if (!in)
   {
      throw Error("cannot open '" + path.string() + "'");
   }
   try
   {
      return nlohmann::json::parse(in);
   }
   catch (const nlohmann::json::parse_error& e)
   {
      throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
   }
}

std::ofstream open_out(const fs::path& path)
{
   if (path.has_parent_path())
   {
      fs::create_directories(path.parent_path());
   }
   std::ofstream out(path, std::ios::binary);
   if (!out)
   {
      throw Error("cannot write '" + path.string() + "'");
   }
   return out;
}

fs::path model_file(const fs::path& model)
{
   return fs::is_directory(model) ? model / "model.nermodel" : model;
}

struct Globals
{
   std::optional<std::uint64_t> seed;
   bool quiet = false;
   std::string log_file;
};

struct StatsArgs
{
   std::vector<std::string> data;
};

struct SampleArgs
{
   std::string data;
   std::size_t size = 0;
   std::optional<double> entity_pct;
   double tolerance = 0.5;
   std::string out;
};

struct TrainArgs
{
   std::string config;
   std::string train;
   std::string dev;
   std::string out;
};

struct EvalArgs
{
   std::string model;
   std::string data;
   std::string out;
};

struct ExperimentArgs
{
   std::string config;
   std::string out;
   std::size_t jobs = 1;
};

struct ReportArgs
{
   std::string results;
   std::string out;
   std::string bands;
};

struct SynthArgs
{
   std::size_t sentences = 1000;
   double begin_pct = 1.7;
   double inside_pct = 2.3;
   std::vector<std::string> types{"Species"};
   std::uint64_t lexicon_seed = 7;
   std::string out;
};

void run_stats(const StatsArgs& a, std::ostream& out)
{
   out << "name,sentences,tokens,K,pct_B,pct_I,pct_O\n";
   for (const auto& path : a.data)
   {
      const auto s = corpus_stats(load_conll(path));
      out << csv_field(s.name) << ',' << s.sentences << ',' << s.tokens << ',' << s.labels << ','
          << format_fixed(s.pct_begin(), 1) << ',' << format_fixed(s.pct_inside(), 1) << ','
          << format_fixed(s.pct_outside(), 1) << '\n';
   }
}

void run_sample(const SampleArgs& a, const Globals& g, Logger& log)
{
   const auto corpus = load_conll(a.data);
   SampleSpec spec;
   spec.size = a.size;
   spec.entity_pct = a.entity_pct;
   spec.seed = g.seed.value_or(0);
   spec.tolerance_pp = a.tolerance;
   const auto sample = draw_sample(corpus, spec);
   auto out = open_out(a.out);
   write_conll(out, sample.corpus);
   log.info("sampled " + std::to_string(sample.corpus.sentences.size()) + " sentences, " +
            format_fixed(entity_token_pct(sample.corpus), 2) + "% entity tokens -> " + a.out);
}

void run_train(const TrainArgs& a, const Globals& g, Logger& log)
{
   auto cfg = train_config_from_json(read_json(a.config));
   if (g.seed)
   {
      cfg.seed = *g.seed;
   }
   const auto train_corpus = load_conll(a.train);
   const auto dev = load_conll(a.dev);

   TrainOptions options;
   options.on_epoch = [&](const EpochLog& e) {
      log.info("epoch " + std::to_string(e.epoch) + " loss=" + format_fixed(e.loss, 6) +
               " dev_f1=" + format_fixed(e.dev_f1, 4) + (e.improved ? " *" : ""));
   };
   const auto result = train(train_corpus, dev, cfg, options);

   const fs::path out_dir = a.out;
   fs::create_directories(out_dir);
   save_model(out_dir / "model.nermodel", result.model);
   {
      auto out = open_out(out_dir / "train_log.csv");
      write_train_log(out, result.log);
   }
   {
      auto out = open_out(out_dir / "config.json");
      out << to_json(cfg).dump(2) << '\n';
   }
   log.info("saved model to " + (out_dir / "model.nermodel").string());
}

void run_eval(const EvalArgs& a, Logger& log)
{
   const auto model = load_model(model_file(a.model));
   const auto test = load_conll(a.data);
   const auto metrics = evaluate(model, test);
   auto out = open_out(a.out);
   write_metrics_header(out, model.label_set);
   write_metrics_row(out, model.info, metrics);
   log.info("P=" + format_fixed(metrics.precision, 4) + " R=" + format_fixed(metrics.recall, 4) +
            " F1=" + format_fixed(metrics.f1, 4));
}

void run_probs(const EvalArgs& a, Logger& log)
{
   const auto model = load_model(model_file(a.model));
   const auto data = load_conll(a.data);
   auto out = open_out(a.out);
   export_probs(out, model, data);
   log.info("wrote per-token scores for " + std::to_string(data.token_count()) + " tokens -> " + a.out);
}

void run_experiment(const ExperimentArgs& a, Logger& log)
{
   const fs::path config = a.config;
   const auto spec = experiment_spec_from_json(read_json(config), config.parent_path());
   const auto report = run_grid(spec, a.out, a.jobs, [&](const std::string& msg) { log.info(msg); });
   log.info("runs: " + std::to_string(report.total) + " total, " + std::to_string(report.completed) +
            " completed, " + std::to_string(report.skipped) + " skipped, " + std::to_string(report.failed) +
            " failed");
}

void run_report(const ReportArgs& a, Logger& log)
{
   const auto rows = summarize(a.results);
   {
      auto out = open_out(a.out);
      write_summary(out, rows);
   }
   fs::path bands = a.bands;
   if (bands.empty())
   {
      const fs::path out_path = a.out;
      bands = out_path.parent_path() / (out_path.stem().string() + "_bands.csv");
   }
   {
      auto out = open_out(bands);
      write_bands(out, rows);
   }
   log.info("summarised " + std::to_string(rows.size()) + " cells -> " + a.out);
}

void run_synth(const SynthArgs& a, const Globals& g, Logger& log)
{
   SyntheticSpec spec;
   spec.sentences = a.sentences;
   spec.begin_pct = a.begin_pct;
   spec.inside_pct = a.inside_pct;
   spec.entity_types = a.types;
   spec.lexicon_seed = a.lexicon_seed;
   spec.seed = g.seed.value_or(0);
   const fs::path out_path = a.out;
   const auto corpus = make_synthetic_corpus(spec, out_path.stem().string());
   auto out = open_out(out_path);
   write_conll(out, corpus);
   log.info("generated " + std::to_string(corpus.sentences.size()) + " sentences -> " + a.out);
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
   CLI::App app{"One-vs-all AUC-maximising NER toolkit", "ovaner"};
   app.require_subcommand(1);

   Globals g;
   app.add_option("--seed", g.seed, "Seed for every random choice");
   app.add_flag("--quiet", g.quiet, "No progress output, no timestamps");
   app.add_option("--log-file", g.log_file, "Append log lines to this file");

   StatsArgs stats;
   auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics (sentences, tokens, K, %B/%I/%O)");
   stats_cmd->add_option("--data", stats.data, "CoNLL file(s)")->required()->check(CLI::ExistingFile);

   SampleArgs sample;
   auto* sample_cmd = app.add_subcommand("sample", "Draw a low-resource training subset");
   sample_cmd->add_option("--data", sample.data, "Source CoNLL file")->required()->check(CLI::ExistingFile);
   sample_cmd->add_option("--size", sample.size, "Number of sentences")->required();
   sample_cmd->add_option("--entity-pct", sample.entity_pct, "Target percentage of entity tokens");
   sample_cmd->add_option("--tolerance", sample.tolerance, "Allowed deviation in percentage points");
   sample_cmd->add_option("--out", sample.out, "Output CoNLL file")->required();

   TrainArgs train_args;
   auto* train_cmd = app.add_subcommand("train", "Train a tagger");
   train_cmd->add_option("--config", train_args.config, "Flat JSON training config")->required();
   train_cmd->add_option("--train", train_args.train, "Training CoNLL file")->required();
   train_cmd->add_option("--dev", train_args.dev, "Dev CoNLL file")->required();
   train_cmd->add_option("--out", train_args.out, "Output directory")->required();

   EvalArgs eval;
   auto* eval_cmd = app.add_subcommand("eval", "Entity P/R/F1 and per-head AUC");
   eval_cmd->add_option("--model", eval.model, "Model directory or .nermodel file")->required();
   eval_cmd->add_option("--test", eval.data, "Test CoNLL file")->required();
   eval_cmd->add_option("--out", eval.out, "metrics.csv")->required();

   EvalArgs probs;
   auto* probs_cmd = app.add_subcommand("probs", "Per-token per-label scores as CSV");
   probs_cmd->add_option("--model", probs.model, "Model directory or .nermodel file")->required();
   probs_cmd->add_option("--data", probs.data, "CoNLL file")->required();
   probs_cmd->add_option("--out", probs.out, "probs.csv")->required();

   ExperimentArgs experiment;
   auto* experiment_cmd = app.add_subcommand("experiment", "Run a sizes x methods x seeds grid");
   experiment_cmd->add_option("--config", experiment.config, "Experiment JSON")->required();
   experiment_cmd->add_option("--out", experiment.out, "Results directory")->required();
   experiment_cmd->add_option("--jobs", experiment.jobs, "Concurrent runs")->check(CLI::PositiveNumber);

   ReportArgs report;
   auto* report_cmd = app.add_subcommand("report", "Summarise a results directory");
   report_cmd->add_option("--results", report.results, "Results directory")->required();
   report_cmd->add_option("--out", report.out, "summary.csv")->required();
   report_cmd->add_option("--bands", report.bands, "Long-format band table (default <out>_bands.csv)");

   SynthArgs synth;
   auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic BIO corpus");
   synth_cmd->add_option("--sentences", synth.sentences, "Number of sentences");
   synth_cmd->add_option("--b-pct", synth.begin_pct, "Expected % of B- tokens");
   synth_cmd->add_option("--i-pct", synth.inside_pct, "Expected % of I- tokens");
   synth_cmd->add_option("--types", synth.types, "Entity types");
   synth_cmd->add_option("--lexicon-seed", synth.lexicon_seed, "Seed of the shared word lists");
   synth_cmd->add_option("--out", synth.out, "Output CoNLL file")->required();

   for (auto* sub : app.get_subcommands({}))
   {
      sub->fallthrough();
   }

   std::vector<const char*> argv{"ovaner"};
   for (const auto& a : args)
   {
      argv.push_back(a.c_str());
   }

   try
   {
      app.parse(static_cast<int>(argv.size()), argv.data());
   }
   catch (const CLI::CallForHelp&)
   {
      out << app.help();
      return kExitOk;
   }
   catch (const CLI::CallForAllHelp&)
   {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
   }
   catch (const CLI::ParseError& e)
   {
      err << "error: " << e.what() << '\n';
      const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
      err << sub->help();
      return kExitUsage;
   }

   try
   {
      Logger log(err, g.quiet, g.log_file);
      if (stats_cmd->parsed())
      {
         run_stats(stats, out);
      }
      else if (sample_cmd->parsed())
      {
         run_sample(sample, g, log);
      }
      else if (train_cmd->parsed())
      {
         run_train(train_args, g, log);
      }
      else if (eval_cmd->parsed())
      {
         run_eval(eval, log);
      }
      else if (probs_cmd->parsed())
      {
         run_probs(probs, log);
      }
      else if (experiment_cmd->parsed())
      {
         run_experiment(experiment, log);
      }
      else if (report_cmd->parsed())
      {
         run_report(report, log);
      }
      else if (synth_cmd->parsed())
      {
         run_synth(synth, g, log);
      }
   }
   catch (const std::exception& e)
   {
      err << "error: " << e.what() << '\n';
      return kExitRuntime;
   }
   return kExitOk;
}

} // namespace ovaner::cli
