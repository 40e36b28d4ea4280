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

#include "ovaner/model.hpp"
#include "ovaner/training.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ovaner {

struct ExperimentSpec
{
   std::filesystem::path train;
   std::filesystem::path dev;
   std::filesystem::path test;
   std::vector<Method> methods{Method::Ce, Method::OvaBce, Method::OvaAuc, Method::OvaAucMaml};
   std::vector<std::size_t> sizes{20, 50, 100, 200, 300, 400, 500};
   std::vector<double> entity_pcts; ///< empty: plain random partitions
   std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
   double tolerance_pp = 0.5;
   nlohmann::json train_overrides = nlohmann::json::object();

   void validate() const;
};

/// Keys: train, dev, test (relative paths resolve against `base_dir`),
/// methods, sizes, entity_pcts, seeds, tolerance_pp, train_config.
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

struct RunKey
{
   Method method = Method::OvaAuc;
   std::size_t size = 0;
   std::optional<double> entity_pct;
   std::uint64_t seed = 0;

   /// File-name-safe identifier, e.g. "ova-auc_n50_pall_s3".
   std::string id() const;
};

/// Every (method, size, entity_pct, seed) cell in grid order.
std::vector<RunKey> expand_grid(const ExperimentSpec& spec);

/// Seed for the training subset of a run; independent of the method so that
/// all methods in a cell see the same sentences.
std::uint64_t sample_seed(const RunKey& key);

/// Full training configuration of one run.
TrainConfig run_config(const ExperimentSpec& spec, const RunKey& key);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Hash of the canonical JSON of everything that determines a run.
std::string run_config_hash(const ExperimentSpec& spec, const RunKey& key);

struct GridReport
{
   std::size_t total = 0;
   std::size_t completed = 0;
   std::size_t skipped = 0;
   std::size_t failed = 0;
};

using GridLogger = std::function<void(const std::string&)>;

/// Runs every missing cell: sample, train, evaluate on the full test set.
/// Layout under `out`: runs/<id>.csv (metrics), runs/<id>.json (status),
/// manifest.csv (merged, grid order). Failed runs are recorded and do not
/// stop the grid; finished runs with a matching config hash are skipped.
GridReport run_grid(const ExperimentSpec& spec, const std::filesystem::path& out, std::size_t jobs = 1,
                    const GridLogger& log = {});

struct SummaryRow
{
   std::string method;
   std::size_t train_size = 0;
   std::optional<double> entity_pct;
   std::size_t runs = 0;
   double mean_f1 = 0.0;
   std::optional<double> std_f1;        ///< sample standard deviation
   std::optional<double> ci95_half;     ///< Student-t 95% half width
   std::string flag;                    ///< "insufficient_runs" when runs < 2
};

/// Two-sided Student-t critical value t_{(1+confidence)/2, dof}.
double t_critical(double confidence, std::size_t dof);

/// Aggregates the per-run metrics under `results_dir`/runs.
std::vector<SummaryRow> summarize(const std::filesystem::path& results_dir);

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);
/// Long format: method,train_size,entity_pct,stat,value with stat in
/// {mean, lower, upper}; suited to band plots.
void write_bands(std::ostream& out, const std::vector<SummaryRow>& rows);

} // namespace ovaner
