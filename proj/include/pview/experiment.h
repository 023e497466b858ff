//
// Copyright 2026 The pview Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PVIEW_EXPERIMENT_H_
#define PVIEW_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "pview/count_tensor.h"
#include "pview/params.h"

namespace pview {

// Where the experiment's data comes from: a built-in generator or a CSV
// file with a schema.
struct DatasetConfig {
  std::string generator;  // "clustered", "uniform", "concentrated" or empty
  std::vector<int64_t> domains;
  int64_t n = 0;
  int clusters = 5;
  double spread = 0.05;
  uint64_t seed = 0;
  std::string csv_path;
  std::string schema_path;
  bool clamp = false;
};

struct WorkloadConfig {
  std::string kind;  // "random_range", "marginal", "kway_range", "prefix"
  int k = 1;
  uint64_t count = 0;                // random_range
  std::optional<uint64_t> limit;     // the enumerative kinds
};

struct ExperimentConfig {
  DatasetConfig dataset;
  std::vector<std::string> mechanisms;  // "bisection", "identity"
  std::vector<WorkloadConfig> workloads;
  std::vector<double> epsilons;
  std::vector<uint64_t> seeds;
  Hyperparams hyperparams;  // epsilon_b is replaced by each epsilon
  int threads = 1;
  double identity_dense_limit = 1e7;
  std::string output;  // JSON lines report path; optional

  // Unknown keys anywhere in the document are errors.
  static absl::StatusOr<ExperimentConfig> FromJson(const nlohmann::json& j);
  static absl::StatusOr<ExperimentConfig> FromFile(const std::string& path);
};

struct ReportRow {
  std::string mechanism;
  std::string workload;
  double epsilon = 0.0;
  std::vector<uint64_t> seeds;
  std::vector<double> rmse;  // one per seed
  double rmse_mean = 0.0;
  double rmse_std = 0.0;  // sample standard deviation; 0 for one seed
  double blocks_mean = 0.0;
  double bytes_mean = 0.0;
  double build_seconds_mean = 0.0;
  // rmse_mean over the bisection row's rmse_mean for the same workload and
  // epsilon; empty without a bisection row.
  std::optional<double> relative_rmse;
  // Set when the mechanism refused to run (e.g. identity on a huge domain).
  std::string error;

  nlohmann::json ToJson() const;
};

struct ExperimentReport {
  nlohmann::json meta;
  std::vector<ReportRow> rows;

  std::string ToJsonLines() const;
  std::string RenderTable() const;
};

absl::StatusOr<CountTensor> LoadDataset(const DatasetConfig& config);

// For every epsilon and seed: one workload draw per workload config (shared
// by all mechanisms, so comparisons are seed-paired), one view per
// mechanism, then RMSE of each workload. The raw data is touched only to
// build views and to compute exact answers.
absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config);

// Sample mean and standard deviation (n - 1 denominator).
double Mean(const std::vector<double>& v);
double SampleStddev(const std::vector<double>& v);

}  // namespace pview

#endif  // PVIEW_EXPERIMENT_H_
