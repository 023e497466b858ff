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

#include "pview/experiment.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "pview/bisection.h"
#include "pview/evaluation.h"
#include "pview/random_stream.h"
#include "pview/serialization.h"
#include "pview/status_macros.h"
#include "pview/workload.h"

namespace pview {
namespace {

using nlohmann::json;

absl::Status OnlyKeys(const json& j, const std::set<std::string>& allowed,
                      const std::string& where) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError(absl::StrCat(where, " must be an object"));
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown key '", key, "' in ", where));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<DatasetConfig> ParseDataset(const json& j) {
  RETURN_IF_ERROR(OnlyKeys(j,
                           {"generator", "domains", "n", "clusters", "spread",
                            "seed", "csv", "schema", "clamp"},
                           "dataset"));
  DatasetConfig d;
  d.generator = j.value("generator", "");
  d.domains = j.value("domains", std::vector<int64_t>{});
  d.n = j.value("n", int64_t{0});
  d.clusters = j.value("clusters", 5);
  d.spread = j.value("spread", 0.05);
  d.seed = j.value("seed", uint64_t{0});
  d.csv_path = j.value("csv", "");
  d.schema_path = j.value("schema", "");
  d.clamp = j.value("clamp", false);
  if (d.generator.empty() == d.csv_path.empty()) {
    return absl::InvalidArgumentError(
        "dataset needs exactly one of 'generator' or 'csv'");
  }
  if (!d.csv_path.empty() && d.schema_path.empty()) {
    return absl::InvalidArgumentError("csv dataset needs 'schema'");
  }
  if (!d.generator.empty() && d.generator != "clustered" &&
      d.generator != "uniform" && d.generator != "concentrated") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown generator '", d.generator, "'"));
  }
  return d;
}

absl::StatusOr<WorkloadConfig> ParseWorkload(const json& j) {
  RETURN_IF_ERROR(OnlyKeys(j, {"kind", "k", "count", "limit"}, "workload"));
  WorkloadConfig w;
  w.kind = j.value("kind", "");
  w.k = j.value("k", 1);
  w.count = j.value("count", uint64_t{0});
  if (j.contains("limit")) w.limit = j.at("limit").get<uint64_t>();
  static const std::set<std::string> kinds = {"random_range", "marginal",
                                              "kway_range", "prefix"};
  if (!kinds.count(w.kind)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown workload kind '", w.kind, "'"));
  }
  return w;
}

absl::StatusOr<Workload> MakeWorkload(const WorkloadConfig& w,
                                      const Schema& schema,
                                      RandomStream& rng) {
  if (w.kind == "random_range") return GenRandomRange(schema, w.k, w.count, rng);
  if (w.kind == "marginal") return GenKwayMarginal(schema, w.k, w.limit, &rng);
  if (w.kind == "prefix") return GenPrefix(schema, w.k, w.limit, &rng);
  return GenKwayRange(schema, w.k, w.limit.value_or(0), rng);
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

absl::StatusOr<ExperimentConfig> ExperimentConfig::FromJson(const json& j) {
  try {
    RETURN_IF_ERROR(OnlyKeys(j,
                             {"dataset", "mechanisms", "workloads", "epsilons",
                              "seeds", "hyperparams", "threads",
                              "identity_dense_limit", "output"},
                             "config"));
    ExperimentConfig c;
    if (!j.contains("dataset")) {
      return absl::InvalidArgumentError("config needs 'dataset'");
    }
    ASSIGN_OR_RETURN(c.dataset, ParseDataset(j.at("dataset")));
    c.mechanisms =
        j.value("mechanisms", std::vector<std::string>{"bisection"});
    for (const auto& m : c.mechanisms) {
      if (m != "bisection" && m != "identity") {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown mechanism '", m, "'"));
      }
    }
    if (!j.contains("workloads") || !j.at("workloads").is_array() ||
        j.at("workloads").empty()) {
      return absl::InvalidArgumentError("config needs a nonempty 'workloads'");
    }
    for (const auto& w : j.at("workloads")) {
      ASSIGN_OR_RETURN(WorkloadConfig parsed, ParseWorkload(w));
      c.workloads.push_back(parsed);
    }
    c.epsilons = j.value("epsilons", std::vector<double>{1.0});
    c.seeds = j.value("seeds", std::vector<uint64_t>{0});
    if (c.epsilons.empty() || c.seeds.empty() || c.mechanisms.empty()) {
      return absl::InvalidArgumentError(
          "'epsilons', 'seeds' and 'mechanisms' must be nonempty");
    }
    if (j.contains("hyperparams")) {
      const json& h = j.at("hyperparams");
      RETURN_IF_ERROR(
          OnlyKeys(h, {"ratio", "alpha", "beta", "gamma"}, "hyperparams"));
      c.hyperparams.ratio = h.value("ratio", c.hyperparams.ratio);
      c.hyperparams.alpha = h.value("alpha", c.hyperparams.alpha);
      c.hyperparams.beta = h.value("beta", c.hyperparams.beta);
      c.hyperparams.gamma = h.value("gamma", c.hyperparams.gamma);
    }
    c.threads = j.value("threads", 1);
    c.identity_dense_limit = j.value("identity_dense_limit", 1e7);
    c.output = j.value("output", "");
    return c;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad config: ", e.what()));
  }
}

absl::StatusOr<ExperimentConfig> ExperimentConfig::FromFile(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, " is not valid JSON"));
  }
  return FromJson(j);
}

absl::StatusOr<CountTensor> LoadDataset(const DatasetConfig& d) {
  if (!d.csv_path.empty()) {
    ASSIGN_OR_RETURN(Schema schema, Schema::FromFile(d.schema_path));
    ASSIGN_OR_RETURN(Table table, ReadCsvFile(d.csv_path));
    return LoadTable(table, std::move(schema), {.clamp = d.clamp});
  }
  RandomStream rng(d.seed);
  if (d.generator == "uniform") return UniformData(d.domains, d.n, rng);
  if (d.generator == "concentrated") {
    return ConcentratedData(d.domains, d.n, rng, d.spread);
  }
  return ClusteredData(d.domains, d.n, d.clusters, d.spread, rng);
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double SampleStddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = Mean(v);
  double sum = 0.0;
  for (double x : v) sum += (x - mean) * (x - mean);
  return std::sqrt(sum / static_cast<double>(v.size() - 1));
}

json ReportRow::ToJson() const {
  json j = {{"type", "row"},
            {"mechanism", mechanism},
            {"workload", workload},
            {"epsilon", epsilon},
            {"seeds", seeds},
            {"rmse", rmse},
            {"rmse_mean", rmse_mean},
            {"rmse_std", rmse_std},
            {"blocks_mean", blocks_mean},
            {"bytes_mean", bytes_mean},
            {"build_seconds_mean", build_seconds_mean}};
  j["relative_rmse"] = relative_rmse ? json(*relative_rmse) : json(nullptr);
  if (!error.empty()) j["error"] = error;
  return j;
}

std::string ExperimentReport::ToJsonLines() const {
  std::string out = meta.dump() + "\n";
  for (const auto& row : rows) absl::StrAppend(&out, row.ToJson().dump(), "\n");
  return out;
}

std::string ExperimentReport::RenderTable() const {
  std::string out = absl::StrFormat("%-10s %-14s %8s %12s %12s %10s %12s %10s %10s\n",
                                    "mechanism", "workload", "epsilon",
                                    "rmse_mean", "rmse_std", "relative",
                                    "blocks", "bytes", "build_s");
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      absl::StrAppend(&out, absl::StrFormat("%-10s %-14s %8g  skipped: %s\n",
                                            r.mechanism, r.workload, r.epsilon,
                                            r.error));
      continue;
    }
    const std::string relative =
        r.relative_rmse ? absl::StrFormat("%.4g", *r.relative_rmse) : "-";
    absl::StrAppend(
        &out, absl::StrFormat("%-10s %-14s %8g %12.6g %12.6g %10s %12.6g %10.6g %10.4f\n",
                              r.mechanism, r.workload, r.epsilon, r.rmse_mean,
                              r.rmse_std, relative, r.blocks_mean, r.bytes_mean,
                              r.build_seconds_mean));
  }
  return out;
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config) {
  ASSIGN_OR_RETURN(CountTensor tensor, LoadDataset(config.dataset));
  const Schema& schema = tensor.schema();

  ExperimentReport report;
  report.meta = {{"type", "meta"},
                 {"engine_version", kEngineVersion},
                 {"records", tensor.total_count()},
                 {"nonzero_cells", tensor.cells().size()},
                 {"dims", schema.dims()},
                 {"domain_log2", schema.TotalDomainLog2()},
                 {"random_range_attributes", "uniform subset per query"}};

  // Keyed by (mechanism, workload index, epsilon index).
  std::map<std::tuple<size_t, size_t, size_t>, ReportRow> rows;
  std::vector<std::string> workload_names(config.workloads.size());

  for (size_t e = 0; e < config.epsilons.size(); ++e) {
    Hyperparams hp = config.hyperparams;
    hp.epsilon_b = config.epsilons[e];
    for (uint64_t seed : config.seeds) {
      const RandomStream root(seed);
      std::vector<Workload> workloads;
      std::vector<std::vector<double>> truths;
      for (size_t w = 0; w < config.workloads.size(); ++w) {
        RandomStream wrng = root.Child(2).Child(w);
        ASSIGN_OR_RETURN(Workload wl,
                         MakeWorkload(config.workloads[w], schema, wrng));
        workload_names[w] = wl.name;
        ASSIGN_OR_RETURN(auto truth, ExactAnswers(tensor, wl, config.threads));
        workloads.push_back(std::move(wl));
        truths.push_back(std::move(truth));
      }
      for (size_t m = 0; m < config.mechanisms.size(); ++m) {
        const std::string& mechanism = config.mechanisms[m];
        const auto start = std::chrono::steady_clock::now();
        absl::StatusOr<PView> view;
        if (mechanism == "bisection") {
          BuildOptions options;
    options.seed = seed;
          options.engine.threads = config.threads;
          auto built = BuildView(tensor, hp, options);
          if (built.ok()) {
            view = std::move(built->view);
          } else {
            view = built.status();
          }
        } else {
          RandomStream irng = root.Child(3);
          view = IdentityView(tensor, hp.epsilon_b, irng,
                              {.dense_limit = config.identity_dense_limit});
        }
        const double build_seconds = Seconds(start);
        for (size_t w = 0; w < workloads.size(); ++w) {
          ReportRow& row = rows[{m, w, e}];
          row.mechanism = mechanism;
          row.workload = workload_names[w];
          row.epsilon = hp.epsilon_b;
          if (!view.ok()) {
            if (view.status().code() != absl::StatusCode::kResourceExhausted) {
              return view.status();
            }
            row.error = std::string(view.status().message());
            continue;
          }
          ASSIGN_OR_RETURN(auto estimate,
                           ViewAnswers(*view, workloads[w], config.threads));
          ASSIGN_OR_RETURN(double rmse, RmseOf(truths[w], estimate));
          row.seeds.push_back(seed);
          row.rmse.push_back(rmse);
          row.blocks_mean += static_cast<double>(view->blocks.size());
          row.bytes_mean += static_cast<double>(SerializeView(*view).size());
          row.build_seconds_mean += build_seconds;
        }
      }
    }
  }

  for (auto& [key, row] : rows) {
    if (!row.error.empty()) continue;
    const double n = static_cast<double>(row.rmse.size());
    row.rmse_mean = Mean(row.rmse);
    row.rmse_std = SampleStddev(row.rmse);
    row.blocks_mean /= n;
    row.bytes_mean /= n;
    row.build_seconds_mean /= n;
  }
  for (auto& [key, row] : rows) {
    const auto& [m, w, e] = key;
    for (size_t b = 0; b < config.mechanisms.size(); ++b) {
      if (config.mechanisms[b] != "bisection") continue;
      const ReportRow& ref = rows.at({b, w, e});
      if (row.error.empty() && ref.error.empty() && ref.rmse_mean > 0.0) {
        row.relative_rmse = row.rmse_mean / ref.rmse_mean;
      }
    }
  }
  for (auto& [key, row] : rows) report.rows.push_back(std::move(row));

  if (!config.output.empty()) {
    std::ofstream out(config.output, std::ios::binary | std::ios::trunc);
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("cannot write report to ", config.output));
    }
    out << report.ToJsonLines();
  }
  return report;
}

}  // namespace pview
