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

#include "pview/cli.h"

#include <chrono>
#include <csignal>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "pview/bisection.h"
#include "pview/count_tensor.h"
#include "pview/error_bounds.h"
#include "pview/evaluation.h"
#include "pview/experiment.h"
#include "pview/query.h"
#include "pview/range_expr.h"
#include "pview/serialization.h"
#include "pview/service.h"

namespace pview {
namespace {

struct BuildFlags {
  std::string input;
  std::string schema;
  std::string out;
  Hyperparams hp;
  std::optional<uint64_t> seed;
  std::string mechanism = "bisection";
  int threads = 1;
  bool clamp = false;
  bool timestamp = false;
};

struct QueryFlags {
  std::string view;
  std::string range;
  double mu = 0.05;
  double xi = 1.0;
  bool json = false;
};

struct EvalFlags {
  std::string config;
  std::string out;
  int threads = 0;
};

struct ServeFlags {
  std::string view;
  ServerOptions server;
};

struct InspectFlags {
  std::string view;
  std::string export_json;
};

int DataExit(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  switch (status.code()) {
    case absl::StatusCode::kInternal:
    case absl::StatusCode::kUnknown:
      return kExitInternal;
    default:
      return kExitData;
  }
}

int UsageExit(const std::string& message, std::ostream& err) {
  err << "error: " << message << "\n";
  return kExitUsage;
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string Confidence(double mu) {
  return absl::StrFormat("%.6g%% confidence", 100.0 * (1.0 - mu));
}

int Build(const BuildFlags& f, std::ostream& out, std::ostream& err) {
  if (auto s = f.hp.Validate(); !s.ok()) return UsageExit(std::string(s.message()), err);
  if (f.threads < 1) return UsageExit("--threads must be at least 1", err);

  uint64_t seed = 0;
  if (f.seed.has_value()) {
    seed = *f.seed;
    out << "seed: " << seed << "\n";
  } else {
    std::random_device device;
    seed = (static_cast<uint64_t>(device()) << 32) ^ device();
    out << "seed: " << seed << " (generated; pass --seed " << seed
        << " to replay)\n";
  }

  auto schema = Schema::FromFile(f.schema);
  if (!schema.ok()) return DataExit(schema.status(), err);
  auto table = ReadCsvFile(f.input);
  if (!table.ok()) return DataExit(table.status(), err);
  auto tensor = LoadTable(*table, *schema, {.clamp = f.clamp});
  if (!tensor.ok()) return DataExit(tensor.status(), err);

  const auto start = std::chrono::steady_clock::now();
  PView view;
  if (f.mechanism == "identity") {
    RandomStream rng(seed);
    auto built = IdentityView(*tensor, f.hp.epsilon_b, rng);
    if (!built.ok()) return DataExit(built.status(), err);
    view = std::move(*built);
    view.meta.seed = seed;
  } else {
    BuildOptions options;
    options.seed = seed;
    options.engine.threads = f.threads;
    auto built = BuildView(*tensor, f.hp, options);
    if (!built.ok()) return DataExit(built.status(), err);
    view = std::move(built->view);
  }
  if (f.timestamp) view.meta.timestamp = UtcNow();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (auto s = WriteViewFile(f.out, view); !s.ok()) return DataExit(s, err);

  const MechanismParams& p = view.params;
  out << "mechanism: " << view.meta.mechanism << "\n";
  out << "records: " << tensor->total_count() << "\n";
  out << "blocks (m): " << view.blocks.size() << "\n";
  out << absl::StrFormat("build time: %.3f s\n", seconds);
  if (view.meta.mechanism == "identity") {
    out << absl::StrFormat("budget: epsilon_b=%g, all spent on cell noise\n",
                           p.epsilon_b);
  } else {
    const BudgetBreakdown b = BudgetOf(p);
    out << absl::StrFormat(
        "budget: epsilon_b=%g = epsilon_r=%g (converge %g, cut %g) + "
        "epsilon_p=%g\n",
        b.epsilon_b, b.epsilon_r, b.converge, b.cut, b.epsilon_p);
    out << absl::StrFormat(
        "params: theta=%g lambda=%g delta=%g kappa=%g epsilon_cut=%g\n",
        p.theta, p.lambda, p.delta, p.kappa, p.epsilon_cut);
  }
  out << "wrote " << f.out << " (" << std::filesystem::file_size(f.out)
      << " bytes)\n";
  return kExitOk;
}

int Query(const QueryFlags& f, std::ostream& out, std::ostream& err) {
  if (!(f.mu > 0.0 && f.mu < 1.0)) return UsageExit("--mu must lie in (0, 1)", err);
  if (!(f.xi > 0.0)) return UsageExit("--xi must be positive", err);
  auto view = ReadViewFile(f.view);
  if (!view.ok()) return DataExit(view.status(), err);
  auto query = ParseRangeExpression(view->schema, f.range);
  if (!query.ok()) return UsageExit(std::string(query.status().message()), err);
  auto answer = Answer(*view, *query);
  if (!answer.ok()) return UsageExit(std::string(answer.status().message()), err);
  const double xi[] = {f.xi};
  auto bound = ErrorBounds(*view, *query, f.mu, xi);
  if (!bound.ok()) return DataExit(bound.status(), err);
  const size_t touched = BlocksTouched(*view, *query);
  if (f.json) {
    out << nlohmann::json({{"answer", *answer},
                           {"theta_min", bound->theta_min},
                           {"theta_max", bound->theta_max},
                           {"mu", f.mu},
                           {"blocks_touched", touched},
                           {"range", FormatRangeExpression(view->schema, *query)}})
               .dump()
        << "\n";
    return kExitOk;
  }
  out << "range: " << FormatRangeExpression(view->schema, *query) << "\n";
  out << absl::StrFormat("answer: %.6f\n", *answer);
  out << absl::StrFormat("%s (mu=%g): theta_min=%.6f theta_max=%.6f\n",
                         Confidence(f.mu), f.mu, bound->theta_min,
                         bound->theta_max);
  out << "blocks touched: " << touched << " of " << view->blocks.size() << "\n";
  return kExitOk;
}

int Eval(const EvalFlags& f, std::ostream& out, std::ostream& err) {
  auto config = ExperimentConfig::FromFile(f.config);
  if (!config.ok()) return UsageExit(std::string(config.status().message()), err);
  if (!f.out.empty()) config->output = f.out;
  if (f.threads > 0) config->threads = f.threads;
  auto report = RunExperiment(*config);
  if (!report.ok()) {
    if (report.status().code() == absl::StatusCode::kInvalidArgument) {
      return UsageExit(std::string(report.status().message()), err);
    }
    return DataExit(report.status(), err);
  }
  out << report->RenderTable();
  if (!config->output.empty()) out << "report: " << config->output << "\n";
  return kExitOk;
}

ViewServer* active_server = nullptr;

void StopActiveServer(int) {
  if (active_server != nullptr) active_server->Stop();
}

int Serve(const ServeFlags& f, std::ostream& out, std::ostream& err) {
  auto view = ReadViewFile(f.view);
  if (!view.ok()) return DataExit(view.status(), err);
  auto service = std::make_shared<const ViewService>(
      std::make_shared<const PView>(std::move(*view)));
  ViewServer server(service, f.server);
  auto port = server.Bind();
  if (!port.ok()) return DataExit(port.status(), err);
  out << "serving " << f.view << " on http://" << f.server.host << ":" << *port
      << std::endl;
  active_server = &server;
  std::signal(SIGINT, StopActiveServer);
  std::signal(SIGTERM, StopActiveServer);
  absl::Status s = server.Listen();
  active_server = nullptr;
  if (!s.ok()) return DataExit(s, err);
  return kExitOk;
}

int Inspect(const InspectFlags& f, std::ostream& out, std::ostream& err) {
  auto view = ReadViewFile(f.view);
  if (!view.ok()) return DataExit(view.status(), err);
  const Schema& schema = view->schema;
  out << "file: " << f.view << " (" << std::filesystem::file_size(f.view)
      << " bytes)\n";
  out << "mechanism: " << view->meta.mechanism << ", engine "
      << view->meta.engine_version << "\n";
  if (view->meta.seed) out << "seed: " << *view->meta.seed << "\n";
  if (view->meta.timestamp) out << "built: " << *view->meta.timestamp << "\n";
  out << "attributes (" << schema.dims() << "):\n";
  for (const auto& a : schema.attributes()) {
    out << "  " << a.name << "  "
        << (a.kind == AttributeKind::kCategorical ? "categorical" : "numeric")
        << "  domain " << a.DomainSize() << "\n";
  }
  out << absl::StrFormat("total domain: 2^%.4f cells\n",
                         schema.TotalDomainLog2());
  out << "blocks (m): " << view->blocks.size() << "\n";
  out << absl::StrFormat("total noisy count: %.6f\n", view->TotalNoisyCount());
  const MechanismParams& p = view->params;
  out << absl::StrFormat(
      "params: epsilon_b=%g epsilon_r=%g epsilon_p=%g theta=%g lambda=%g "
      "delta=%g kappa=%g epsilon_cut=%g\n",
      p.epsilon_b, p.epsilon_r, p.epsilon_p, p.theta, p.lambda, p.delta,
      p.kappa, p.epsilon_cut);
  std::map<uint32_t, size_t> depths;
  for (const auto& b : view->blocks) ++depths[b.depth];
  out << "depth histogram (cuts from root: blocks):\n";
  for (const auto& [depth, n] : depths) {
    out << absl::StrFormat("  %4d: %d\n", depth, n);
  }
  if (!f.export_json.empty()) {
    std::ofstream json_out(f.export_json, std::ios::trunc);
    if (!json_out) {
      return DataExit(absl::UnavailableError(
                          absl::StrCat("cannot write ", f.export_json)),
                      err);
    }
    json_out << ViewToJson(*view).dump(1) << "\n";
    out << "exported " << f.export_json << "\n";
  }
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Differentially private p-views: build, query, evaluate, serve."};
  app.require_subcommand(1);

  BuildFlags build;
  CLI::App* build_cmd =
      app.add_subcommand("build", "Build a view from a CSV file and a schema");
  build_cmd->add_option("--input", build.input, "CSV file with a header row")
      ->required()
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--schema", build.schema, "Schema JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--out", build.out, "Output .hdpv path")->required();
  build_cmd->add_option("--epsilon", build.hp.epsilon_b, "Total budget")
      ->capture_default_str();
  build_cmd->add_option("--ratio", build.hp.ratio, "Bisection share of epsilon")
      ->capture_default_str();
  build_cmd->add_option("--alpha", build.hp.alpha, "exp(delta / lambda)")
      ->capture_default_str();
  build_cmd->add_option("--beta", build.hp.beta, "kappa = beta log2(domain)")
      ->capture_default_str();
  build_cmd->add_option("--gamma", build.hp.gamma,
                        "Converge share of the bisection budget")
      ->capture_default_str();
  build_cmd->add_option("--seed", build.seed,
                        "Random seed (generated and printed when omitted)");
  build_cmd->add_option("--mechanism", build.mechanism)
      ->check(CLI::IsMember({"bisection", "identity"}))
      ->capture_default_str();
  build_cmd->add_option("--threads", build.threads)->capture_default_str();
  build_cmd->add_flag("--clamp", build.clamp,
                      "Clamp out-of-range numeric values into the edge bins");
  build_cmd->add_flag("--timestamp", build.timestamp,
                      "Record the build time (output then differs per run)");

  QueryFlags query;
  CLI::App* query_cmd =
      app.add_subcommand("query", "Answer a range query from a view");
  query_cmd->add_option("--view", query.view)->required()->check(CLI::ExistingFile);
  query_cmd->add_option("--range", query.range,
                        "attr=lo:hi (values) or attr@lo:hi (bins), "
                        "comma separated; empty means everything");
  query_cmd->add_option("--mu", query.mu, "Bounds hold with prob. 1 - mu")
      ->capture_default_str();
  query_cmd->add_option("--xi", query.xi, "Scatter factor for every block")
      ->capture_default_str();
  query_cmd->add_flag("--json", query.json, "Print one JSON object");

  EvalFlags eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Run an experiment config");
  eval_cmd->add_option("--config", eval.config)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval.out, "Report path (overrides config)");
  eval_cmd->add_option("--threads", eval.threads);

  ServeFlags serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Serve a view over HTTP");
  serve_cmd->add_option("--view", serve.view)->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--port", serve.server.port)->capture_default_str();
  serve_cmd->add_option("--host", serve.server.host)->capture_default_str();
  serve_cmd->add_option("--cors-origin", serve.server.cors_origin)
      ->capture_default_str();

  InspectFlags inspect;
  CLI::App* inspect_cmd = app.add_subcommand("inspect", "Describe a view file");
  inspect_cmd->add_option("--view", inspect.view)->required()->check(CLI::ExistingFile);
  inspect_cmd->add_option("--export-json", inspect.export_json,
                          "Also write the view as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (CLI::App* sub : app.get_subcommands()) out << sub->help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n"
        << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*build_cmd) return Build(build, out, err);
    if (*query_cmd) return Query(query, out, err);
    if (*eval_cmd) return Eval(eval, out, err);
    if (*serve_cmd) return Serve(serve, out, err);
    if (*inspect_cmd) return Inspect(inspect, out, err);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace pview
