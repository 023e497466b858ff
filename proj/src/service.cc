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

#include "pview/service.h"

#include <chrono>
#include <map>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"
#include "pview/error_bounds.h"
#include "pview/query.h"
#include "pview/range_expr.h"

namespace pview {
namespace {

using nlohmann::json;

HttpReply Reply(int status, const json& body) {
  return {status, body.dump()};
}

HttpReply Error(int status, const std::string& message,
                std::optional<std::string> field = std::nullopt) {
  json body = {{"error", message}};
  body["field"] = field ? json(*field) : json(nullptr);
  return Reply(status, body);
}

HttpReply NoView() { return Error(503, "no view loaded"); }

int StatusFor(const absl::Status& status) {
  return status.code() == absl::StatusCode::kFailedPrecondition ? 422 : 400;
}

absl::StatusOr<RangeValue> ValueOf(const json& j) {
  if (j.is_number()) return RangeValue(j.get<double>());
  if (j.is_string()) return RangeValue(j.get<std::string>());
  return absl::InvalidArgumentError("must be a number or a string");
}

}  // namespace

ViewService::ViewService(std::shared_ptr<const PView> view)
    : view_(std::move(view)) {}

HttpReply ViewService::GetSchema() const {
  if (view_ == nullptr) return NoView();
  return Reply(200, {{"schema", view_->schema.ToJson()},
                     {"domain_sizes", view_->schema.DomainSizes()},
                     {"blocks", view_->blocks.size()},
                     {"params", view_->params.ToJson()},
                     {"meta", view_->meta.ToJson()}});
}

HttpReply ViewService::PostQuery(std::string_view body) const {
  if (view_ == nullptr) return NoView();
  const auto start = std::chrono::steady_clock::now();
  const json request = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (request.is_discarded()) return Error(400, "body is not valid JSON");
  if (!request.is_object()) return Error(400, "body must be a JSON object");
  for (const auto& [key, value] : request.items()) {
    if (key != "ranges" && key != "mu" && key != "expression") {
      return Error(400, absl::StrCat("unknown field '", key, "'"), key);
    }
  }

  double mu = 0.05;
  if (request.contains("mu")) {
    if (!request["mu"].is_number()) return Error(400, "mu must be a number", "mu");
    mu = request["mu"].get<double>();
    if (!(mu > 0.0 && mu < 1.0)) {
      return Error(400, "mu must lie in (0, 1)", "mu");
    }
  }

  const Schema& schema = view_->schema;
  RangeQuery query = RangeQuery::FullDomain(schema);
  if (request.contains("expression") && request.contains("ranges")) {
    return Error(400, "give either 'ranges' or 'expression'", "expression");
  }
  if (request.contains("expression")) {
    if (!request["expression"].is_string()) {
      return Error(400, "expression must be a string", "expression");
    }
    auto parsed =
        ParseRangeExpression(schema, request["expression"].get<std::string>());
    if (!parsed.ok()) {
      return Error(StatusFor(parsed.status()), std::string(parsed.status().message()),
                   "expression");
    }
    query = *parsed;
  }
  if (request.contains("ranges")) {
    const json& ranges = request["ranges"];
    if (!ranges.is_object()) {
      return Error(400, "ranges must be an object", "ranges");
    }
    for (const auto& [name, spec] : ranges.items()) {
      const std::string field = absl::StrCat("ranges.", name);
      auto index = schema.IndexOf(name);
      if (!index.has_value()) {
        return Error(400, absl::StrCat("unknown attribute '", name, "'"), field);
      }
      if (!spec.is_object()) {
        return Error(400, "range must be an object with lo and hi", field);
      }
      for (const auto& [key, value] : spec.items()) {
        if (key != "lo" && key != "hi" && key != "raw") {
          return Error(400, absl::StrCat("unknown field '", key, "'"),
                       absl::StrCat(field, ".", key));
        }
      }
      bool raw = false;
      if (spec.contains("raw")) {
        if (!spec["raw"].is_boolean()) {
          return Error(400, "raw must be a boolean", field + ".raw");
        }
        raw = spec["raw"].get<bool>();
      }
      std::optional<RangeValue> ends[2];
      const char* keys[2] = {"lo", "hi"};
      for (int e = 0; e < 2; ++e) {
        if (!spec.contains(keys[e])) {
          return Error(400, "missing bound", absl::StrCat(field, ".", keys[e]));
        }
        auto value = ValueOf(spec[keys[e]]);
        if (!value.ok()) {
          return Error(400, std::string(value.status().message()),
                       absl::StrCat(field, ".", keys[e]));
        }
        ends[e] = *value;
      }
      auto range = ResolveRange(schema.attribute(*index), *ends[0], *ends[1], raw);
      if (!range.ok()) {
        return Error(StatusFor(range.status()), std::string(range.status().message()),
                     field);
      }
      query.ranges[*index] = *range;
    }
  }

  auto answer = Answer(*view_, query);
  if (!answer.ok()) return Error(400, std::string(answer.status().message()), "ranges");
  auto bound = ErrorBounds(*view_, query, mu);
  if (!bound.ok()) return Error(500, std::string(bound.status().message()));

  json resolved = json::object();
  for (size_t i = 0; i < schema.dims(); ++i) {
    resolved[schema.attribute(i).name] = {query.ranges[i].lo,
                                          query.ranges[i].hi};
  }
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  return Reply(200, {{"answer", *answer},
                     {"theta_min", bound->theta_min},
                     {"theta_max", bound->theta_max},
                     {"mu", mu},
                     {"confidence", 1.0 - mu},
                     {"blocks_touched", BlocksTouched(*view_, query)},
                     {"ranges", resolved},
                     {"elapsed_ms", elapsed_ms}});
}

HttpReply ViewService::GetBlocks(const std::optional<std::string>& x,
                                 const std::optional<std::string>& y) const {
  if (view_ == nullptr) return NoView();
  if (!x.has_value()) return Error(400, "missing attribute", "x");
  if (!y.has_value()) return Error(400, "missing attribute", "y");
  const Schema& schema = view_->schema;
  const auto xi = schema.IndexOf(*x);
  if (!xi.has_value()) {
    return Error(400, absl::StrCat("unknown attribute '", *x, "'"), "x");
  }
  const auto yi = schema.IndexOf(*y);
  if (!yi.has_value()) {
    return Error(400, absl::StrCat("unknown attribute '", *y, "'"), "y");
  }
  if (*xi == *yi) return Error(400, "x and y must differ", "y");

  struct Merged {
    double density = 0.0;
    double noisy_sum = 0.0;
    int blocks = 0;
  };
  std::map<std::tuple<uint32_t, uint32_t, uint32_t, uint32_t>, Merged> rects;
  for (const auto& b : view_->blocks) {
    const IndexRange rx = b.ranges[*xi];
    const IndexRange ry = b.ranges[*yi];
    Merged& m = rects[{rx.lo, rx.hi, ry.lo, ry.hi}];
    m.density += b.noisy_sum /
                 (static_cast<double>(rx.extent()) * static_cast<double>(ry.extent()));
    m.noisy_sum += b.noisy_sum;
    ++m.blocks;
  }
  json list = json::array();
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& [key, m] : rects) {
    const auto& [xl, xh, yl, yh] = key;
    list.push_back({{"x", {xl, xh}},
                    {"y", {yl, yh}},
                    {"density", m.density},
                    {"noisy_sum", m.noisy_sum},
                    {"blocks", m.blocks}});
    lo = first ? m.density : std::min(lo, m.density);
    hi = first ? m.density : std::max(hi, m.density);
    first = false;
  }
  return Reply(200, {{"x", *x},
                     {"y", *y},
                     {"x_domain", schema.attribute(*xi).DomainSize()},
                     {"y_domain", schema.attribute(*yi).DomainSize()},
                     {"rects", list},
                     {"min_density", lo},
                     {"max_density", hi}});
}

ViewServer::ViewServer(std::shared_ptr<const ViewService> service,
                       ServerOptions options)
    : service_(std::move(service)),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  httplib::Headers cors = {
      {"Access-Control-Allow-Origin", options_.cors_origin},
      {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
      {"Access-Control-Allow-Headers", "Content-Type"}};
  server_->set_default_headers(cors);
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  };
  server_->Get("/schema", [this, send](const httplib::Request&,
                                       httplib::Response& res) {
    send(res, service_->GetSchema());
  });
  server_->Post("/query", [this, send](const httplib::Request& req,
                                       httplib::Response& res) {
    send(res, service_->PostQuery(req.body));
  });
  server_->Get("/blocks", [this, send](const httplib::Request& req,
                                       httplib::Response& res) {
    auto param = [&](const char* name) -> std::optional<std::string> {
      if (!req.has_param(name)) return std::nullopt;
      return req.get_param_value(name);
    };
    send(res, service_->GetBlocks(param("x"), param("y")));
  });
  server_->Options(R"(/.*)", [](const httplib::Request&,
                                httplib::Response& res) { res.status = 204; });
}

ViewServer::~ViewServer() { Stop(); }

absl::StatusOr<int> ViewServer::Bind() {
  if (options_.port == 0) {
    const int port = server_->bind_to_any_port(options_.host);
    if (port < 0) {
      return absl::UnavailableError(
          absl::StrCat("cannot bind ", options_.host));
    }
    return port;
  }
  if (!server_->bind_to_port(options_.host, options_.port)) {
    return absl::UnavailableError(absl::StrCat(
        "cannot bind ", options_.host, ":", options_.port));
  }
  return options_.port;
}

absl::Status ViewServer::Listen() {
  if (!server_->listen_after_bind()) {
    return absl::UnavailableError("server stopped with an error");
  }
  return absl::OkStatus();
}

void ViewServer::Stop() {
  if (server_ != nullptr) server_->stop();
}

}  // namespace pview
