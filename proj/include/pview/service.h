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

#ifndef PVIEW_SERVICE_H_
#define PVIEW_SERVICE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "pview/pview.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace pview {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// HTTP handlers over one immutable view. Handlers are pure functions of the
// view and the request, so they are safe to call concurrently. The service
// never sees raw data: it is built from a view alone.
class ViewService {
 public:
  // A null view makes every endpoint answer 503.
  explicit ViewService(std::shared_ptr<const PView> view);

  // GET /schema: schema, domain sizes, block count, parameters and build
  // metadata.
  HttpReply GetSchema() const;

  // POST /query with
  //   {"ranges": {"<attr>": {"lo": x, "hi": y, "raw": bool}}, "mu": 0.05}
  // or {"expression": "age=20:30,sex@0:0", "mu": 0.05}. Bounds are bin
  // indices unless "raw" is true (then values in natural units or category
  // names). Replies {"answer", "theta_min", "theta_max", "mu", "confidence",
  // "blocks_touched", "ranges", "elapsed_ms"}. Malformed requests get 400
  // with {"error", "field"}; lo > hi gets 422.
  HttpReply PostQuery(std::string_view body) const;

  // GET /blocks?x=<attr>&y=<attr>: every block projected onto the (x, y)
  // plane. Blocks whose projections coincide are merged into one rectangle;
  // a rectangle's density is the noisy count per (x, y) cell it carries,
  // sum_i S_i / (extent_x * extent_y), so overlapping rectangles add up.
  HttpReply GetBlocks(const std::optional<std::string>& x,
                      const std::optional<std::string>& y) const;

 private:
  std::shared_ptr<const PView> view_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
};

// Binds the endpoints above to an HTTP server.
class ViewServer {
 public:
  ViewServer(std::shared_ptr<const ViewService> service, ServerOptions options);
  ~ViewServer();

  // Binds the socket; returns the bound port.
  absl::StatusOr<int> Bind();
  // Serves until Stop(); call after Bind().
  absl::Status Listen();
  void Stop();

 private:
  std::shared_ptr<const ViewService> service_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace pview

#endif  // PVIEW_SERVICE_H_
