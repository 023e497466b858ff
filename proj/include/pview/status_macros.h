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

#ifndef PVIEW_STATUS_MACROS_H_
#define PVIEW_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define PVIEW_CONCAT_INNER_(a, b) a##b
#define PVIEW_CONCAT_(a, b) PVIEW_CONCAT_INNER_(a, b)

#define RETURN_IF_ERROR(expr)                  \
  do {                                         \
    ::absl::Status pview_status_ = (expr);     \
    if (!pview_status_.ok()) return pview_status_; \
  } while (false)

#define PVIEW_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                 \
  if (!tmp.ok()) return tmp.status();                \
  lhs = std::move(tmp).value()

#define ASSIGN_OR_RETURN(lhs, expr) \
  PVIEW_ASSIGN_OR_RETURN_IMPL_(PVIEW_CONCAT_(pview_statusor_, __LINE__), lhs, expr)

#endif  // PVIEW_STATUS_MACROS_H_
