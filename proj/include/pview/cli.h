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

#ifndef PVIEW_CLI_H_
#define PVIEW_CLI_H_

#include <ostream>

namespace pview {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,     // bad flags, missing files, invalid parameters
  kExitData = 3,      // unreadable or inconsistent input data or views
  kExitInternal = 4,  // anything unexpected
};

// Runs `pview <subcommand> ...` with the given arguments (argv[0] is the
// program name). Subcommands: build, query, eval, serve, inspect.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace pview

#endif  // PVIEW_CLI_H_
