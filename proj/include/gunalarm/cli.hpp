/* Copyright 2026 The gunalarm Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef GUNALARM_CLI_HPP_
#define GUNALARM_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace gunalarm {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,      // the run started but hit inconsistent input
  kExitConfigError = 2,  // bad flags, unreadable or malformed files
};

// Entry point shared by the binary and the tests. `args` excludes argv[0].
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace gunalarm

#endif  // GUNALARM_CLI_HPP_
