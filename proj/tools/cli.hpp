// Copyright 2026 The latnorm authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LATNORM_TOOLS_CLI_HPP
#define LATNORM_TOOLS_CLI_HPP

#include <ostream>

namespace latnorm_cli {

// Full command-line front-end, reusable from tests. JSON results go to
// `out`, human diagnostics to `err`. Returns the process exit code:
// 0 success, 1 reproduction mismatch, 2 parse/validation error,
// 3 numerical-domain error.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace latnorm_cli

#endif  // LATNORM_TOOLS_CLI_HPP
