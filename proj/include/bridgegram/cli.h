// Copyright 2026 The Bridgegram Authors.
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

#ifndef BRIDGEGRAM_CLI_H_
#define BRIDGEGRAM_CLI_H_

#include <iosfwd>

namespace bridgegram {

// Entry point of the `bridgegram` tool. Returns 0 on success, 2 on bad
// usage and 1 on runtime failure. Results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace bridgegram

#endif  // BRIDGEGRAM_CLI_H_
