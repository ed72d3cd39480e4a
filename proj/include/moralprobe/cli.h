// Copyright 2026 The moralprobe Authors. All Rights Reserved.
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

#ifndef MORALPROBE_CLI_H_
#define MORALPROBE_CLI_H_

#include <iosfwd>

namespace moralprobe {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitBackend = 3;

// Entry point for the `moralprobe` tool. Subcommands: preprocess {wvs|pew},
// probe, analyze, report.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace moralprobe

#endif  // MORALPROBE_CLI_H_
