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

#ifndef MORALPROBE_CONFIG_H_
#define MORALPROBE_CONFIG_H_

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace moralprobe {

// One `key = value` entry from a TOML-style config file. Values are either a
// basic string or an array of basic strings.
struct ConfigEntry {
  std::string section;  // most recent [section] header, empty at top level
  std::string key;
  std::variant<std::string, std::vector<std::string>> value;
  int line = 0;
};

// Parses the small TOML subset used by topic maps and pair lists:
//   # comment
//   [section]
//   key = "string"
//   key = ["a", "b"]
// Bare or quoted keys; escapes \" \\ \n \t inside strings. Entries come back
// in file order. Throws DataError on anything else.
std::vector<ConfigEntry> parse_config(const std::string& text,
                                      const std::string& source = "<config>");

std::vector<ConfigEntry> load_config(const std::filesystem::path& path);

}  // namespace moralprobe

#endif  // MORALPROBE_CONFIG_H_
