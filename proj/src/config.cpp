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

#include "moralprobe/config.h"

#include <cctype>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "moralprobe/csv.h"
#include "moralprobe/error.h"

namespace moralprobe {

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, const std::string& source, int number)
      : line_(line), source_(source), number_(number) {}

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) {
      ++pos_;
    }
  }

  bool at_end_or_comment() {
    skip_space();
    return pos_ >= line_.size() || line_[pos_] == '#';
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string string_literal() {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] != '"') fail("expected '\"'");
    ++pos_;
    std::string out;
    while (pos_ < line_.size() && line_[pos_] != '"') {
      char c = line_[pos_++];
      if (c == '\\') {
        if (pos_ >= line_.size()) fail("dangling escape");
        const char e = line_[pos_++];
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: fail(fmt::format("unsupported escape '\\{}'", e));
        }
      } else {
        out.push_back(c);
      }
    }
    if (pos_ >= line_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string key() {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == '"') return string_literal();
    const size_t start = pos_;
    while (pos_ < line_.size()) {
      const unsigned char c = line_[pos_];
      if (!(std::isalnum(c) || c == '_' || c == '-' || c == '.')) break;
      ++pos_;
    }
    if (start == pos_) fail("expected key");
    return std::string(line_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(fmt::format("{}:{}: {}", source_, number_, what));
  }

 private:
  std::string_view line_;
  const std::string& source_;
  int number_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<ConfigEntry> parse_config(const std::string& text,
                                      const std::string& source) {
  std::vector<ConfigEntry> entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    LineParser p(raw, source, number);
    if (p.at_end_or_comment()) continue;
    if (p.consume('[')) {
      section = p.key();
      if (!p.consume(']')) p.fail("expected ']'");
      if (!p.at_end_or_comment()) p.fail("trailing characters");
      continue;
    }
    ConfigEntry entry;
    entry.section = section;
    entry.line = number;
    entry.key = p.key();
    if (!p.consume('=')) p.fail("expected '='");
    if (p.consume('[')) {
      std::vector<std::string> items;
      if (!p.consume(']')) {
        do {
          items.push_back(p.string_literal());
        } while (p.consume(','));
        if (!p.consume(']')) p.fail("expected ']'");
      }
      entry.value = std::move(items);
    } else {
      entry.value = p.string_literal();
    }
    if (!p.at_end_or_comment()) p.fail("trailing characters");
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ConfigEntry> load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace moralprobe
