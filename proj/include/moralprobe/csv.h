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

#ifndef MORALPROBE_CSV_H_
#define MORALPROBE_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace moralprobe {

// A delimited text file with a header row.
struct DelimitedTable {
  char delimiter = ',';
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of `name` in the header, or -1.
  int column(std::string_view name) const;
};

// Picks the delimiter among comma, tab and semicolon that occurs most often
// (outside quotes) in the first line. Ties resolve in that order.
char detect_delimiter(std::string_view first_line);

// Splits one record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(std::string_view line, char delimiter);

// Reads a whole file. Handles a UTF-8 BOM and CRLF line endings; blank lines
// are skipped. Throws DataError when the file cannot be opened or a row has a
// different field count than the header.
DelimitedTable read_delimited(const std::filesystem::path& path);

// Same, but without a header row: every line lands in `rows`.
DelimitedTable read_delimited_headerless(const std::filesystem::path& path);

// Quotes `field` if it contains the delimiter, a quote or a newline.
std::string quote_field(std::string_view field, char delimiter = ',');

std::string join_record(const std::vector<std::string>& fields,
                        char delimiter = ',');

// Writes `contents` with LF endings, throwing DataError on I/O failure.
void write_text_file(const std::filesystem::path& path,
                     std::string_view contents);

std::string trim(std::string_view s);

}  // namespace moralprobe

#endif  // MORALPROBE_CSV_H_
