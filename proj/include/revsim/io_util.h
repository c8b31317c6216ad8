// Copyright 2026 The Revsim Authors. All Rights Reserved.
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

#ifndef REVSIM_IO_UTIL_H_
#define REVSIM_IO_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace revsim {

std::string ReadFileBytes(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it over `path`, so readers never
// observe a partial file. Creates missing parent directories.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

// Splits one CSV record. Fields may be double-quoted, with "" as an escaped
// quote. Returns false on an unterminated quote.
bool SplitCsvLine(std::string_view line, std::vector<std::string>& fields);
// Quotes the field only if it contains a comma, quote or newline.
std::string CsvField(std::string_view field);

// Shortest round-tripping decimal representation ("%.17g").
std::string FormatDouble(double value);

std::string Trim(std::string_view text);

}  // namespace revsim

#endif  // REVSIM_IO_UTIL_H_
