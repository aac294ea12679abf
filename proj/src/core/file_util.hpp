/*
 * Copyright (c) 2026, The KULCQ Toolkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Helpers shared by the loaders. Not installed.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace kulcq::detail {

struct Line {
    std::size_t number = 0;  // 1-based
    std::string text;
};

std::string read_file(const std::filesystem::path& path);

/// Non-blank lines with CR stripped. Throws Error(empty_file) when there are none.
std::vector<Line> read_nonblank_lines(const std::filesystem::path& path);

nlohmann::json parse_json_line(const std::filesystem::path& path, const Line& line);

/// Required string member; throws Error(parse) citing the line otherwise.
std::string string_field(const nlohmann::json& row, const char* key,
                         const std::filesystem::path& path, std::size_t line);

std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& items, std::string_view sep, std::size_t limit = 20);

struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// RFC 4180 records: quoted fields may contain separators, doubled quotes and
/// newlines. LF and CRLF line ends are accepted.
std::vector<CsvRecord> parse_csv(std::string_view content, const std::filesystem::path& path);

std::string csv_escape(std::string_view field);

}  // namespace kulcq::detail
