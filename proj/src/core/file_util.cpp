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

#include "file_util.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "kulcq/error.hpp"

namespace kulcq::detail {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::io, fmt::format("cannot read '{}'", path.string()));
    }
    return std::move(buffer).str();
}

std::vector<Line> read_nonblank_lines(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        ++number;
        std::string_view line(content.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!trim(line).empty()) lines.push_back({number, std::string(line)});
        start = end + 1;
    }
    if (lines.empty()) {
        throw Error(ErrorCode::empty_file, fmt::format("'{}' is empty", path.string()));
    }
    return lines;
}

nlohmann::json parse_json_line(const std::filesystem::path& path, const Line& line) {
    nlohmann::json row;
    try {
        row = nlohmann::json::parse(line.text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse, fmt::format("{}:{}: invalid JSON ({})", path.string(), line.number, e.what()));
    }
    if (!row.is_object()) {
        throw Error(ErrorCode::parse, fmt::format("{}:{}: expected a JSON object", path.string(), line.number));
    }
    return row;
}

std::string string_field(const nlohmann::json& row, const char* key,
                         const std::filesystem::path& path, std::size_t line) {
    auto it = row.find(key);
    if (it == row.end() || !it->is_string()) {
        throw Error(ErrorCode::parse,
                    fmt::format("{}:{}: missing or non-string field \"{}\"", path.string(), line, key));
    }
    return it->get<std::string>();
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\v\f";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::string join(const std::vector<std::string>& items, std::string_view sep, std::size_t limit) {
    std::string out;
    for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
        if (i) out += sep;
        out += items[i];
    }
    if (items.size() > limit) out += fmt::format("{}... ({} total)", sep, items.size());
    return out;
}

std::vector<CsvRecord> parse_csv(std::string_view content, const std::filesystem::path& path) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    std::size_t line = 1;
    current.line = 1;
    bool in_quotes = false;
    bool field_started = false;
    bool record_has_content = false;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        if (record_has_content) records.push_back(std::move(current));
        current = CsvRecord{};
        current.line = line;
        record_has_content = false;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty()) {
                    throw Error(ErrorCode::parse,
                                fmt::format("{}:{}: unexpected quote inside unquoted field", path.string(), line));
                }
                in_quotes = true;
                field_started = true;
                record_has_content = true;
                break;
            case ',':
                end_field();
                record_has_content = true;
                break;
            case '\r':
                if (i + 1 < content.size() && content[i + 1] == '\n') break;
                field += c;
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field += c;
                field_started = true;
                if (c != ' ' && c != '\t') record_has_content = true;
                break;
        }
    }
    if (in_quotes) {
        throw Error(ErrorCode::parse, fmt::format("{}:{}: unterminated quoted field", path.string(), current.line));
    }
    end_record();
    return records;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace kulcq::detail
