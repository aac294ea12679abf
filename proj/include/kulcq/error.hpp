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

#include <stdexcept>
#include <string>
#include <string_view>

namespace kulcq {

// Stable error identifiers. The string form (see code_name) is what the CLI
// prints and what the C API exposes through kulcq_status_name.
enum class ErrorCode {
    io,
    parse,
    empty_file,
    empty_text,
    duplicate_id,
    dim_mismatch,
    zero_vector,
    length_mismatch,
    missing_embedding,
    missing_assignment,
    unknown_id,
    no_gold,
    ngram,
    range,
    unknown_cluster,
    single_cluster,
    invalid_argument,
    internal,
};

std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace kulcq
