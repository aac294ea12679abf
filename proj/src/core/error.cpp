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

#include "kulcq/error.hpp"

namespace kulcq {

std::string_view code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::io: return "E_IO";
        case ErrorCode::parse: return "E_PARSE";
        case ErrorCode::empty_file: return "E_EMPTY_FILE";
        case ErrorCode::empty_text: return "E_EMPTY_TEXT";
        case ErrorCode::duplicate_id: return "E_DUPLICATE_ID";
        case ErrorCode::dim_mismatch: return "E_DIM_MISMATCH";
        case ErrorCode::zero_vector: return "E_ZERO_VECTOR";
        case ErrorCode::length_mismatch: return "E_LENGTH_MISMATCH";
        case ErrorCode::missing_embedding: return "E_MISSING_EMBEDDING";
        case ErrorCode::missing_assignment: return "E_MISSING_ASSIGNMENT";
        case ErrorCode::unknown_id: return "E_UNKNOWN_ID";
        case ErrorCode::no_gold: return "E_NO_GOLD";
        case ErrorCode::ngram: return "E_NGRAM";
        case ErrorCode::range: return "E_RANGE";
        case ErrorCode::unknown_cluster: return "E_CLUSTER";
        case ErrorCode::single_cluster: return "E_SINGLE_CLUSTER";
        case ErrorCode::invalid_argument: return "E_ARG";
        case ErrorCode::internal: return "E_INTERNAL";
    }
    return "E_INTERNAL";
}

}  // namespace kulcq
