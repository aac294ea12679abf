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

#include "kulcq/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "kulcq/error.hpp"

namespace kulcq {

using detail::join;

Corpus::Corpus(std::vector<Utterance> utterances) : utterances_(std::move(utterances)) {
    index_.reserve(utterances_.size());
    for (std::size_t i = 0; i < utterances_.size(); ++i) {
        const Utterance& u = utterances_[i];
        if (u.id.empty()) {
            throw Error(ErrorCode::parse, fmt::format("utterance #{} has an empty id", i));
        }
        if (detail::trim(u.text).empty()) {
            throw Error(ErrorCode::empty_text, fmt::format("utterance \"{}\" has empty text", u.id));
        }
        if (!index_.emplace(u.id, i).second) {
            throw Error(ErrorCode::duplicate_id, fmt::format("duplicate utterance id \"{}\"", u.id));
        }
    }
}

std::optional<std::size_t> Corpus::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

EmbeddingSet::EmbeddingSet(std::vector<std::string> ids, std::vector<std::vector<double>> vectors)
    : ids_(std::move(ids)) {
    if (ids_.size() != vectors.size()) {
        throw Error(ErrorCode::internal, "embedding id/vector count mismatch");
    }
    if (!vectors.empty()) dim_ = vectors.front().size();
    data_.reserve(ids_.size() * dim_);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        const auto& v = vectors[i];
        if (v.empty() || v.size() != dim_) {
            throw Error(ErrorCode::dim_mismatch,
                        fmt::format("embedding \"{}\" has length {}, expected {}", ids_[i], v.size(), dim_));
        }
        bool nonzero = false;
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw Error(ErrorCode::parse, fmt::format("embedding \"{}\" has a non-finite component", ids_[i]));
            }
            nonzero = nonzero || x != 0.0;
        }
        if (!nonzero) {
            throw Error(ErrorCode::zero_vector, fmt::format("embedding \"{}\" is the zero vector", ids_[i]));
        }
        if (!index_.emplace(ids_[i], i).second) {
            throw Error(ErrorCode::duplicate_id, fmt::format("duplicate embedding id \"{}\"", ids_[i]));
        }
        data_.insert(data_.end(), v.begin(), v.end());
    }
}

std::span<const double> EmbeddingSet::at(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw Error(ErrorCode::missing_embedding, fmt::format("no embedding for \"{}\"", id));
    }
    return {data_.data() + it->second * dim_, dim_};
}

Clustering::Clustering(std::map<std::string, std::string> assignment) : assignment_(std::move(assignment)) {
    for (const auto& [id, cluster] : assignment_) clusters_[cluster].push_back(id);
}

std::optional<std::string> Clustering::cluster_of(const std::string& id) const {
    auto it = assignment_.find(id);
    if (it == assignment_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> BoundDataset::cluster_index(const std::string& cluster_id) const {
    auto it = std::lower_bound(cluster_ids_.begin(), cluster_ids_.end(), cluster_id);
    if (it == cluster_ids_.end() || *it != cluster_id) return std::nullopt;
    return static_cast<std::size_t>(it - cluster_ids_.begin());
}

void BoundDataset::assign(const Clustering& clustering) {
    std::vector<std::string> missing;
    for (const Utterance& u : corpus_->utterances()) {
        if (!clustering.cluster_of(u.id)) missing.push_back(u.id);
    }
    if (!missing.empty()) {
        throw Error(ErrorCode::missing_assignment, "no cluster assignment for: " + join(missing, ", "));
    }
    std::vector<std::string> unknown;
    for (const auto& [id, cluster] : clustering.assignment()) {
        if (!corpus_->index_of(id)) unknown.push_back(id);
    }
    if (!unknown.empty()) {
        throw Error(ErrorCode::unknown_id, "clustering references unknown ids: " + join(unknown, ", "));
    }

    clustering_ = clustering;
    cluster_ids_.clear();
    for (const auto& [cluster, ids] : clustering.clusters()) cluster_ids_.push_back(cluster);
    assignment_.assign(corpus_->size(), 0);
    members_.assign(cluster_ids_.size(), {});
    for (std::size_t i = 0; i < corpus_->size(); ++i) {
        const std::size_t c = *cluster_index(*clustering.cluster_of((*corpus_)[i].id));
        assignment_[i] = c;
        members_[c].push_back(i);
    }
}

BoundDataset BoundDataset::with_clustering(const Clustering& clustering) const {
    BoundDataset out;
    out.corpus_ = corpus_;
    out.embeddings_ = embeddings_;
    out.dim_ = dim_;
    out.assign(clustering);
    return out;
}

BoundDataset bind(const Corpus& corpus, const EmbeddingSet& embeddings, const Clustering& clustering) {
    std::vector<std::string> missing;
    for (const Utterance& u : corpus.utterances()) {
        if (!embeddings.contains(u.id)) missing.push_back(u.id);
    }
    if (!missing.empty()) {
        throw Error(ErrorCode::missing_embedding, "no embedding for: " + join(missing, ", "));
    }

    BoundDataset out;
    out.corpus_ = std::make_shared<const Corpus>(corpus);
    out.dim_ = embeddings.dim();
    auto matrix = std::make_shared<std::vector<double>>();
    matrix->reserve(corpus.size() * out.dim_);
    for (const Utterance& u : corpus.utterances()) {
        auto v = embeddings.at(u.id);
        matrix->insert(matrix->end(), v.begin(), v.end());
    }
    out.embeddings_ = std::move(matrix);
    out.assign(clustering);
    return out;
}

Clustering clustering_from_gold(const Corpus& corpus) {
    std::vector<std::string> unlabeled;
    std::map<std::string, std::string> assignment;
    for (const Utterance& u : corpus.utterances()) {
        if (!u.gold_label) {
            unlabeled.push_back(u.id);
        } else {
            assignment.emplace(u.id, *u.gold_label);
        }
    }
    if (!unlabeled.empty()) {
        throw Error(ErrorCode::no_gold, "utterances without a gold label: " + join(unlabeled, ", "));
    }
    return Clustering(std::move(assignment));
}

// Loaders

namespace {

Corpus load_corpus_jsonl(const std::filesystem::path& path) {
    std::vector<Utterance> utterances;
    std::map<std::string, std::size_t> seen;
    for (const auto& line : detail::read_nonblank_lines(path)) {
        const auto row = detail::parse_json_line(path, line);
        Utterance u;
        u.id = detail::string_field(row, "id", path, line.number);
        u.text = std::string(detail::trim(detail::string_field(row, "text", path, line.number)));
        if (auto it = row.find("label"); it != row.end() && !it->is_null()) {
            if (!it->is_string()) {
                throw Error(ErrorCode::parse, fmt::format("{}:{}: \"label\" must be a string", path.string(), line.number));
            }
            u.gold_label = it->get<std::string>();
        }
        if (u.id.empty()) {
            throw Error(ErrorCode::parse, fmt::format("{}:{}: empty id", path.string(), line.number));
        }
        if (u.text.empty()) {
            throw Error(ErrorCode::empty_text, fmt::format("{}:{}: utterance \"{}\" has empty text", path.string(), line.number, u.id));
        }
        if (auto [it, inserted] = seen.emplace(u.id, line.number); !inserted) {
            throw Error(ErrorCode::duplicate_id,
                        fmt::format("{}:{}: duplicate id \"{}\" (first seen on line {})", path.string(), line.number, u.id, it->second));
        }
        utterances.push_back(std::move(u));
    }
    return Corpus(std::move(utterances));
}

Corpus load_corpus_csv(const std::filesystem::path& path) {
    const std::string content = detail::read_file(path);
    auto records = detail::parse_csv(content, path);
    if (records.empty()) {
        throw Error(ErrorCode::empty_file, fmt::format("'{}' is empty", path.string()));
    }
    const auto& header = records.front().fields;
    std::optional<std::size_t> id_col, text_col, label_col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name(detail::trim(header[i]));
        // Strip a UTF-8 byte order mark on the first column.
        if (i == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);
        if (name == "id") id_col = i;
        else if (name == "text") text_col = i;
        else if (name == "label") label_col = i;
    }
    if (!text_col) {
        throw Error(ErrorCode::parse, fmt::format("{}:1: header has no \"text\" column", path.string()));
    }

    std::vector<Utterance> utterances;
    std::map<std::string, std::size_t> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size()) {
            throw Error(ErrorCode::parse, fmt::format("{}:{}: expected {} fields, found {}", path.string(), rec.line,
                                                      header.size(), rec.fields.size()));
        }
        Utterance u;
        u.id = id_col ? std::string(detail::trim(rec.fields[*id_col])) : std::string();
        if (u.id.empty()) u.id = fmt::format("row-{}", r - 1);
        u.text = std::string(detail::trim(rec.fields[*text_col]));
        if (label_col && !detail::trim(rec.fields[*label_col]).empty()) {
            u.gold_label = std::string(detail::trim(rec.fields[*label_col]));
        }
        if (u.text.empty()) {
            throw Error(ErrorCode::empty_text, fmt::format("{}:{}: utterance \"{}\" has empty text", path.string(), rec.line, u.id));
        }
        if (auto [it, inserted] = seen.emplace(u.id, rec.line); !inserted) {
            throw Error(ErrorCode::duplicate_id,
                        fmt::format("{}:{}: duplicate id \"{}\" (first seen on line {})", path.string(), rec.line, u.id, it->second));
        }
        utterances.push_back(std::move(u));
    }
    if (utterances.empty()) {
        throw Error(ErrorCode::empty_file, fmt::format("'{}' has a header but no rows", path.string()));
    }
    return Corpus(std::move(utterances));
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
    for (const auto& line : lines) out << line << '\n';
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
}

}  // namespace

CorpusFormat format_from_path(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".csv" ? CorpusFormat::csv : CorpusFormat::jsonl;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    return format == CorpusFormat::csv ? load_corpus_csv(path) : load_corpus_jsonl(path);
}

Corpus load_corpus(const std::filesystem::path& path) { return load_corpus(path, format_from_path(path)); }

EmbeddingSet load_embeddings(const std::filesystem::path& path) {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> vectors;
    std::optional<std::size_t> dim;
    for (const auto& line : detail::read_nonblank_lines(path)) {
        const auto row = detail::parse_json_line(path, line);
        std::string id = detail::string_field(row, "id", path, line.number);
        auto it = row.find("vector");
        if (it == row.end() || !it->is_array()) {
            throw Error(ErrorCode::parse, fmt::format("{}:{}: missing or non-array field \"vector\"", path.string(), line.number));
        }
        std::vector<double> v;
        v.reserve(it->size());
        for (const auto& x : *it) {
            if (!x.is_number()) {
                throw Error(ErrorCode::parse, fmt::format("{}:{}: non-numeric vector component", path.string(), line.number));
            }
            v.push_back(x.get<double>());
        }
        if (v.empty()) {
            throw Error(ErrorCode::dim_mismatch, fmt::format("{}:{}: embedding \"{}\" is empty", path.string(), line.number, id));
        }
        if (!dim) dim = v.size();
        if (v.size() != *dim) {
            throw Error(ErrorCode::dim_mismatch, fmt::format("{}:{}: embedding \"{}\" has length {}, expected {}",
                                                             path.string(), line.number, id, v.size(), *dim));
        }
        if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
            throw Error(ErrorCode::zero_vector, fmt::format("{}:{}: embedding \"{}\" is the zero vector", path.string(), line.number, id));
        }
        ids.push_back(std::move(id));
        vectors.push_back(std::move(v));
    }
    return EmbeddingSet(std::move(ids), std::move(vectors));
}

Clustering load_clustering(const std::filesystem::path& path) {
    std::map<std::string, std::string> assignment;
    std::map<std::string, std::size_t> seen;
    for (const auto& line : detail::read_nonblank_lines(path)) {
        const auto row = detail::parse_json_line(path, line);
        std::string id = detail::string_field(row, "id", path, line.number);
        std::string cluster = detail::string_field(row, "cluster", path, line.number);
        if (auto [it, inserted] = seen.emplace(id, line.number); !inserted) {
            throw Error(ErrorCode::duplicate_id, fmt::format("{}:{}: id \"{}\" assigned twice (first on line {})",
                                                             path.string(), line.number, id, it->second));
        }
        assignment.emplace(std::move(id), std::move(cluster));
    }
    return Clustering(std::move(assignment));
}

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
    std::vector<std::string> lines;
    for (const Utterance& u : corpus.utterances()) {
        nlohmann::ordered_json row;
        row["id"] = u.id;
        row["text"] = u.text;
        if (u.gold_label) row["label"] = *u.gold_label;
        lines.push_back(row.dump());
    }
    write_lines(path, lines);
}

void write_clustering_jsonl(const Corpus& corpus, const Clustering& clustering, const std::filesystem::path& path) {
    std::vector<std::string> lines;
    for (const Utterance& u : corpus.utterances()) {
        auto cluster = clustering.cluster_of(u.id);
        if (!cluster) continue;
        nlohmann::ordered_json row;
        row["id"] = u.id;
        row["cluster"] = *cluster;
        lines.push_back(row.dump());
    }
    write_lines(path, lines);
}

void write_embeddings_jsonl(const Corpus& corpus, const EmbeddingSet& embeddings, const std::filesystem::path& path) {
    std::vector<std::string> lines;
    for (const Utterance& u : corpus.utterances()) {
        if (!embeddings.contains(u.id)) continue;
        auto v = embeddings.at(u.id);
        nlohmann::ordered_json row;
        row["id"] = u.id;
        row["vector"] = std::vector<double>(v.begin(), v.end());
        lines.push_back(row.dump());
    }
    write_lines(path, lines);
}

}  // namespace kulcq
