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

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace kulcq {

struct Utterance {
    std::string id;
    std::string text;
    std::optional<std::string> gold_label;

    bool operator==(const Utterance&) const = default;
};

/// Ordered, duplicate-free collection of utterances. Input order is preserved.
class Corpus {
public:
    Corpus() = default;

    /// Throws Error(duplicate_id / empty_text) when the invariants are violated.
    explicit Corpus(std::vector<Utterance> utterances);

    std::span<const Utterance> utterances() const { return utterances_; }
    std::size_t size() const { return utterances_.size(); }
    bool empty() const { return utterances_.empty(); }
    const Utterance& operator[](std::size_t i) const { return utterances_[i]; }

    std::optional<std::size_t> index_of(const std::string& id) const;

    bool operator==(const Corpus& other) const { return utterances_ == other.utterances_; }

private:
    std::vector<Utterance> utterances_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// ID-indexed embedding vectors, all of length dim() and none all-zero.
class EmbeddingSet {
public:
    EmbeddingSet() = default;

    /// Throws Error(dim_mismatch / zero_vector / duplicate_id).
    EmbeddingSet(std::vector<std::string> ids, std::vector<std::vector<double>> vectors);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return ids_.size(); }
    std::span<const std::string> ids() const { return ids_; }
    bool contains(const std::string& id) const { return index_.contains(id); }

    /// Vector for an ID; throws Error(missing_embedding) when absent.
    std::span<const double> at(const std::string& id) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Assignment of utterance IDs to cluster IDs. Cluster membership is derived
/// from the assignment, so every cluster is non-empty by construction.
class Clustering {
public:
    Clustering() = default;
    explicit Clustering(std::map<std::string, std::string> assignment);

    const std::map<std::string, std::string>& assignment() const { return assignment_; }
    const std::map<std::string, std::vector<std::string>>& clusters() const { return clusters_; }
    std::size_t cluster_count() const { return clusters_.size(); }
    std::size_t size() const { return assignment_.size(); }

    std::optional<std::string> cluster_of(const std::string& id) const;

    bool operator==(const Clustering& other) const { return assignment_ == other.assignment_; }

private:
    std::map<std::string, std::string> assignment_;
    std::map<std::string, std::vector<std::string>> clusters_;
};

/// Read-only bundle of an aligned corpus, embedding set and clustering.
///
/// Utterances are addressed by their corpus index. Clusters are addressed by
/// dense indices in ascending cluster-ID order. Corpus and embeddings are
/// shared, so rebinding with a different clustering (see with_clustering) is
/// cheap.
class BoundDataset {
public:
    std::size_t size() const { return corpus_->size(); }
    std::size_t dim() const { return dim_; }
    const Corpus& corpus() const { return *corpus_; }
    const Clustering& clustering() const { return clustering_; }

    std::span<const double> embedding(std::size_t utterance) const {
        return {embeddings_->data() + utterance * dim_, dim_};
    }

    std::size_t cluster_count() const { return cluster_ids_.size(); }
    const std::string& cluster_id(std::size_t cluster) const { return cluster_ids_[cluster]; }
    std::optional<std::size_t> cluster_index(const std::string& cluster_id) const;

    std::size_t cluster_of(std::size_t utterance) const { return assignment_[utterance]; }
    std::span<const std::size_t> members(std::size_t cluster) const { return members_[cluster]; }

    /// Same corpus and embeddings under a different clustering; the same
    /// validation as bind() applies.
    BoundDataset with_clustering(const Clustering& clustering) const;

    friend BoundDataset bind(const Corpus&, const EmbeddingSet&, const Clustering&);

private:
    BoundDataset() = default;
    void assign(const Clustering& clustering);

    std::shared_ptr<const Corpus> corpus_;
    std::shared_ptr<const std::vector<double>> embeddings_;
    std::size_t dim_ = 0;
    Clustering clustering_;
    std::vector<std::string> cluster_ids_;
    std::vector<std::size_t> assignment_;
    std::vector<std::vector<std::size_t>> members_;
};

enum class CorpusFormat { jsonl, csv };

/// Guesses the utterance file format from its extension (".csv" or JSONL).
CorpusFormat format_from_path(const std::filesystem::path& path);

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus load_corpus(const std::filesystem::path& path);
EmbeddingSet load_embeddings(const std::filesystem::path& path);
Clustering load_clustering(const std::filesystem::path& path);

/// Fails with missing_embedding, missing_assignment or unknown_id, listing the
/// offending IDs.
BoundDataset bind(const Corpus& corpus, const EmbeddingSet& embeddings, const Clustering& clustering);

/// One cluster per distinct gold label; throws Error(no_gold) listing the
/// unlabeled IDs.
Clustering clustering_from_gold(const Corpus& corpus);

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);
void write_clustering_jsonl(const Corpus& corpus, const Clustering& clustering, const std::filesystem::path& path);
void write_embeddings_jsonl(const Corpus& corpus, const EmbeddingSet& embeddings, const std::filesystem::path& path);

}  // namespace kulcq
