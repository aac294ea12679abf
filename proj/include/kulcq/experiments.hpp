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
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kulcq/corpus.hpp"
#include "kulcq/keywords.hpp"
#include "kulcq/metrics.hpp"

namespace kulcq {

struct PerturbationConfig {
    double p = 0.0;
    std::uint64_t seed = 0;
};

/// Each utterance, with probability p, moves to a cluster drawn uniformly from
/// the other original clusters. Clusters left empty disappear.
Clustering perturb_labels(const Clustering& clustering, const PerturbationConfig& config);

/// Seed of one sweep cell: base_seed ^ splitmix64(bits(p) ^ splitmix64(repeat)).
std::uint64_t cell_seed(std::uint64_t base_seed, double p, std::size_t repeat);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

struct SweepRecord {
    double p = 0.0;
    std::size_t repeat = 0;
    Metric metric = Metric::kulcq;
    double score = 0.0;
};

struct SweepSummary {
    double p = 0.0;
    Metric metric = Metric::kulcq;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single repeat
};

struct SweepConfig {
    std::vector<double> p_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t repeats = 5;
    std::uint64_t base_seed = 0;
    std::vector<Metric> metrics = {Metric::kulcq, Metric::silhouette};
    ScoreConfig scoring;
};

struct SweepReport {
    SweepConfig config;
    std::vector<SweepRecord> records;     // ordered by (p index, repeat, metric)
    std::vector<SweepSummary> summaries;  // ordered by (p index, metric)

    /// Mean score at the first grid point minus mean score at the last.
    double drop(Metric metric) const;
    std::vector<double> means(Metric metric) const;
};

SweepReport run_sweep(const BoundDataset& dataset, const SweepConfig& config);

struct InspectionReport {
    std::string cluster_id;
    std::size_t member_count = 0;
    std::size_t cluster_count = 0;
    double silhouette = 0.0;
    double kulcq = 0.0;
    std::size_t silhouette_rank = 0;
    std::size_t kulcq_rank = 0;
    ClusterKeywordProfile profile;
    std::vector<Utterance> samples;
};

/// Throws Error(unknown_cluster) for an ID not in the clustering.
InspectionReport inspect_cluster(const BoundDataset& dataset, const std::string& cluster_id,
                                 const ScoreConfig& config);

struct FixtureConfig {
    std::size_t n_clusters = 4;
    std::size_t per_cluster = 50;
    std::size_t dim = 16;
    double separation = 4.0;
    std::uint64_t seed = 0;
};

struct Fixture {
    Corpus corpus;
    EmbeddingSet embeddings;
    Clustering clustering;
    PrecomputedKeywords keywords;
};

/// Clusters scattered around mutually distant unit directions; noise norm is
/// about 1 / separation. Each cluster draws its text from its own vocabulary.
Fixture synthesize_fixture(const FixtureConfig& config);

/// Writes utterances.jsonl, embeddings.jsonl, clustering.jsonl and
/// keywords.jsonl into `dir`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace kulcq
