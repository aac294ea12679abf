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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kulcq/corpus.hpp"
#include "kulcq/keywords.hpp"

namespace kulcq {

/// Magnitudes at or below this are treated as zero when combining a and b.
inline constexpr double kDegenerateScale = 1e-12;

enum class DistanceKind { cosine };
enum class Metric { kulcq, silhouette };

std::string_view metric_name(Metric metric) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

/// 1 - cos(u, v), clamped to [0, 2]. Throws Error(zero_vector) or
/// Error(length_mismatch).
double cosine_distance(std::span<const double> u, std::span<const double> v);

/// Neumaier-compensated sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double mean(std::span<const double> values);

/// Keyword-weighted cluster centroids.
struct CentroidTable {
    std::size_t dim = 0;
    std::vector<double> centroids;              // cluster-major, dim entries per cluster
    std::vector<double> member_weights;         // w_i^j per utterance (for its own cluster)
    std::vector<bool> fallback;                 // true where the unweighted mean was used

    std::span<const double> centroid(std::size_t cluster) const {
        return {centroids.data() + cluster * dim, dim};
    }
};

/// w'_i^y for every ordered cluster pair, row-major.
struct InterClusterWeights {
    std::size_t clusters = 0;
    std::vector<double> weights;
    std::vector<std::size_t> overlaps;

    double at(std::size_t i, std::size_t y) const { return weights[i * clusters + y]; }
    std::size_t overlap(std::size_t i, std::size_t y) const { return overlaps[i * clusters + y]; }
};

/// w_i^j = |K(cluster_i) ∩ K(utt_j)| / |K(cluster_i)|, or 0 for an empty profile.
double centroid_weight(const ClusterKeywordProfile& profile, const KeywordSet& keywords);

CentroidTable compute_centroids(const BoundDataset& dataset,
                                std::span<const ClusterKeywordProfile> profiles,
                                std::span<const KeywordSet> keyword_sets);

/// 1 / overlap, or 1 where the profiles share no keyword.
InterClusterWeights compute_inter_weights(std::span<const ClusterKeywordProfile> profiles);

/// Mean distance of the cluster's members to its centroid.
double kulcq_intra(std::size_t cluster, const CentroidTable& centroids, const BoundDataset& dataset);

/// Sum over the other clusters i of w'_i^home * D(x, c_i). The weights are
/// not renormalized.
double kulcq_inter(std::size_t utterance, std::size_t home, const CentroidTable& centroids,
                   const InterClusterWeights& weights, const BoundDataset& dataset);

/// (inter - intra) / max(intra, inter); 0 when both are (numerically) zero.
double silhouette_combine(double intra, double inter);
inline double kulcq_utterance(double intra, double inter) { return silhouette_combine(intra, inter); }

struct SilhouetteTerms {
    double intra = 0.0;
    double inter = 0.0;
    double score = 0.0;
};

/// Precomputed per-cluster sums of unit-normalized embeddings. Mean cosine
/// distance from x to a cluster is 1 - x̂·(sum / size), so a full Silhouette
/// pass costs O(N * clusters * dim).
class SilhouetteIndex {
public:
    explicit SilhouetteIndex(const BoundDataset& dataset);

    /// Throws Error(single_cluster) when fewer than two clusters exist.
    SilhouetteTerms evaluate(std::size_t utterance) const;

private:
    const BoundDataset* dataset_;
    std::vector<double> unit_;  // normalized embeddings, utterance-major
    std::vector<double> sums_;  // per-cluster sums of unit_ rows
};

/// Convenience wrapper building a SilhouetteIndex for one utterance.
double silhouette_utterance(std::size_t utterance, const BoundDataset& dataset);

struct ScoreRecord {
    std::string utterance_id;
    std::string cluster_id;
    double intra = 0.0;
    double inter = 0.0;
    double score = 0.0;
};

struct ClusterScore {
    std::string cluster_id;
    std::size_t size = 0;
    double score = 0.0;
    std::size_t rank = 0;  // 1 = best
};

struct ScoreConfig {
    KeywordConfig keywords;
    DistanceKind distance = DistanceKind::cosine;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    /// Free-form (name, value) pairs echoed into report config snapshots,
    /// e.g. input paths.
    std::vector<std::pair<std::string, std::string>> inputs;
};

struct ScoreReport {
    Metric metric = Metric::kulcq;
    std::vector<ScoreRecord> utterance_records;  // corpus order
    std::vector<ClusterScore> cluster_scores;    // ascending cluster ID
    double dataset_score = 0.0;
    std::size_t n = 0;
    std::size_t statistical_k = 0;
    DistanceKind distance = DistanceKind::cosine;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs;

    /// Cluster scores sorted by rank.
    std::vector<ClusterScore> ranking() const;
    const ClusterScore* cluster(std::string_view id) const;
};

/// Scores a dataset; keyword sets are extracted from config.keywords.
ScoreReport score_dataset(const BoundDataset& dataset, Metric metric, const ScoreConfig& config);

/// Same, with per-utterance keyword sets supplied (corpus order).
ScoreReport score_dataset(const BoundDataset& dataset, Metric metric, const ScoreConfig& config,
                          std::span<const KeywordSet> keyword_sets);

/// Runs fn(i) for i in [0, count) over `jobs` worker threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace kulcq
