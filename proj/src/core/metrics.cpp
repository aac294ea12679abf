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

#include "kulcq/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "kulcq/error.hpp"

namespace kulcq {

std::string_view metric_name(Metric metric) noexcept {
    return metric == Metric::kulcq ? "kulcq" : "silhouette";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
    if (name == "kulcq") return Metric::kulcq;
    if (name == "silhouette") return Metric::silhouette;
    return std::nullopt;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    CompensatedSum s;
    for (double v : values) s.add(v);
    return s.value() / static_cast<double>(values.size());
}

namespace {

double dot(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double clamp_distance(double d) { return std::clamp(d, 0.0, 2.0); }

// Distance to a centroid; a centroid whose members cancel out exactly has no
// direction and is treated as orthogonal to everything.
double centroid_distance(std::span<const double> x, std::span<const double> centroid) {
    const double cc = dot(centroid, centroid);
    if (cc == 0.0) return 1.0;
    return clamp_distance(1.0 - dot(x, centroid) / (std::sqrt(dot(x, x)) * std::sqrt(cc)));
}

void require_two_clusters(const BoundDataset& dataset) {
    if (dataset.cluster_count() < 2) {
        throw Error(ErrorCode::single_cluster,
                    fmt::format("at least 2 clusters are required, found {}", dataset.cluster_count()));
    }
}

}  // namespace

double cosine_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::length_mismatch, fmt::format("vector lengths differ: {} vs {}", u.size(), v.size()));
    }
    const double uu = dot(u, u);
    const double vv = dot(v, v);
    if (uu == 0.0 || vv == 0.0) {
        throw Error(ErrorCode::zero_vector, "cosine distance is undefined for a zero vector");
    }
    return clamp_distance(1.0 - dot(u, v) / (std::sqrt(uu) * std::sqrt(vv)));
}

double centroid_weight(const ClusterKeywordProfile& profile, const KeywordSet& keywords) {
    if (profile.top_keywords.empty()) return 0.0;
    std::size_t shared = 0;
    for (const auto& r : profile.top_keywords) shared += keywords.contains(r.keyword) ? 1 : 0;
    return static_cast<double>(shared) / static_cast<double>(profile.top_keywords.size());
}

CentroidTable compute_centroids(const BoundDataset& dataset, std::span<const ClusterKeywordProfile> profiles,
                                std::span<const KeywordSet> keyword_sets) {
    if (profiles.size() != dataset.cluster_count()) {
        throw Error(ErrorCode::internal, "keyword profiles do not cover every cluster");
    }
    const std::size_t dim = dataset.dim();
    CentroidTable table;
    table.dim = dim;
    table.centroids.assign(dataset.cluster_count() * dim, 0.0);
    table.member_weights.assign(dataset.size(), 0.0);
    table.fallback.assign(dataset.cluster_count(), false);

    std::vector<CompensatedSum> acc(dim);
    for (std::size_t c = 0; c < dataset.cluster_count(); ++c) {
        const auto members = dataset.members(c);
        if (members.empty()) {
            throw Error(ErrorCode::internal, fmt::format("cluster \"{}\" is empty", dataset.cluster_id(c)));
        }
        CompensatedSum total_weight;
        for (std::size_t u : members) {
            const double w = centroid_weight(profiles[c], keyword_sets[u]);
            table.member_weights[u] = w;
            total_weight.add(w);
        }
        const bool weighted = total_weight.value() > 0.0;
        table.fallback[c] = !weighted;
        const double denom = weighted ? total_weight.value() : static_cast<double>(members.size());

        std::fill(acc.begin(), acc.end(), CompensatedSum{});
        for (std::size_t u : members) {
            const double w = weighted ? table.member_weights[u] : 1.0;
            if (w == 0.0) continue;
            const auto e = dataset.embedding(u);
            for (std::size_t d = 0; d < dim; ++d) acc[d].add(w * e[d]);
        }
        for (std::size_t d = 0; d < dim; ++d) table.centroids[c * dim + d] = acc[d].value() / denom;
    }
    return table;
}

InterClusterWeights compute_inter_weights(std::span<const ClusterKeywordProfile> profiles) {
    InterClusterWeights w;
    w.clusters = profiles.size();
    w.weights.assign(w.clusters * w.clusters, 1.0);
    w.overlaps.assign(w.clusters * w.clusters, 0);
    for (std::size_t i = 0; i < w.clusters; ++i) {
        for (std::size_t y = i + 1; y < w.clusters; ++y) {
            const std::size_t overlap = keyword_overlap(profiles[i], profiles[y]);
            const double weight = overlap == 0 ? 1.0 : 1.0 / static_cast<double>(overlap);
            w.overlaps[i * w.clusters + y] = w.overlaps[y * w.clusters + i] = overlap;
            w.weights[i * w.clusters + y] = w.weights[y * w.clusters + i] = weight;
        }
    }
    return w;
}

double kulcq_intra(std::size_t cluster, const CentroidTable& centroids, const BoundDataset& dataset) {
    const auto members = dataset.members(cluster);
    CompensatedSum sum;
    for (std::size_t u : members) sum.add(centroid_distance(dataset.embedding(u), centroids.centroid(cluster)));
    return sum.value() / static_cast<double>(members.size());
}

double kulcq_inter(std::size_t utterance, std::size_t home, const CentroidTable& centroids,
                   const InterClusterWeights& weights, const BoundDataset& dataset) {
    require_two_clusters(dataset);
    const auto x = dataset.embedding(utterance);
    CompensatedSum sum;
    for (std::size_t i = 0; i < dataset.cluster_count(); ++i) {
        if (i == home) continue;
        sum.add(weights.at(i, home) * centroid_distance(x, centroids.centroid(i)));
    }
    return sum.value();
}

double silhouette_combine(double intra, double inter) {
    const double scale = std::max(intra, inter);
    if (scale <= kDegenerateScale) return 0.0;
    return std::clamp((inter - intra) / scale, -1.0, 1.0);
}

SilhouetteIndex::SilhouetteIndex(const BoundDataset& dataset) : dataset_(&dataset) {
    const std::size_t dim = dataset.dim();
    unit_.resize(dataset.size() * dim);
    sums_.assign(dataset.cluster_count() * dim, 0.0);
    for (std::size_t u = 0; u < dataset.size(); ++u) {
        const auto e = dataset.embedding(u);
        const double norm = std::sqrt(dot(e, e));
        if (norm == 0.0) throw Error(ErrorCode::zero_vector, "cosine distance is undefined for a zero vector");
        for (std::size_t d = 0; d < dim; ++d) unit_[u * dim + d] = e[d] / norm;
    }
    std::vector<CompensatedSum> acc(dim);
    for (std::size_t c = 0; c < dataset.cluster_count(); ++c) {
        std::fill(acc.begin(), acc.end(), CompensatedSum{});
        for (std::size_t u : dataset.members(c)) {
            for (std::size_t d = 0; d < dim; ++d) acc[d].add(unit_[u * dim + d]);
        }
        for (std::size_t d = 0; d < dim; ++d) sums_[c * dim + d] = acc[d].value();
    }
}

SilhouetteTerms SilhouetteIndex::evaluate(std::size_t utterance) const {
    const BoundDataset& ds = *dataset_;
    require_two_clusters(ds);
    const std::size_t dim = ds.dim();
    const std::span<const double> x(unit_.data() + utterance * dim, dim);
    const std::size_t home = ds.cluster_of(utterance);

    SilhouetteTerms t;
    t.inter = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < ds.cluster_count(); ++c) {
        if (c == home) continue;
        const double size = static_cast<double>(ds.members(c).size());
        const double d = clamp_distance(1.0 - dot(x, {sums_.data() + c * dim, dim}) / size);
        t.inter = std::min(t.inter, d);
    }
    const std::size_t own = ds.members(home).size();
    if (own == 1) {
        t.intra = 0.0;
        t.score = 0.0;
        return t;
    }
    const double similarity = dot(x, {sums_.data() + home * dim, dim}) - dot(x, x);
    t.intra = clamp_distance(1.0 - similarity / static_cast<double>(own - 1));
    t.score = silhouette_combine(t.intra, t.inter);
    return t;
}

double silhouette_utterance(std::size_t utterance, const BoundDataset& dataset) {
    return SilhouetteIndex(dataset).evaluate(utterance).score;
}

std::vector<ClusterScore> ScoreReport::ranking() const {
    std::vector<ClusterScore> out = cluster_scores;
    std::sort(out.begin(), out.end(), [](const ClusterScore& a, const ClusterScore& b) { return a.rank < b.rank; });
    return out;
}

const ClusterScore* ScoreReport::cluster(std::string_view id) const {
    for (const auto& c : cluster_scores) {
        if (c.cluster_id == id) return &c;
    }
    return nullptr;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(jobs == 0 ? 1 : jobs, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

ScoreReport score_dataset(const BoundDataset& dataset, Metric metric, const ScoreConfig& config) {
    if (metric == Metric::silhouette) return score_dataset(dataset, metric, config, {});
    const auto sets = dataset_keyword_sets(dataset.corpus(), config.keywords);
    return score_dataset(dataset, metric, config, sets);
}

ScoreReport score_dataset(const BoundDataset& dataset, Metric metric, const ScoreConfig& config,
                          std::span<const KeywordSet> keyword_sets) {
    require_two_clusters(dataset);

    ScoreReport report;
    report.metric = metric;
    report.n = config.keywords.n;
    report.statistical_k = config.keywords.statistical_k;
    report.distance = config.distance;
    report.seed = config.seed;
    report.inputs = config.inputs;
    report.utterance_records.resize(dataset.size());

    auto fill_ids = [&](std::size_t u) {
        auto& r = report.utterance_records[u];
        r.utterance_id = dataset.corpus()[u].id;
        r.cluster_id = dataset.cluster_id(dataset.cluster_of(u));
    };

    if (metric == Metric::kulcq) {
        if (keyword_sets.size() != dataset.size()) {
            throw Error(ErrorCode::internal, "keyword sets do not match the dataset size");
        }
        const auto profiles = dataset_profiles(dataset, keyword_sets, config.keywords.n);
        const auto centroids = compute_centroids(dataset, profiles, keyword_sets);
        const auto weights = compute_inter_weights(profiles);
        std::vector<double> intra(dataset.cluster_count());
        parallel_for(dataset.cluster_count(), config.jobs,
                     [&](std::size_t c) { intra[c] = kulcq_intra(c, centroids, dataset); });
        parallel_for(dataset.size(), config.jobs, [&](std::size_t u) {
            fill_ids(u);
            auto& r = report.utterance_records[u];
            const std::size_t home = dataset.cluster_of(u);
            r.intra = intra[home];
            r.inter = kulcq_inter(u, home, centroids, weights, dataset);
            r.score = kulcq_utterance(r.intra, r.inter);
        });
    } else {
        const SilhouetteIndex index(dataset);
        parallel_for(dataset.size(), config.jobs, [&](std::size_t u) {
            fill_ids(u);
            auto& r = report.utterance_records[u];
            const auto t = index.evaluate(u);
            r.intra = t.intra;
            r.inter = t.inter;
            r.score = t.score;
        });
    }

    std::vector<double> cluster_means(dataset.cluster_count());
    std::vector<double> member_scores;
    for (std::size_t c = 0; c < dataset.cluster_count(); ++c) {
        member_scores.clear();
        for (std::size_t u : dataset.members(c)) member_scores.push_back(report.utterance_records[u].score);
        cluster_means[c] = mean(member_scores);
        report.cluster_scores.push_back({dataset.cluster_id(c), dataset.members(c).size(), cluster_means[c], 0});
    }
    report.dataset_score = mean(cluster_means);

    std::vector<std::size_t> order(dataset.cluster_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cluster_means[a] != cluster_means[b]) return cluster_means[a] > cluster_means[b];
        return dataset.cluster_id(a) < dataset.cluster_id(b);
    });
    for (std::size_t r = 0; r < order.size(); ++r) report.cluster_scores[order[r]].rank = r + 1;
    return report;
}

}  // namespace kulcq
