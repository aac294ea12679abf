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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "kulcq/error.hpp"
#include "test_support.hpp"

namespace kulcq {
namespace {

KeywordSet set_of(std::initializer_list<const char*> words) {
    KeywordSet out;
    for (const char* w : words) out.insert(Keyword::parse(w));
    return out;
}

struct Built {
    BoundDataset dataset;
    std::vector<KeywordSet> keywords;
};

// Points listed as (cluster, vector, keywords).
struct Point {
    std::string cluster;
    std::vector<double> vector;
    KeywordSet keywords;
};

Built build(const std::vector<Point>& points) {
    std::vector<Utterance> utterances;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> vectors;
    std::map<std::string, std::string> assignment;
    std::vector<KeywordSet> keywords;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string id = "u" + std::to_string(i);
        utterances.push_back({id, "text " + id, std::nullopt});
        ids.push_back(id);
        vectors.push_back(points[i].vector);
        assignment.emplace(id, points[i].cluster);
        keywords.push_back(points[i].keywords);
    }
    return {bind(Corpus(std::move(utterances)), EmbeddingSet(std::move(ids), std::move(vectors)),
                 Clustering(std::move(assignment))),
            std::move(keywords)};
}

ScoreConfig config_n(std::size_t n) {
    ScoreConfig c;
    c.keywords.n = n;
    return c;
}

const double kHalfDiagonal = 1.0 - 1.0 / std::numbers::sqrt2;  // D([1,1],[1,0])

TEST(CosineDistance, Examples) {
    const std::vector<double> e1 = {1, 0}, e2 = {0, 1}, d = {1, 1};
    EXPECT_DOUBLE_EQ(cosine_distance(e1, e1), 0.0);
    EXPECT_DOUBLE_EQ(cosine_distance(e1, e2), 1.0);
    EXPECT_NEAR(cosine_distance(d, e1), 0.29289321881345254, 1e-15);
    EXPECT_NEAR(cosine_distance(d, e1), kHalfDiagonal, 1e-15);
    EXPECT_DOUBLE_EQ(cosine_distance(e1, std::vector<double>{-2, 0}), 2.0);
}

TEST(CosineDistance, Errors) {
    const std::vector<double> e1 = {1, 0}, zero = {0, 0}, three = {1, 0, 0};
    try {
        cosine_distance(e1, zero);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::zero_vector);
    }
    try {
        cosine_distance(e1, three);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::length_mismatch);
    }
}

TEST(CosineDistance, SymmetricAndSelfZero) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 500; ++i) {
        std::vector<double> u(7), v(7);
        for (auto& x : u) x = normal(rng);
        for (auto& x : v) x = normal(rng);
        EXPECT_EQ(cosine_distance(u, v), cosine_distance(v, u));
        EXPECT_NEAR(cosine_distance(u, u), 0.0, 1e-12);
        EXPECT_GE(cosine_distance(u, v), 0.0);
        EXPECT_LE(cosine_distance(u, v), 2.0);
    }
}

TEST(ComputeCentroids, WeightedAverage) {
    // Profile of cluster A is {a, b}: u0 has both (w = 1), u1 has a (w = 0.5).
    const auto built = build({{"A", {1, 0}, set_of({"a", "b"})},
                              {"A", {0, 1}, set_of({"a"})},
                              {"B", {-1, -1}, set_of({"z"})}});
    const auto profiles = dataset_profiles(built.dataset, built.keywords, 10);
    const auto table = compute_centroids(built.dataset, profiles, built.keywords);
    EXPECT_DOUBLE_EQ(table.member_weights[0], 1.0);
    EXPECT_DOUBLE_EQ(table.member_weights[1], 0.5);
    EXPECT_NEAR(table.centroid(0)[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(table.centroid(0)[1], 1.0 / 3.0, 1e-15);
    EXPECT_FALSE(table.fallback[0]);
    // Singleton with nonzero weight: centroid is the point itself.
    EXPECT_DOUBLE_EQ(table.centroid(1)[0], -1.0);
    EXPECT_DOUBLE_EQ(table.centroid(1)[1], -1.0);
}

TEST(ComputeCentroids, ZeroWeightsFallBackToMean) {
    const auto built = build({{"A", {1, 0}, {}}, {"A", {0, 3}, {}}, {"B", {1, 1}, {}}});
    const auto profiles = dataset_profiles(built.dataset, built.keywords, 10);
    const auto table = compute_centroids(built.dataset, profiles, built.keywords);
    EXPECT_TRUE(table.fallback[0]);
    EXPECT_DOUBLE_EQ(table.centroid(0)[0], 0.5);
    EXPECT_DOUBLE_EQ(table.centroid(0)[1], 1.5);
}

TEST(KulcqIntra, Examples) {
    const auto built = build({{"A", {2, 1}, set_of({"a"})},
                              {"A", {2, 1}, set_of({"a"})},
                              {"B", {1, 0}, set_of({"b"})},
                              {"B", {0, 1}, set_of({"b"})},
                              {"C", {3, 4}, set_of({"c"})}});
    const auto profiles = dataset_profiles(built.dataset, built.keywords, 10);
    const auto table = compute_centroids(built.dataset, profiles, built.keywords);
    EXPECT_NEAR(kulcq_intra(0, table, built.dataset), 0.0, 1e-15);
    EXPECT_NEAR(table.centroid(1)[0], 0.5, 1e-15);
    EXPECT_NEAR(table.centroid(1)[1], 0.5, 1e-15);
    EXPECT_NEAR(kulcq_intra(1, table, built.dataset), kHalfDiagonal, 1e-12);
    EXPECT_NEAR(kulcq_intra(2, table, built.dataset), 0.0, 1e-15);
}

TEST(KulcqInter, TwoClustersNoOverlap) {
    const auto built = build({{"A", {1, 0}, set_of({"a"})}, {"B", {0, 1}, set_of({"b"})}});
    const auto profiles = dataset_profiles(built.dataset, built.keywords, 10);
    const auto table = compute_centroids(built.dataset, profiles, built.keywords);
    const auto weights = compute_inter_weights(profiles);
    EXPECT_EQ(weights.at(0, 1), 1.0);
    EXPECT_NEAR(kulcq_inter(0, 0, table, weights, built.dataset), 1.0, 1e-15);
}

TEST(KulcqInter, WeightedSumIsNotRenormalized) {
    // x = e1; other centroids at 60 degrees (D = 0.5) and 90 degrees (D = 1),
    // with keyword overlaps 2 and 4.
    const auto built = build({{"A", {1, 0}, {}}, {"B", {0.5, std::sqrt(3.0) / 2}, {}}, {"C", {0, 1}, {}}});
    CentroidTable table;
    table.dim = 2;
    table.centroids = {1, 0, 0.5, std::sqrt(3.0) / 2, 0, 1};
    InterClusterWeights w;
    w.clusters = 3;
    w.weights = {1, 0.5, 0.25, 0.5, 1, 1, 0.25, 1, 1};
    w.overlaps = {0, 2, 4, 2, 0, 0, 4, 0, 0};
    EXPECT_NEAR(kulcq_inter(0, 0, table, w, built.dataset), 0.5 / 2 + 1.0 / 4, 1e-12);
}

TEST(KulcqInter, AtEveryOtherCentroid) {
    const auto built = build({{"A", {1, 1}, {}}, {"B", {2, 2}, {}}, {"C", {5, 5}, {}}});
    const auto profiles = dataset_profiles(built.dataset, built.keywords, 10);
    const auto table = compute_centroids(built.dataset, profiles, built.keywords);
    EXPECT_NEAR(kulcq_inter(0, 0, table, compute_inter_weights(profiles), built.dataset), 0.0, 1e-12);
}

TEST(KulcqInter, SingleClusterIsAnError) {
    const auto built = build({{"A", {1, 0}, {}}, {"A", {0, 1}, {}}});
    const auto profiles = dataset_profiles(built.dataset, built.keywords, 10);
    const auto table = compute_centroids(built.dataset, profiles, built.keywords);
    try {
        kulcq_inter(0, 0, table, compute_inter_weights(profiles), built.dataset);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::single_cluster);
    }
}

TEST(InterWeights, ReciprocalOverlapAndZeroOverlap) {
    const auto built = build({{"A", {1, 0}, set_of({"a", "b", "c"})},
                              {"B", {0, 1}, set_of({"a", "b", "d"})},
                              {"C", {1, 1}, set_of({"a", "e"})},
                              {"D", {1, 2}, set_of({"z"})}});
    const auto w = compute_inter_weights(dataset_profiles(built.dataset, built.keywords, 10));
    EXPECT_EQ(w.overlap(0, 1), 2u);
    EXPECT_DOUBLE_EQ(w.at(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(w.at(0, 2), 1.0);
    EXPECT_EQ(w.overlap(0, 3), 0u);
    EXPECT_DOUBLE_EQ(w.at(3, 0), 1.0);
}

TEST(KulcqUtterance, Examples) {
    EXPECT_DOUBLE_EQ(kulcq_utterance(0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(kulcq_utterance(1.0, 0.0), -1.0);
    EXPECT_NEAR(kulcq_utterance(0.2, 0.6), 2.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(kulcq_utterance(0.0, 0.0), 0.0);
}

TEST(Silhouette, SingletonScoresZero) {
    const auto built = build({{"A", {1, 0}, {}}, {"B", {0, 1}, {}}, {"B", {1, 1}, {}}});
    EXPECT_EQ(silhouette_utterance(0, built.dataset), 0.0);
}

TEST(Silhouette, DuplicatedPointsScoreOne) {
    const auto built = build({{"A", {1, 0}, {}}, {"A", {1, 0}, {}}, {"B", {0, 1}, {}}, {"B", {0, 1}, {}}});
    for (std::size_t u = 0; u < 4; ++u) EXPECT_NEAR(silhouette_utterance(u, built.dataset), 1.0, 1e-12);
}

TEST(Silhouette, SingleClusterIsAnError) {
    const auto built = build({{"A", {1, 0}, {}}, {"A", {0, 1}, {}}});
    EXPECT_THROW(silhouette_utterance(0, built.dataset), Error);
    EXPECT_THROW(score_dataset(built.dataset, Metric::silhouette, {}), Error);
}

TEST(Silhouette, MatchesBruteForceOn30Points) {
    std::mt19937_64 rng(30);
    const auto inst = testing::random_instance(rng, 30, 3, 5);
    const auto ds = bind(inst.corpus, inst.embeddings, inst.clustering);
    const auto oracle = testing::brute_force_silhouette(inst.points, inst.labels);
    const SilhouetteIndex index(ds);
    for (std::size_t u = 0; u < ds.size(); ++u) EXPECT_NEAR(index.evaluate(u).score, oracle[u], 1e-9);
}

TEST(ScoreDataset, PerfectlySeparatedDuplicates) {
    const auto built = build({{"A", {1, 0}, set_of({"credit card"})},
                              {"A", {1, 0}, set_of({"credit card"})},
                              {"B", {0, 1}, set_of({"currency"})},
                              {"B", {0, 1}, set_of({"currency"})}});
    for (Metric m : {Metric::kulcq, Metric::silhouette}) {
        const auto r = score_dataset(built.dataset, m, {}, built.keywords);
        EXPECT_NEAR(r.dataset_score, 1.0, 1e-12) << metric_name(m);
        for (const auto& rec : r.utterance_records) EXPECT_NEAR(rec.score, 1.0, 1e-12);
    }
}

TEST(ScoreDataset, IdenticalProfilesAndCentroidsScoreNonPositive) {
    // Profiles {a, b} in both clusters -> w' = 1/2, and identical centroids,
    // so b(x) = a / 2 and every score is -0.5.
    const auto built = build({{"A", {1, 0}, set_of({"a", "b"})},
                              {"A", {0, 1}, set_of({"a", "b"})},
                              {"B", {1, 0}, set_of({"a", "b"})},
                              {"B", {0, 1}, set_of({"a", "b"})}});
    const auto r = score_dataset(built.dataset, Metric::kulcq, {}, built.keywords);
    EXPECT_LE(r.dataset_score, 0.0);
    EXPECT_NEAR(r.dataset_score, -0.5, 1e-12);
}

TEST(ScoreDataset, AggregationAndRanking) {
    const auto built = build({{"A", {1, 0}, {}},
                              {"A", {0.9, 0.1}, {}},
                              {"B", {0, 1}, {}},
                              {"B", {0.6, 0.4}, {}},
                              {"C", {-1, 0.2}, {}}});
    const auto r = score_dataset(built.dataset, Metric::silhouette, {}, built.keywords);
    double total = 0;
    for (const auto& c : r.cluster_scores) {
        double sum = 0;
        std::size_t count = 0;
        for (const auto& rec : r.utterance_records) {
            if (rec.cluster_id == c.cluster_id) {
                sum += rec.score;
                ++count;
            }
        }
        EXPECT_EQ(count, c.size);
        EXPECT_NEAR(c.score, sum / static_cast<double>(count), 1e-15);
        total += c.score;
    }
    EXPECT_NEAR(r.dataset_score, total / 3.0, 1e-15);
    const auto ranking = r.ranking();
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        EXPECT_EQ(ranking[i].rank, i + 1);
        if (i) EXPECT_GE(ranking[i - 1].score, ranking[i].score);
    }
}

TEST(ScoreDataset, ExtractsKeywordsFromText) {
    std::vector<Utterance> utterances = {{"u1", "credit card declined", "A"},
                                         {"u2", "my credit card is blocked", "A"},
                                         {"u3", "which currencies are supported", "B"},
                                         {"u4", "supported currencies list", "B"}};
    const Corpus corpus(utterances);
    const EmbeddingSet e({"u1", "u2", "u3", "u4"}, {{1, 0.1}, {1, 0.2}, {0.1, 1}, {0.2, 1}});
    const auto ds = bind(corpus, e, clustering_from_gold(corpus));
    const auto r = score_dataset(ds, Metric::kulcq, {});
    EXPECT_GT(r.dataset_score, 0.9);
    EXPECT_EQ(r.n, 10u);
    EXPECT_EQ(r.statistical_k, 5u);
}

// Fuzzed invariants.

class MetricProperties : public ::testing::Test {
protected:
    std::mt19937_64 rng{424242};

    testing::RandomInstance next() {
        std::uniform_int_distribution<std::size_t> clusters(2, 6), dims(2, 16), extra(0, 60);
        const std::size_t k = clusters(rng);
        return testing::random_instance(rng, k + extra(rng), k, dims(rng));
    }
};

TEST_F(MetricProperties, RangeScaleAndRelabelInvariance) {
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = next();
        const auto ds = bind(inst.corpus, inst.embeddings, inst.clustering);

        std::vector<std::vector<double>> scaled = inst.points;
        for (auto& v : scaled)
            for (double& x : v) x *= 3.7;
        std::vector<std::string> ids;
        for (const auto& u : inst.corpus.utterances()) ids.push_back(u.id);
        const auto scaled_ds = bind(inst.corpus, EmbeddingSet(ids, scaled), inst.clustering);

        // Reverse the order of cluster names: k0 <-> k(K-1), ...
        const std::size_t k = inst.clustering.cluster_count();
        std::map<std::string, std::string> renamed;
        for (const auto& [id, c] : inst.clustering.assignment()) {
            renamed[id] = "z" + std::to_string(k - 1 - std::stoul(c.substr(1)));
        }
        const auto renamed_ds = bind(inst.corpus, inst.embeddings, Clustering(renamed));

        for (Metric m : {Metric::kulcq, Metric::silhouette}) {
            const auto base = score_dataset(ds, m, config_n(3), inst.keywords);
            const auto sc = score_dataset(scaled_ds, m, config_n(3), inst.keywords);
            const auto rn = score_dataset(renamed_ds, m, config_n(3), inst.keywords);
            for (std::size_t u = 0; u < ds.size(); ++u) {
                const double s = base.utterance_records[u].score;
                EXPECT_GE(s, -1.0);
                EXPECT_LE(s, 1.0);
                EXPECT_NEAR(sc.utterance_records[u].score, s, 1e-9);
                EXPECT_NEAR(rn.utterance_records[u].score, s, 1e-12);
            }
            EXPECT_NEAR(rn.dataset_score, base.dataset_score, 1e-12);
        }
    }
}

TEST_F(MetricProperties, IntraSharedAndWeightsSymmetric) {
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = next();
        const auto ds = bind(inst.corpus, inst.embeddings, inst.clustering);
        const auto profiles = dataset_profiles(ds, inst.keywords, 3);
        const auto weights = compute_inter_weights(profiles);
        for (std::size_t i = 0; i < ds.cluster_count(); ++i) {
            for (std::size_t y = 0; y < ds.cluster_count(); ++y) {
                EXPECT_EQ(weights.at(i, y), weights.at(y, i));
                EXPECT_GT(weights.at(i, y), 0.0);
                EXPECT_LE(weights.at(i, y), 1.0);
            }
        }
        const auto r = score_dataset(ds, Metric::kulcq, config_n(3), inst.keywords);
        for (std::size_t u = 0; u < ds.size(); ++u) {
            const auto& first = r.utterance_records[ds.members(ds.cluster_of(u)).front()];
            EXPECT_EQ(r.utterance_records[u].intra, first.intra);
        }
    }
}

TEST_F(MetricProperties, SilhouetteMatchesBruteForce) {
    for (int trial = 0; trial < 40; ++trial) {
        auto inst = next();
        const auto ds = bind(inst.corpus, inst.embeddings, inst.clustering);
        const auto oracle = testing::brute_force_silhouette(inst.points, inst.labels);
        const auto r = score_dataset(ds, Metric::silhouette, {});
        for (std::size_t u = 0; u < ds.size(); ++u) EXPECT_NEAR(r.utterance_records[u].score, oracle[u], 1e-9);
    }
}

TEST_F(MetricProperties, CorpusOrderAndThreadCountDoNotMatter) {
    for (int trial = 0; trial < 20; ++trial) {
        auto inst = next();
        const auto ds = bind(inst.corpus, inst.embeddings, inst.clustering);
        std::vector<std::size_t> order(inst.corpus.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Utterance> shuffled;
        std::vector<KeywordSet> shuffled_keywords;
        for (std::size_t i : order) {
            shuffled.push_back(inst.corpus[i]);
            shuffled_keywords.push_back(inst.keywords[i]);
        }
        const auto shuffled_ds = bind(Corpus(shuffled), inst.embeddings, inst.clustering);
        ScoreConfig threaded = config_n(3);
        threaded.jobs = 4;
        for (Metric m : {Metric::kulcq, Metric::silhouette}) {
            const auto base = score_dataset(ds, m, config_n(3), inst.keywords);
            EXPECT_NEAR(score_dataset(shuffled_ds, m, config_n(3), shuffled_keywords).dataset_score,
                        base.dataset_score, 1e-12);
            EXPECT_EQ(score_dataset(ds, m, threaded, inst.keywords).dataset_score, base.dataset_score);
        }
    }
}

TEST(MetricMonotonicity, SeparationNeverDecreasesKulcq) {
    // Cluster A around e1; cluster B around a direction rotated by `angle`.
    auto dataset_at = [](double angle) {
        std::vector<Point> points;
        const double jitter[] = {-0.05, 0.0, 0.05};
        for (double j : jitter) points.push_back({"A", {std::cos(j), std::sin(j)}, set_of({"card"})});
        for (double j : jitter) {
            points.push_back({"B", {std::cos(angle + j), std::sin(angle + j)}, set_of({"currency"})});
        }
        return build(points);
    };
    double previous = -2.0;
    for (double angle = 0.1; angle <= std::numbers::pi / 2 + 1e-9; angle += 0.05) {
        const auto built = dataset_at(angle);
        const double score = score_dataset(built.dataset, Metric::kulcq, {}, built.keywords).dataset_score;
        EXPECT_GE(score, previous - 1e-12) << "angle " << angle;
        previous = score;
    }
}

}  // namespace
}  // namespace kulcq
