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

#include "kulcq/experiments.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "kulcq/error.hpp"

namespace kulcq {

namespace {

// Conversions on raw engine output so results do not depend on the standard
// library's distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
}

double standard_normal(std::mt19937_64& rng) {
    double u1;
    do {
        u1 = uniform01(rng);
    } while (u1 == 0.0);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::range, fmt::format("perturbation probability {} is outside [0, 1]", p));
    }
}

double sample_stddev(std::span<const double> values, double mu) {
    if (values.size() < 2) return 0.0;
    CompensatedSum s;
    for (double v : values) s.add((v - mu) * (v - mu));
    return std::sqrt(s.value() / static_cast<double>(values.size() - 1));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t base_seed, double p, std::size_t repeat) {
    return base_seed ^ splitmix64(std::bit_cast<std::uint64_t>(p) ^ splitmix64(repeat));
}

Clustering perturb_labels(const Clustering& clustering, const PerturbationConfig& config) {
    check_probability(config.p);
    if (clustering.cluster_count() < 2) {
        throw Error(ErrorCode::single_cluster, "perturbation needs at least 2 clusters");
    }
    std::vector<std::string> ids;
    for (const auto& [id, members] : clustering.clusters()) ids.push_back(id);

    std::mt19937_64 rng(config.seed);
    std::map<std::string, std::string> assignment;
    for (const auto& [utterance, cluster] : clustering.assignment()) {
        // Draw both numbers unconditionally so one utterance's outcome does
        // not shift the stream for the next.
        const double u = uniform01(rng);
        const std::size_t pick = uniform_index(rng, ids.size() - 1);
        if (u < config.p) {
            const auto own = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), cluster) - ids.begin());
            assignment.emplace(utterance, ids[pick < own ? pick : pick + 1]);
        } else {
            assignment.emplace(utterance, cluster);
        }
    }
    return Clustering(std::move(assignment));
}

double SweepReport::drop(Metric metric) const {
    const auto m = means(metric);
    return m.empty() ? 0.0 : m.front() - m.back();
}

std::vector<double> SweepReport::means(Metric metric) const {
    std::vector<double> out;
    for (const auto& s : summaries) {
        if (s.metric == metric) out.push_back(s.mean);
    }
    return out;
}

SweepReport run_sweep(const BoundDataset& dataset, const SweepConfig& config) {
    if (config.p_grid.empty()) throw Error(ErrorCode::invalid_argument, "the p grid is empty");
    if (config.repeats == 0) throw Error(ErrorCode::invalid_argument, "repeats must be positive");
    if (config.metrics.empty()) throw Error(ErrorCode::invalid_argument, "no metric selected");
    for (double p : config.p_grid) check_probability(p);

    const bool needs_keywords = std::find(config.metrics.begin(), config.metrics.end(), Metric::kulcq) != config.metrics.end();
    std::vector<KeywordSet> keyword_sets;
    if (needs_keywords) keyword_sets = dataset_keyword_sets(dataset.corpus(), config.scoring.keywords);

    const std::size_t metric_count = config.metrics.size();
    const std::size_t cells = config.p_grid.size() * config.repeats;
    SweepReport report;
    report.config = config;
    report.records.resize(cells * metric_count);

    ScoreConfig cell_scoring = config.scoring;
    cell_scoring.jobs = 1;
    parallel_for(cells, config.scoring.jobs, [&](std::size_t cell) {
        const std::size_t pi = cell / config.repeats;
        const std::size_t repeat = cell % config.repeats;
        const double p = config.p_grid[pi];
        const std::uint64_t seed = cell_seed(config.base_seed, p, repeat);
        const auto perturbed = dataset.with_clustering(perturb_labels(dataset.clustering(), {p, seed}));
        for (std::size_t m = 0; m < metric_count; ++m) {
            const Metric metric = config.metrics[m];
            const auto scored = score_dataset(perturbed, metric, cell_scoring, keyword_sets);
            report.records[cell * metric_count + m] = {p, repeat, metric, scored.dataset_score};
        }
    });

    std::vector<double> values;
    for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
        for (std::size_t m = 0; m < metric_count; ++m) {
            values.clear();
            for (std::size_t r = 0; r < config.repeats; ++r) {
                values.push_back(report.records[(pi * config.repeats + r) * metric_count + m].score);
            }
            const double mu = mean(values);
            report.summaries.push_back({config.p_grid[pi], config.metrics[m], mu, sample_stddev(values, mu)});
        }
    }
    return report;
}

InspectionReport inspect_cluster(const BoundDataset& dataset, const std::string& cluster_id, const ScoreConfig& config) {
    const auto index = dataset.cluster_index(cluster_id);
    if (!index) throw Error(ErrorCode::unknown_cluster, fmt::format("unknown cluster \"{}\"", cluster_id));

    const auto keyword_sets = dataset_keyword_sets(dataset.corpus(), config.keywords);
    const auto kulcq = score_dataset(dataset, Metric::kulcq, config, keyword_sets);
    const auto silhouette = score_dataset(dataset, Metric::silhouette, config, keyword_sets);

    InspectionReport out;
    out.cluster_id = cluster_id;
    out.member_count = dataset.members(*index).size();
    out.cluster_count = dataset.cluster_count();
    out.kulcq = kulcq.cluster_scores[*index].score;
    out.kulcq_rank = kulcq.cluster_scores[*index].rank;
    out.silhouette = silhouette.cluster_scores[*index].score;
    out.silhouette_rank = silhouette.cluster_scores[*index].rank;

    std::vector<const KeywordSet*> members;
    for (std::size_t u : dataset.members(*index)) members.push_back(&keyword_sets[u]);
    out.profile = cluster_keyword_profile(cluster_id, members, config.keywords.n);

    for (std::size_t u : dataset.members(*index)) {
        if (out.samples.size() == 5) break;
        out.samples.push_back(dataset.corpus()[u]);
    }
    return out;
}

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::size_t kSyllables = 14 * 5;
constexpr std::size_t kVocabularySize = 8;
constexpr std::array<std::string_view, 6> kFillers = {"the", "and", "to", "my", "is", "for"};

std::string syllables(std::size_t value, std::size_t width) {
    std::string out;
    for (std::size_t i = 0; i < width; ++i) {
        const std::size_t s = value % kSyllables;
        value /= kSyllables;
        out += kConsonants[s / kVowels.size()];
        out += kVowels[s % kVowels.size()];
    }
    return out;
}

}  // namespace

Fixture synthesize_fixture(const FixtureConfig& config) {
    if (config.n_clusters < 2) throw Error(ErrorCode::invalid_argument, "n_clusters must be at least 2");
    if (config.per_cluster < 1) throw Error(ErrorCode::invalid_argument, "per_cluster must be at least 1");
    if (config.dim < 2) throw Error(ErrorCode::invalid_argument, "dim must be at least 2");
    if (!(config.separation > 0.0) || !std::isfinite(config.separation)) {
        throw Error(ErrorCode::invalid_argument, "separation must be a positive finite number");
    }

    std::mt19937_64 rng(config.seed);
    const std::size_t dim = config.dim;

    std::vector<std::vector<double>> directions(config.n_clusters, std::vector<double>(dim, 0.0));
    for (std::size_t c = 0; c < config.n_clusters; ++c) {
        if (config.n_clusters <= dim) {
            directions[c][c] = 1.0;
            continue;
        }
        double norm = 0.0;
        while (norm < 1e-6) {
            for (double& x : directions[c]) x = standard_normal(rng);
            norm = std::sqrt(std::inner_product(directions[c].begin(), directions[c].end(), directions[c].begin(), 0.0));
        }
        for (double& x : directions[c]) x /= norm;
    }

    std::size_t width = 1;
    for (std::size_t cap = kSyllables; cap < config.n_clusters; cap *= kSyllables) ++width;

    const double noise = 1.0 / (config.separation * std::sqrt(static_cast<double>(dim)));
    std::vector<Utterance> utterances;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> vectors;
    std::map<std::string, std::string> assignment;
    Fixture out;

    for (std::size_t c = 0; c < config.n_clusters; ++c) {
        std::vector<std::string> vocabulary;
        for (std::size_t w = 0; w < kVocabularySize; ++w) vocabulary.push_back(syllables(c, width) + syllables(w, 1));
        const std::string label = fmt::format("cluster-{}", c);

        for (std::size_t k = 0; k < config.per_cluster; ++k) {
            const std::string id = fmt::format("c{}-u{}", c, k);

            std::vector<double> v(dim);
            double norm = 0.0;
            while (norm < 1e-9) {
                for (std::size_t d = 0; d < dim; ++d) v[d] = directions[c][d] + noise * standard_normal(rng);
                norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
            }

            std::vector<std::string> words = vocabulary;
            const std::size_t content = 3 + uniform_index(rng, 3);
            for (std::size_t i = 0; i < content; ++i) {
                std::swap(words[i], words[i + uniform_index(rng, words.size() - i)]);
            }
            std::string text;
            for (std::size_t i = 0; i < content; ++i) {
                if (uniform01(rng) < 0.5) {
                    if (!text.empty()) text += ' ';
                    text += kFillers[uniform_index(rng, kFillers.size())];
                }
                if (!text.empty()) text += ' ';
                text += words[i];
            }

            KeywordSet keywords;
            keywords.insert(Keyword::parse(words[0]));
            keywords.insert(Keyword::parse(words[1]));

            utterances.push_back({id, text, label});
            ids.push_back(id);
            vectors.push_back(std::move(v));
            assignment.emplace(id, label);
            out.keywords.emplace(id, std::move(keywords));
        }
    }
    out.corpus = Corpus(std::move(utterances));
    out.embeddings = EmbeddingSet(std::move(ids), std::move(vectors));
    out.clustering = Clustering(std::move(assignment));
    return out;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    write_corpus_jsonl(fixture.corpus, dir / "utterances.jsonl");
    write_embeddings_jsonl(fixture.corpus, fixture.embeddings, dir / "embeddings.jsonl");
    write_clustering_jsonl(fixture.corpus, fixture.clustering, dir / "clustering.jsonl");
    std::vector<std::pair<std::string, KeywordSet>> rows;
    for (const Utterance& u : fixture.corpus.utterances()) {
        if (auto it = fixture.keywords.find(u.id); it != fixture.keywords.end()) rows.emplace_back(u.id, it->second);
    }
    write_precomputed_keywords(rows, dir / "keywords.jsonl");
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "spearman needs two equally sized samples of at least 2 values");
    }
    auto ranks = [](std::span<const double> v) {
        std::vector<std::size_t> order(v.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < order.size();) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace kulcq
