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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kulcq/corpus.hpp"

namespace kulcq {

/// A lowercase unigram or bigram. Bigram tokens are joined by one space.
class Keyword {
public:
    /// Normalizes (ASCII lowercase, whitespace collapsed) and validates the
    /// 1-2 token rule; throws Error(ngram) naming the offending input.
    static Keyword parse(std::string_view raw);

    const std::string& surface() const { return surface_; }
    std::size_t token_count() const;

    auto operator<=>(const Keyword&) const = default;

private:
    explicit Keyword(std::string surface) : surface_(std::move(surface)) {}
    friend class StatisticalExtractor;

    std::string surface_;
};

using KeywordSet = std::set<Keyword>;

struct RankedKeyword {
    Keyword keyword;
    std::size_t frequency = 0;

    bool operator==(const RankedKeyword&) const = default;
};

/// Top-n keywords of one cluster by document frequency.
struct ClusterKeywordProfile {
    std::string cluster_id;
    std::size_t n = 0;
    std::vector<RankedKeyword> top_keywords;

    bool contains(const Keyword& keyword) const;
};

class StopwordList {
public:
    /// The bundled English list (data/stopwords_en.txt mirrors it).
    static std::shared_ptr<const StopwordList> english();

    /// One word per line; blank lines and lines starting with '#' are skipped.
    static std::shared_ptr<const StopwordList> from_file(const std::filesystem::path& path);

    explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    bool contains(std::string_view token) const { return words_.contains(std::string(token)); }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// Lowercased alphanumeric tokens of a text. Bytes >= 0x80 count as word
/// characters so UTF-8 letters stay inside tokens. `segment` increments at
/// every run of punctuation; bigrams never cross a segment boundary.
struct Token {
    std::string text;
    std::size_t position = 0;
    std::size_t segment = 0;
};
std::vector<Token> tokenize(std::string_view text);

/// YAKE-style statistical keyword extractor for single utterances.
///
/// Token score: S(t) = ln(3 + first_position(t)) / tf(t), so frequent and
/// early tokens score low. Candidate score for a unigram or bigram kw made of
/// tokens t_1..t_m:
///
///     S(kw) = prod S(t_i) / (tf(kw) * (1 + sum S(t_i)))
///
/// Lower is better. Stopwords never form unigrams nor bigram edges, and
/// candidates with a digits-only token are skipped. Ties are broken by
/// surface ascending.
class StatisticalExtractor {
public:
    explicit StatisticalExtractor(std::shared_ptr<const StopwordList> stopwords = StopwordList::english());

    struct Scored {
        Keyword keyword;
        double score = 0.0;
    };

    /// Every candidate with its score, best first.
    std::vector<Scored> score_candidates(std::string_view text) const;

    /// At most k keywords, best first.
    std::vector<Keyword> extract(std::string_view text, std::size_t k) const;

    const StopwordList& stopwords() const { return *stopwords_; }

private:
    std::shared_ptr<const StopwordList> stopwords_;
};

using PrecomputedKeywords = std::map<std::string, KeywordSet>;

/// Reads the JSONL keyword file (`{"id": ..., "keywords": [...]}`).
PrecomputedKeywords load_precomputed_keywords(const std::filesystem::path& path);
void write_precomputed_keywords(std::span<const std::pair<std::string, KeywordSet>> rows,
                                const std::filesystem::path& path);

/// Union of the statistical top-k and the precomputed set for the utterance.
KeywordSet utterance_keywords(const Utterance& utterance, std::size_t statistical_k,
                              const PrecomputedKeywords* precomputed,
                              const StatisticalExtractor& extractor);

/// Top-n keywords by document frequency; ties by surface ascending.
ClusterKeywordProfile cluster_keyword_profile(std::string cluster_id,
                                              std::span<const KeywordSet* const> members,
                                              std::size_t n);

std::size_t keyword_overlap(const ClusterKeywordProfile& p, const ClusterKeywordProfile& q);

/// Keyword configuration shared by every KULCQ computation.
struct KeywordConfig {
    std::size_t n = 10;
    std::size_t statistical_k = 5;
    std::shared_ptr<const PrecomputedKeywords> precomputed;
    std::shared_ptr<const StopwordList> stopwords = StopwordList::english();
};

/// Keyword sets for every utterance of the dataset, in corpus order.
std::vector<KeywordSet> dataset_keyword_sets(const Corpus& corpus, const KeywordConfig& config);

/// Profiles for every cluster of the dataset, indexed by dense cluster index.
std::vector<ClusterKeywordProfile> dataset_profiles(const BoundDataset& dataset,
                                                    std::span<const KeywordSet> keyword_sets,
                                                    std::size_t n);

}  // namespace kulcq
