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

#include "kulcq/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "kulcq/error.hpp"

namespace kulcq {

namespace detail {
extern const char* const kEnglishStopwords;
}

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool is_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::unordered_set<std::string> parse_word_list(std::string_view content) {
    std::unordered_set<std::string> words;
    std::istringstream in{std::string(content)};
    std::string line;
    while (std::getline(in, line)) {
        auto word = detail::trim(line);
        if (word.empty() || word.front() == '#') continue;
        std::string lower(word);
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        words.insert(std::move(lower));
    }
    return words;
}

}  // namespace

Keyword Keyword::parse(std::string_view raw) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : raw) {
        if (std::isspace(c)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current += static_cast<char>(std::tolower(c));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));

    if (tokens.empty() || tokens.size() > 2) {
        throw Error(ErrorCode::ngram,
                    fmt::format("keyword \"{}\" has {} tokens; keywords are unigrams or bigrams", raw, tokens.size()));
    }
    for (const auto& t : tokens) {
        if (std::none_of(t.begin(), t.end(), is_word_byte)) {
            throw Error(ErrorCode::ngram, fmt::format("keyword \"{}\" contains a punctuation-only token", raw));
        }
    }
    return Keyword(tokens.size() == 1 ? tokens[0] : tokens[0] + ' ' + tokens[1]);
}

std::size_t Keyword::token_count() const {
    return static_cast<std::size_t>(std::count(surface_.begin(), surface_.end(), ' ')) + 1;
}

bool ClusterKeywordProfile::contains(const Keyword& keyword) const {
    return std::any_of(top_keywords.begin(), top_keywords.end(),
                       [&](const RankedKeyword& r) { return r.keyword == keyword; });
}

std::shared_ptr<const StopwordList> StopwordList::english() {
    static const auto list = std::make_shared<const StopwordList>(parse_word_list(detail::kEnglishStopwords));
    return list;
}

std::shared_ptr<const StopwordList> StopwordList::from_file(const std::filesystem::path& path) {
    return std::make_shared<const StopwordList>(parse_word_list(detail::read_file(path)));
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::string current;
    std::size_t segment = 0;
    bool pending_break = false;
    auto flush = [&] {
        if (current.empty()) return;
        if (pending_break && !tokens.empty()) ++segment;
        pending_break = false;
        tokens.push_back({std::move(current), tokens.size(), segment});
        current.clear();
    };
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            current += static_cast<char>(std::tolower(c));
        } else {
            flush();
            if (!std::isspace(c)) pending_break = true;
        }
    }
    flush();
    return tokens;
}

StatisticalExtractor::StatisticalExtractor(std::shared_ptr<const StopwordList> stopwords)
    : stopwords_(std::move(stopwords)) {
    if (!stopwords_) stopwords_ = StopwordList::english();
}

std::vector<StatisticalExtractor::Scored> StatisticalExtractor::score_candidates(std::string_view text) const {
    const auto tokens = tokenize(text);

    struct TokenStats {
        std::size_t tf = 0;
        std::size_t first = 0;
    };
    std::unordered_map<std::string, TokenStats> stats;
    for (const Token& t : tokens) {
        auto [it, inserted] = stats.try_emplace(t.text, TokenStats{0, t.position});
        ++it->second.tf;
    }
    auto token_score = [&](const std::string& t) {
        const auto& s = stats.at(t);
        return std::log(3.0 + static_cast<double>(s.first)) / static_cast<double>(s.tf);
    };
    auto usable = [&](const Token& t) { return !stopwords_->contains(t.text) && !is_digits(t.text); };

    // Candidate surface -> (occurrences, constituent tokens).
    std::map<std::string, std::pair<std::size_t, std::vector<std::string>>> candidates;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!usable(tokens[i])) continue;
        auto& uni = candidates[tokens[i].text];
        ++uni.first;
        uni.second = {tokens[i].text};
        if (i + 1 < tokens.size() && tokens[i + 1].segment == tokens[i].segment && usable(tokens[i + 1])) {
            auto& bi = candidates[tokens[i].text + ' ' + tokens[i + 1].text];
            ++bi.first;
            bi.second = {tokens[i].text, tokens[i + 1].text};
        }
    }

    std::vector<Scored> scored;
    scored.reserve(candidates.size());
    for (const auto& [surface, entry] : candidates) {
        double product = 1.0;
        double sum = 0.0;
        for (const auto& t : entry.second) {
            const double s = token_score(t);
            product *= s;
            sum += s;
        }
        scored.push_back({Keyword(surface), product / (static_cast<double>(entry.first) * (1.0 + sum))});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.keyword < b.keyword;
    });
    return scored;
}

std::vector<Keyword> StatisticalExtractor::extract(std::string_view text, std::size_t k) const {
    auto scored = score_candidates(text);
    std::vector<Keyword> out;
    for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(std::move(scored[i].keyword));
    return out;
}

PrecomputedKeywords load_precomputed_keywords(const std::filesystem::path& path) {
    PrecomputedKeywords out;
    for (const auto& line : detail::read_nonblank_lines(path)) {
        const auto row = detail::parse_json_line(path, line);
        std::string id = detail::string_field(row, "id", path, line.number);
        auto it = row.find("keywords");
        if (it == row.end() || !it->is_array()) {
            throw Error(ErrorCode::parse,
                        fmt::format("{}:{}: missing or non-array field \"keywords\"", path.string(), line.number));
        }
        KeywordSet set;
        for (const auto& kw : *it) {
            if (!kw.is_string()) {
                throw Error(ErrorCode::parse, fmt::format("{}:{}: keywords must be strings", path.string(), line.number));
            }
            try {
                set.insert(Keyword::parse(kw.get<std::string>()));
            } catch (const Error& e) {
                throw Error(e.code(), fmt::format("{}:{}: {}", path.string(), line.number, e.what()));
            }
        }
        if (out.contains(id)) {
            throw Error(ErrorCode::duplicate_id, fmt::format("{}:{}: duplicate id \"{}\"", path.string(), line.number, id));
        }
        out.emplace(std::move(id), std::move(set));
    }
    return out;
}

void write_precomputed_keywords(std::span<const std::pair<std::string, KeywordSet>> rows,
                                const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
    for (const auto& [id, set] : rows) {
        nlohmann::ordered_json row;
        row["id"] = id;
        row["keywords"] = nlohmann::json::array();
        for (const Keyword& k : set) row["keywords"].push_back(k.surface());
        out << row.dump() << '\n';
    }
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
}

KeywordSet utterance_keywords(const Utterance& utterance, std::size_t statistical_k,
                              const PrecomputedKeywords* precomputed, const StatisticalExtractor& extractor) {
    KeywordSet out;
    for (auto& k : extractor.extract(utterance.text, statistical_k)) out.insert(std::move(k));
    if (precomputed) {
        if (auto it = precomputed->find(utterance.id); it != precomputed->end()) {
            out.insert(it->second.begin(), it->second.end());
        }
    }
    return out;
}

ClusterKeywordProfile cluster_keyword_profile(std::string cluster_id, std::span<const KeywordSet* const> members,
                                              std::size_t n) {
    std::map<Keyword, std::size_t> counts;
    for (const KeywordSet* set : members) {
        for (const Keyword& k : *set) ++counts[k];
    }
    std::vector<RankedKeyword> ranked;
    ranked.reserve(counts.size());
    for (const auto& [k, count] : counts) ranked.push_back({k, count});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedKeyword& a, const RankedKeyword& b) { return a.frequency > b.frequency; });
    if (ranked.size() > n) ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end());
    return {std::move(cluster_id), n, std::move(ranked)};
}

std::size_t keyword_overlap(const ClusterKeywordProfile& p, const ClusterKeywordProfile& q) {
    std::size_t shared = 0;
    for (const auto& r : p.top_keywords) {
        if (q.contains(r.keyword)) ++shared;
    }
    return shared;
}

std::vector<KeywordSet> dataset_keyword_sets(const Corpus& corpus, const KeywordConfig& config) {
    const StatisticalExtractor extractor(config.stopwords);
    std::vector<KeywordSet> out;
    out.reserve(corpus.size());
    for (const Utterance& u : corpus.utterances()) {
        out.push_back(utterance_keywords(u, config.statistical_k, config.precomputed.get(), extractor));
    }
    return out;
}

std::vector<ClusterKeywordProfile> dataset_profiles(const BoundDataset& dataset,
                                                    std::span<const KeywordSet> keyword_sets, std::size_t n) {
    if (keyword_sets.size() != dataset.size()) {
        throw Error(ErrorCode::internal, "keyword sets do not match the dataset size");
    }
    std::vector<ClusterKeywordProfile> profiles;
    profiles.reserve(dataset.cluster_count());
    std::vector<const KeywordSet*> members;
    for (std::size_t c = 0; c < dataset.cluster_count(); ++c) {
        members.clear();
        for (std::size_t u : dataset.members(c)) members.push_back(&keyword_sets[u]);
        profiles.push_back(cluster_keyword_profile(dataset.cluster_id(c), members, n));
    }
    return profiles;
}

}  // namespace kulcq
