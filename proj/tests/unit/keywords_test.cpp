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

#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "kulcq/error.hpp"
#include "test_support.hpp"

namespace kulcq {
namespace {

using testing::TempDir;

std::vector<std::string> surfaces(const std::vector<Keyword>& ks) {
    std::vector<std::string> out;
    for (const auto& k : ks) out.push_back(k.surface());
    return out;
}

std::set<std::string> surfaces(const KeywordSet& ks) {
    std::set<std::string> out;
    for (const auto& k : ks) out.insert(k.surface());
    return out;
}

KeywordSet set_of(std::initializer_list<const char*> words) {
    KeywordSet out;
    for (const char* w : words) out.insert(Keyword::parse(w));
    return out;
}

// Reference scorer written directly from the documented scheme, for texts
// made of lowercase words separated by single spaces (no punctuation).
std::vector<std::pair<std::string, double>> reference_scores(const std::string& text,
                                                             const StopwordList& stopwords) {
    std::vector<std::string> tokens;
    std::string word;
    for (char c : text + " ") {
        if (c == ' ') {
            if (!word.empty()) tokens.push_back(word);
            word.clear();
        } else {
            word += c;
        }
    }
    auto tf = [&](const std::string& t) { return static_cast<double>(std::count(tokens.begin(), tokens.end(), t)); };
    auto first = [&](const std::string& t) {
        return static_cast<double>(std::find(tokens.begin(), tokens.end(), t) - tokens.begin());
    };
    auto s = [&](const std::string& t) { return std::log(3.0 + first(t)) / tf(t); };
    auto ok = [&](const std::string& t) {
        return !stopwords.contains(t) && !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); });
    };

    std::vector<std::pair<std::string, double>> out;
    auto seen = [&](const std::string& kw) {
        return std::any_of(out.begin(), out.end(), [&](const auto& p) { return p.first == kw; });
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (ok(tokens[i]) && !seen(tokens[i])) {
            const double st = s(tokens[i]);
            out.emplace_back(tokens[i], st / (tf(tokens[i]) * (1.0 + st)));
        }
        if (i + 1 < tokens.size() && ok(tokens[i]) && ok(tokens[i + 1])) {
            const std::string kw = tokens[i] + " " + tokens[i + 1];
            if (seen(kw)) continue;
            double occurrences = 0;
            for (std::size_t j = 0; j + 1 < tokens.size(); ++j) {
                occurrences += (tokens[j] == tokens[i] && tokens[j + 1] == tokens[i + 1]) ? 1 : 0;
            }
            const double a = s(tokens[i]), b = s(tokens[i + 1]);
            out.emplace_back(kw, a * b / (occurrences * (1.0 + (a + b))));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second < y.second : x.first < y.first;
    });
    return out;
}

TEST(StatisticalExtractor, TaxiIsAmongTopThree) {
    const StatisticalExtractor extractor;
    const auto top = surfaces(extractor.extract("How can I get a taxi from A to B?", 3));
    EXPECT_LE(top.size(), 3u);
    EXPECT_NE(std::find(top.begin(), top.end(), "taxi"), top.end());
}

TEST(StatisticalExtractor, AllStopwordsGivesNothing) {
    EXPECT_TRUE(StatisticalExtractor().extract("the of and", 5).empty());
}

TEST(StatisticalExtractor, RepeatedBigramRanksFirst) {
    const StatisticalExtractor extractor;
    const std::string text = "credit card payment credit card";
    const auto top = surfaces(extractor.extract(text, 2));
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0], "credit card");

    // Brute-force scoring over every candidate agrees on the full ranking.
    const auto reference = reference_scores(text, *StopwordList::english());
    const auto scored = extractor.score_candidates(text);
    ASSERT_EQ(scored.size(), reference.size());
    for (std::size_t i = 0; i < scored.size(); ++i) {
        EXPECT_EQ(scored[i].keyword.surface(), reference[i].first);
        EXPECT_NEAR(scored[i].score, reference[i].second, 1e-15);
    }
    // S(credit) = ln 3 / 2, S(card) = ln 4 / 2, tf("credit card") = 2.
    const double a = std::log(3.0) / 2.0, b = std::log(4.0) / 2.0;
    EXPECT_NEAR(scored[0].score, a * b / (2.0 * (1.0 + a + b)), 1e-15);
}

TEST(StatisticalExtractor, MatchesReferenceOnRandomTexts) {
    static const std::vector<std::string> words = {"card", "the", "payment", "top", "up", "and", "pin",
                                                   "refund", "of", "2024", "atm", "fee", "my", "card"};
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), length(1, 12);
    const StatisticalExtractor extractor;
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        for (std::size_t i = length(rng); i > 0; --i) text += (text.empty() ? "" : " ") + words[pick(rng)];
        const auto reference = reference_scores(text, extractor.stopwords());
        const auto scored = extractor.score_candidates(text);
        ASSERT_EQ(scored.size(), reference.size()) << text;
        for (std::size_t i = 0; i < scored.size(); ++i) {
            EXPECT_EQ(scored[i].keyword.surface(), reference[i].first) << text;
        }
    }
}

TEST(StatisticalExtractor, CandidateRules) {
    const StatisticalExtractor extractor;
    const auto all = surfaces(extractor.extract("Call 911 now, transfer; money order", 20));
    const std::set<std::string> got(all.begin(), all.end());
    EXPECT_FALSE(got.contains("911"));
    EXPECT_FALSE(got.contains("call 911"));
    EXPECT_FALSE(got.contains("now transfer"));  // crosses a comma
    EXPECT_FALSE(got.contains("transfer money"));  // crosses a semicolon
    EXPECT_TRUE(got.contains("money order"));
    EXPECT_TRUE(got.contains("call"));
    EXPECT_EQ(surfaces(extractor.extract("B2B payments", 5)).front().find("b2b"), 0u);
}

TEST(StatisticalExtractor, DeterministicAndWellFormed) {
    const StatisticalExtractor extractor;
    const std::string text = "Is American Express supported for adding funds? How do I use American Express?";
    const auto first = surfaces(extractor.extract(text, 5));
    EXPECT_EQ(first, surfaces(extractor.extract(text, 5)));
    for (const auto& k : extractor.extract(text, 50)) {
        EXPECT_GE(k.token_count(), 1u);
        EXPECT_LE(k.token_count(), 2u);
        EXPECT_EQ(Keyword::parse(k.surface()), k);
    }
}

TEST(StatisticalExtractor, CustomStopwords) {
    TempDir dir;
    const auto list = StopwordList::from_file(dir.write("sw.txt", "# comment\ntaxi\n\nA\n"));
    EXPECT_TRUE(list->contains("a"));
    const auto top = surfaces(StatisticalExtractor(list).extract("a taxi please", 5));
    EXPECT_EQ(top, std::vector<std::string>{"please"});
}

TEST(Keyword, NormalizationAndValidation) {
    EXPECT_EQ(Keyword::parse("  Credit \t CARD ").surface(), "credit card");
    EXPECT_THROW(Keyword::parse("one two three"), Error);
    EXPECT_THROW(Keyword::parse("   "), Error);
    EXPECT_THROW(Keyword::parse("?!"), Error);
    try {
        Keyword::parse("one two three");
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ngram);
        EXPECT_NE(std::string(e.what()).find("one two three"), std::string::npos);
    }
}

TEST(LoadPrecomputedKeywords, Rows) {
    TempDir dir;
    const auto path = dir.write("k.jsonl",
                                "{\"id\":\"u1\",\"keywords\":[\"taxi\",\"Credit  Card\"]}\n"
                                "{\"id\":\"u2\",\"keywords\":[]}\n");
    const auto map = load_precomputed_keywords(path);
    ASSERT_EQ(map.size(), 2u);
    EXPECT_EQ(surfaces(map.at("u1")), (std::set<std::string>{"taxi", "credit card"}));
    EXPECT_TRUE(map.at("u2").empty());
}

TEST(LoadPrecomputedKeywords, TrigramRejected) {
    TempDir dir;
    const auto path = dir.write("k.jsonl", "{\"id\":\"u1\",\"keywords\":[\"one two three\"]}\n");
    try {
        load_precomputed_keywords(path);
        FAIL() << "expected an n-gram error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ngram);
        EXPECT_NE(std::string(e.what()).find("one two three"), std::string::npos);
    }
    EXPECT_THROW(load_precomputed_keywords(dir.write("p.jsonl", "{\"id\":\"u1\",\"keywords\":\"x\"}\n")), Error);
}

TEST(UtteranceKeywords, UnionWithPrecomputed) {
    const StatisticalExtractor extractor;
    const Utterance u{"u1", "the taxi", std::nullopt};
    PrecomputedKeywords pre;
    pre["u1"] = set_of({"taxi", "cab"});
    EXPECT_EQ(surfaces(utterance_keywords(u, 5, &pre, extractor)), (std::set<std::string>{"taxi", "cab"}));
    EXPECT_EQ(surfaces(utterance_keywords(u, 5, nullptr, extractor)), (std::set<std::string>{"taxi"}));

    const Utterance stop{"u2", "the of and", std::nullopt};
    EXPECT_TRUE(utterance_keywords(stop, 5, &pre, extractor).empty());
}

TEST(ClusterKeywordProfile, DocumentFrequency) {
    const auto a = set_of({"a"}), b = set_of({"b"});
    const std::vector<const KeywordSet*> members = {&a, &a, &b};
    const auto profile = cluster_keyword_profile("c", members, 2);
    ASSERT_EQ(profile.top_keywords.size(), 2u);
    EXPECT_EQ(profile.top_keywords[0], (RankedKeyword{Keyword::parse("a"), 2}));
    EXPECT_EQ(profile.top_keywords[1], (RankedKeyword{Keyword::parse("b"), 1}));
}

TEST(ClusterKeywordProfile, TieBreakIsLexicographic) {
    // Enumerate both member orders: the tied pair always resolves to "a".
    const auto a = set_of({"a"}), b = set_of({"b"});
    for (const auto& members : {std::vector<const KeywordSet*>{&a, &b}, std::vector<const KeywordSet*>{&b, &a}}) {
        const auto profile = cluster_keyword_profile("c", members, 1);
        ASSERT_EQ(profile.top_keywords.size(), 1u);
        EXPECT_EQ(profile.top_keywords[0], (RankedKeyword{Keyword::parse("a"), 1}));
    }
}

TEST(ClusterKeywordProfile, EmptySets) {
    const KeywordSet empty;
    const std::vector<const KeywordSet*> members = {&empty, &empty};
    EXPECT_TRUE(cluster_keyword_profile("c", members, 10).top_keywords.empty());
}

ClusterKeywordProfile profile_of(std::initializer_list<const char*> words) {
    const auto set = set_of(words);
    const std::vector<const KeywordSet*> members = {&set};
    return cluster_keyword_profile("p", members, 10);
}

TEST(KeywordOverlap, Examples) {
    EXPECT_EQ(keyword_overlap(profile_of({"a", "b"}), profile_of({"b", "c"})), 1u);
    EXPECT_EQ(keyword_overlap(profile_of({"a", "b"}), profile_of({"a", "b"})), 2u);
    EXPECT_EQ(keyword_overlap(profile_of({"a"}), profile_of({})), 0u);
}

TEST(KeywordProperties, OverlapSymmetricAndProfilePermutationInvariant) {
    static const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g h", "i j"};
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), count(0, 4), members(1, 12), n(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
        auto random_sets = [&] {
            std::vector<KeywordSet> sets(members(rng));
            for (auto& s : sets)
                for (std::size_t i = count(rng); i > 0; --i) s.insert(Keyword::parse(vocab[pick(rng)]));
            return sets;
        };
        auto sets_p = random_sets();
        const auto sets_q = random_sets();
        const std::size_t top = n(rng);
        std::vector<const KeywordSet*> mp, mq;
        for (const auto& s : sets_p) mp.push_back(&s);
        for (const auto& s : sets_q) mq.push_back(&s);
        const auto p = cluster_keyword_profile("p", mp, top);
        const auto q = cluster_keyword_profile("q", mq, top);
        EXPECT_LE(p.top_keywords.size(), top);
        EXPECT_EQ(keyword_overlap(p, q), keyword_overlap(q, p));
        EXPECT_LE(keyword_overlap(p, q), std::min(p.top_keywords.size(), q.top_keywords.size()));

        std::shuffle(mp.begin(), mp.end(), rng);
        EXPECT_EQ(cluster_keyword_profile("p", mp, top).top_keywords, p.top_keywords);
    }
}

TEST(Tokenize, SegmentsAndUtf8) {
    const auto tokens = tokenize("Café déjà-vu, OK");
    ASSERT_EQ(tokens.size(), 4u);
    EXPECT_EQ(tokens[0].text, "café");
    EXPECT_EQ(tokens[1].text, "déjà");
    EXPECT_EQ(tokens[1].segment, 0u);
    EXPECT_EQ(tokens[2].segment, 1u);
    EXPECT_EQ(tokens[3].segment, 2u);
}

}  // namespace
}  // namespace kulcq
