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

#include "kulcq/report_io.hpp"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "kulcq/error.hpp"

#ifndef KULCQ_VERSION
#define KULCQ_VERSION "0.0.0"
#endif

namespace kulcq {

using nlohmann::ordered_json;
using detail::csv_escape;

std::string_view version() noexcept { return KULCQ_VERSION; }

namespace {

std::string_view distance_name(DistanceKind) { return "cosine"; }

ordered_json inputs_json(const std::vector<std::pair<std::string, std::string>>& inputs) {
    ordered_json out = ordered_json::object();
    for (const auto& [key, value] : inputs) out[key] = value;
    return out;
}

ordered_json score_config_json(const ScoreReport& r) {
    ordered_json c;
    c["n"] = r.n;
    c["statistical_k"] = r.statistical_k;
    c["distance"] = distance_name(r.distance);
    c["seed"] = r.seed;
    c["inputs"] = inputs_json(r.inputs);
    return c;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
}

std::string num(double x) { return fmt::format("{}", x); }

}  // namespace

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
}

std::string score_report_json(const ScoreReport& report) {
    ordered_json j;
    j["tool"] = "kulcq";
    j["version"] = version();
    j["metric"] = metric_name(report.metric);
    j["config"] = score_config_json(report);
    j["dataset"] = {{"score", report.dataset_score},
                    {"clusters", report.cluster_scores.size()},
                    {"utterances", report.utterance_records.size()}};
    j["clusters"] = ordered_json::array();
    for (const auto& c : report.cluster_scores) {
        j["clusters"].push_back({{"cluster", c.cluster_id}, {"size", c.size}, {"score", c.score}, {"rank", c.rank}});
    }
    j["ranking"] = ordered_json::array();
    for (const auto& c : report.ranking()) j["ranking"].push_back(c.cluster_id);
    j["utterances"] = ordered_json::array();
    for (const auto& r : report.utterance_records) {
        j["utterances"].push_back({{"id", r.utterance_id},
                                   {"cluster", r.cluster_id},
                                   {"intra", r.intra},
                                   {"inter", r.inter},
                                   {"score", r.score}});
    }
    return j.dump(2) + "\n";
}

std::string score_utterances_csv(const ScoreReport& report) {
    std::string out = "id,cluster,intra,inter,score\n";
    for (const auto& r : report.utterance_records) {
        out += fmt::format("{},{},{},{},{}\n", csv_escape(r.utterance_id), csv_escape(r.cluster_id), num(r.intra),
                           num(r.inter), num(r.score));
    }
    return out;
}

std::string score_clusters_csv(const ScoreReport& report) {
    std::string out = "cluster,size,score,rank\n";
    for (const auto& c : report.cluster_scores) {
        out += fmt::format("{},{},{},{}\n", csv_escape(c.cluster_id), c.size, num(c.score), c.rank);
    }
    return out;
}

std::string score_dataset_csv(const ScoreReport& report) {
    return fmt::format("metric,clusters,utterances,score\n{},{},{},{}\n", metric_name(report.metric),
                       report.cluster_scores.size(), report.utterance_records.size(), num(report.dataset_score));
}

std::vector<std::filesystem::path> write_score_report(const ScoreReport& report, const std::filesystem::path& dir,
                                                      OutputFormats formats) {
    ensure_dir(dir);
    const std::string prefix(metric_name(report.metric));
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        write_text_file(dir / name, content);
        written.push_back(dir / name);
    };
    if (formats.csv) {
        emit(prefix + "_utterances.csv", score_utterances_csv(report));
        emit(prefix + "_clusters.csv", score_clusters_csv(report));
        emit(prefix + "_dataset.csv", score_dataset_csv(report));
    }
    if (formats.json) emit(prefix + "_report.json", score_report_json(report));
    return written;
}

std::string sweep_csv(const SweepReport& report) {
    std::string out = "p,repeat,metric,score\n";
    for (const auto& r : report.records) {
        out += fmt::format("{},{},{},{}\n", num(r.p), r.repeat, metric_name(r.metric), num(r.score));
    }
    return out;
}

std::string sweep_plotdata_csv(const SweepReport& report) {
    std::string out = "p,metric,mean,stddev\n";
    for (const auto& s : report.summaries) {
        out += fmt::format("{},{},{},{}\n", num(s.p), metric_name(s.metric), num(s.mean), num(s.stddev));
    }
    return out;
}

std::string sweep_json(const SweepReport& report) {
    const auto& cfg = report.config;
    ordered_json j;
    j["tool"] = "kulcq";
    j["version"] = version();
    ordered_json c;
    c["p_grid"] = cfg.p_grid;
    c["repeats"] = cfg.repeats;
    c["base_seed"] = cfg.base_seed;
    c["metrics"] = ordered_json::array();
    for (Metric m : cfg.metrics) c["metrics"].push_back(metric_name(m));
    c["n"] = cfg.scoring.keywords.n;
    c["statistical_k"] = cfg.scoring.keywords.statistical_k;
    c["distance"] = distance_name(cfg.scoring.distance);
    c["reassignment"] = "uniform-over-other-clusters";
    c["inputs"] = inputs_json(cfg.scoring.inputs);
    j["config"] = c;
    j["records"] = ordered_json::array();
    for (const auto& r : report.records) {
        j["records"].push_back({{"p", r.p}, {"repeat", r.repeat}, {"metric", metric_name(r.metric)}, {"score", r.score}});
    }
    j["summary"] = ordered_json::array();
    for (const auto& s : report.summaries) {
        j["summary"].push_back({{"p", s.p}, {"metric", metric_name(s.metric)}, {"mean", s.mean}, {"stddev", s.stddev}});
    }
    ordered_json drop = ordered_json::object();
    for (Metric m : cfg.metrics) drop[std::string(metric_name(m))] = report.drop(m);
    j["drop"] = drop;
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_sweep_report(const SweepReport& report, const std::filesystem::path& dir,
                                                      OutputFormats formats) {
    ensure_dir(dir);
    std::vector<std::filesystem::path> written;
    auto emit = [&](const char* name, const std::string& content) {
        write_text_file(dir / name, content);
        written.push_back(dir / name);
    };
    if (formats.csv) {
        emit("sweep.csv", sweep_csv(report));
        emit("plotdata.csv", sweep_plotdata_csv(report));
    }
    if (formats.json) emit("sweep.json", sweep_json(report));
    return written;
}

std::string inspection_json(const InspectionReport& report, const ScoreConfig& config) {
    ordered_json j;
    j["tool"] = "kulcq";
    j["version"] = version();
    j["config"] = {{"n", config.keywords.n},
                   {"statistical_k", config.keywords.statistical_k},
                   {"distance", distance_name(config.distance)},
                   {"seed", config.seed},
                   {"inputs", inputs_json(config.inputs)}};
    j["cluster"] = report.cluster_id;
    j["members"] = report.member_count;
    j["clusters"] = report.cluster_count;
    j["silhouette"] = {{"score", report.silhouette}, {"rank", report.silhouette_rank}};
    j["kulcq"] = {{"score", report.kulcq}, {"rank", report.kulcq_rank}};
    j["keywords"] = ordered_json::array();
    for (const auto& r : report.profile.top_keywords) {
        j["keywords"].push_back({{"keyword", r.keyword.surface()}, {"frequency", r.frequency}});
    }
    j["samples"] = ordered_json::array();
    for (const auto& u : report.samples) j["samples"].push_back({{"id", u.id}, {"text", u.text}});
    return j.dump(2) + "\n";
}

std::string inspection_text(const InspectionReport& report) {
    std::string out = fmt::format("cluster: {}\nmembers: {}\n", report.cluster_id, report.member_count);
    out += fmt::format("silhouette: {:.4f} (rank {} of {})\n", report.silhouette, report.silhouette_rank,
                       report.cluster_count);
    out += fmt::format("kulcq:      {:.4f} (rank {} of {})\n", report.kulcq, report.kulcq_rank, report.cluster_count);
    out += "top keywords:\n";
    for (const auto& r : report.profile.top_keywords) {
        out += fmt::format("  {:<24} {}\n", r.keyword.surface(), r.frequency);
    }
    out += "sample utterances:\n";
    for (const auto& u : report.samples) out += fmt::format("  [{}] {}\n", u.id, u.text);
    return out;
}

std::vector<std::filesystem::path> write_keyword_reports(const BoundDataset& dataset, const KeywordConfig& config,
                                                         const std::filesystem::path& dir) {
    ensure_dir(dir);
    const auto sets = dataset_keyword_sets(dataset.corpus(), config);

    std::vector<std::pair<std::string, KeywordSet>> rows;
    rows.reserve(dataset.size());
    for (std::size_t u = 0; u < dataset.size(); ++u) rows.emplace_back(dataset.corpus()[u].id, sets[u]);
    const auto utterance_path = dir / "utterance_keywords.jsonl";
    write_precomputed_keywords(rows, utterance_path);

    std::string profiles;
    for (const auto& p : dataset_profiles(dataset, sets, config.n)) {
        ordered_json row;
        row["cluster"] = p.cluster_id;
        row["size"] = dataset.members(*dataset.cluster_index(p.cluster_id)).size();
        row["n"] = p.n;
        row["keywords"] = ordered_json::array();
        for (const auto& r : p.top_keywords) {
            row["keywords"].push_back({{"keyword", r.keyword.surface()}, {"frequency", r.frequency}});
        }
        profiles += row.dump() + "\n";
    }
    const auto profile_path = dir / "cluster_profiles.jsonl";
    write_text_file(profile_path, profiles);
    return {utterance_path, profile_path};
}

}  // namespace kulcq
