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

// kulcq: command-line front end over the C API.
//
//   kulcq score    --utterances U --embeddings E (--clustering C | --from-gold) --out DIR
//   kulcq keywords ...same inputs... --out DIR
//   kulcq sweep    ...same inputs... --p-grid 0,0.1,0.5 --repeats 5 --out DIR
//   kulcq inspect  ...same inputs... --cluster ID [--out DIR]
//   kulcq synth    --clusters 4 --per-cluster 50 --dim 16 --separation 4 --out DIR
//
// Errors are reported as one line on stderr: "error: <CODE>: <message>".
// Exit status: 0 success, 1 input error, 2 internal error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "kulcq/kulcq.h"

namespace {

struct CliError {
    kulcq_status status;
    std::string message;
};

struct DatasetFlags {
    std::string utterances;
    std::string embeddings;
    std::string clustering;
    std::string keywords;
    std::string stopwords;
    std::string format = "auto";
    bool from_gold = false;
};

struct ScoringFlags {
    std::vector<std::string> metrics;
    std::size_t n = 10;
    std::size_t stat_k = 5;
    std::uint64_t seed = 0;
    std::string out;
    std::vector<std::string> formats;
    unsigned jobs = 0;
};

void check(kulcq_status status) {
    if (status != KULCQ_OK) throw CliError{status, kulcq_last_error()};
}

void add_dataset_flags(CLI::App* cmd, DatasetFlags& flags) {
    cmd->add_option("--utterances", flags.utterances, "Utterance file (JSONL or CSV)")->required();
    cmd->add_option("--utterances-format", flags.format, "auto, jsonl or csv")
        ->check(CLI::IsMember({"auto", "jsonl", "csv"}));
    cmd->add_option("--embeddings", flags.embeddings, "Embedding file (JSONL)")->required();
    auto* clustering = cmd->add_option("--clustering", flags.clustering, "Clustering file (JSONL)");
    auto* gold = cmd->add_flag("--from-gold", flags.from_gold, "Use gold labels as clusters");
    clustering->excludes(gold);
    cmd->add_option("--keywords", flags.keywords, "Precomputed keyword file (JSONL)");
    cmd->add_option("--stopwords", flags.stopwords, "Stopword list replacing the bundled one");
}

void add_scoring_flags(CLI::App* cmd, ScoringFlags& flags, bool out_required) {
    cmd->add_option("--metric", flags.metrics, "kulcq or silhouette (repeatable; default both)")
        ->check(CLI::IsMember({"kulcq", "silhouette"}));
    cmd->add_option("--n", flags.n, "Keywords per cluster profile")->capture_default_str();
    cmd->add_option("--stat-k", flags.stat_k, "Statistical keywords per utterance")->capture_default_str();
    cmd->add_option("--seed", flags.seed, "Seed for every random choice")->capture_default_str();
    auto* out = cmd->add_option("--out", flags.out, "Output directory");
    if (out_required) out->required();
    cmd->add_option("--format", flags.formats, "csv or json (repeatable; default both)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--jobs", flags.jobs, "Worker threads (default: available cores)");
}

struct Dataset {
    kulcq_dataset* handle = nullptr;
    ~Dataset() { kulcq_dataset_free(handle); }
};

void open_dataset(const DatasetFlags& flags, Dataset& dataset) {
    if (flags.clustering.empty() && !flags.from_gold) {
        throw CliError{KULCQ_E_ARG, "either --clustering or --from-gold is required"};
    }
    kulcq_dataset_options options;
    kulcq_dataset_options_init(&options);
    options.utterances_path = flags.utterances.c_str();
    options.utterances_format = flags.format == "csv"     ? KULCQ_CORPUS_CSV
                                : flags.format == "jsonl" ? KULCQ_CORPUS_JSONL
                                                          : KULCQ_CORPUS_AUTO;
    options.embeddings_path = flags.embeddings.c_str();
    options.clustering_path = flags.from_gold ? nullptr : flags.clustering.c_str();
    options.keywords_path = flags.keywords.empty() ? nullptr : flags.keywords.c_str();
    options.stopwords_path = flags.stopwords.empty() ? nullptr : flags.stopwords.c_str();
    check(kulcq_dataset_open(&options, &dataset.handle));
}

kulcq_score_options score_options(const ScoringFlags& flags) {
    if (flags.n == 0) throw CliError{KULCQ_E_RANGE, "--n must be positive"};
    if (flags.stat_k == 0) throw CliError{KULCQ_E_RANGE, "--stat-k must be positive"};
    kulcq_score_options options;
    kulcq_score_options_init(&options);
    options.n = flags.n;
    options.statistical_k = flags.stat_k;
    options.seed = flags.seed;
    options.jobs = flags.jobs != 0 ? flags.jobs : std::max(1u, std::thread::hardware_concurrency());
    return options;
}

unsigned formats(const ScoringFlags& flags) {
    if (flags.formats.empty()) return KULCQ_FORMAT_CSV | KULCQ_FORMAT_JSON;
    unsigned out = 0;
    for (const auto& f : flags.formats) out |= f == "csv" ? KULCQ_FORMAT_CSV : KULCQ_FORMAT_JSON;
    return out;
}

std::vector<kulcq_metric> metrics(const ScoringFlags& flags) {
    std::vector<kulcq_metric> out;
    bool k = flags.metrics.empty(), s = flags.metrics.empty();
    for (const auto& m : flags.metrics) (m == "kulcq" ? k : s) = true;
    if (k) out.push_back(KULCQ_METRIC_KULCQ);
    if (s) out.push_back(KULCQ_METRIC_SILHOUETTE);
    return out;
}

const char* metric_label(kulcq_metric m) { return m == KULCQ_METRIC_KULCQ ? "kulcq" : "silhouette"; }

void run_score(const DatasetFlags& df, const ScoringFlags& sf) {
    const auto options = score_options(sf);
    Dataset dataset;
    open_dataset(df, dataset);
    for (kulcq_metric m : metrics(sf)) {
        kulcq_score_report* report = nullptr;
        check(kulcq_score(dataset.handle, m, &options, &report));
        std::unique_ptr<kulcq_score_report, decltype(&kulcq_score_report_free)> guard(report, kulcq_score_report_free);
        check(kulcq_score_report_write(report, sf.out.c_str(), formats(sf)));
        std::printf("%s: dataset score %.6f over %zu clusters\n", metric_label(m),
                    kulcq_score_report_dataset_score(report), kulcq_score_report_cluster_count(report));
    }
}

void run_keywords(const DatasetFlags& df, const ScoringFlags& sf) {
    const auto options = score_options(sf);
    Dataset dataset;
    open_dataset(df, dataset);
    check(kulcq_keywords_write(dataset.handle, &options, sf.out.c_str()));
    std::printf("keywords written to %s\n", sf.out.c_str());
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const double p = std::stod(item, &used);
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
            out.push_back(p);
        } catch (const std::exception&) {
            throw CliError{KULCQ_E_ARG, "cannot parse p value \"" + item + "\""};
        }
    }
    return out;
}

void run_sweep(const DatasetFlags& df, const ScoringFlags& sf, const std::string& grid_text,
               const std::vector<double>& single_ps, std::size_t repeats) {
    std::vector<double> grid = grid_text.empty() ? std::vector<double>{} : parse_grid(grid_text);
    grid.insert(grid.end(), single_ps.begin(), single_ps.end());
    for (double p : grid) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw CliError{KULCQ_E_RANGE, "perturbation probability " + std::to_string(p) + " is outside [0, 1]"};
        }
    }
    if (repeats == 0) throw CliError{KULCQ_E_RANGE, "--repeats must be positive"};

    kulcq_sweep_options options;
    kulcq_sweep_options_init(&options);
    options.scoring = score_options(sf);
    options.repeats = repeats;
    if (!grid.empty()) {
        options.p_grid = grid.data();
        options.p_count = grid.size();
    }
    for (kulcq_metric m : metrics(sf)) options.metrics |= static_cast<unsigned>(m);

    Dataset dataset;
    open_dataset(df, dataset);
    kulcq_sweep_report* report = nullptr;
    check(kulcq_sweep(dataset.handle, &options, &report));
    std::unique_ptr<kulcq_sweep_report, decltype(&kulcq_sweep_report_free)> guard(report, kulcq_sweep_report_free);
    check(kulcq_sweep_report_write(report, sf.out.c_str(), formats(sf)));
    std::printf("%zu sweep records written to %s\n", kulcq_sweep_report_record_count(report), sf.out.c_str());
    for (kulcq_metric m : metrics(sf)) {
        std::printf("%s: drop from first to last p = %.6f\n", metric_label(m), kulcq_sweep_report_drop(report, m));
    }
}

void run_inspect(const DatasetFlags& df, const ScoringFlags& sf, const std::string& cluster) {
    const auto options = score_options(sf);
    Dataset dataset;
    open_dataset(df, dataset);
    kulcq_inspection* inspection = nullptr;
    check(kulcq_inspect(dataset.handle, cluster.c_str(), &options, &inspection));
    std::unique_ptr<kulcq_inspection, decltype(&kulcq_inspection_free)> guard(inspection, kulcq_inspection_free);
    std::fputs(kulcq_inspection_text(inspection), stdout);
    if (!sf.out.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(sf.out, ec);
        const auto path = std::filesystem::path(sf.out) / "inspection.json";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << kulcq_inspection_json(inspection);
        if (ec || !out) throw CliError{KULCQ_E_IO, "cannot write '" + path.string() + "'"};
    }
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keyword-aware clustering quality (KULCQ) and Silhouette evaluation for utterance clusters"};
    app.set_version_flag("--version", std::string(kulcq_version()));
    app.require_subcommand(1);

    DatasetFlags df;
    ScoringFlags sf;
    std::string grid_text;
    std::vector<double> single_ps;
    std::size_t repeats = 5;
    std::string cluster;
    kulcq_synth_options synth;
    kulcq_synth_options_init(&synth);
    std::string synth_out;

    auto* score = app.add_subcommand("score", "Score a clustering with KULCQ and/or Silhouette");
    add_dataset_flags(score, df);
    add_scoring_flags(score, sf, true);

    auto* keywords = app.add_subcommand("keywords", "Write per-utterance keywords and cluster keyword profiles");
    add_dataset_flags(keywords, df);
    add_scoring_flags(keywords, sf, true);

    auto* sweep = app.add_subcommand("sweep", "Label-perturbation noise sweep");
    add_dataset_flags(sweep, df);
    add_scoring_flags(sweep, sf, true);
    sweep->add_option("--p-grid", grid_text, "Comma-separated perturbation probabilities (default 0,0.1,...,0.9)");
    sweep->add_option("--p", single_ps, "Single perturbation probability (repeatable)");
    sweep->add_option("--repeats", repeats, "Repeats per probability")->capture_default_str();

    auto* inspect = app.add_subcommand("inspect", "Per-cluster inspection report");
    add_dataset_flags(inspect, df);
    add_scoring_flags(inspect, sf, false);
    inspect->add_option("--cluster", cluster, "Cluster ID")->required();

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic fixture");
    synth_cmd->add_option("--clusters", synth.n_clusters, "Number of clusters")->capture_default_str();
    synth_cmd->add_option("--per-cluster", synth.per_cluster, "Utterances per cluster")->capture_default_str();
    synth_cmd->add_option("--dim", synth.dim, "Embedding dimension")->capture_default_str();
    synth_cmd->add_option("--separation", synth.separation, "Cluster separation (noise ~ 1/separation)")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: E_ARG: %s\n", one_line(e.what()).c_str());
        return 1;
    }

    try {
        if (score->parsed()) run_score(df, sf);
        else if (keywords->parsed()) run_keywords(df, sf);
        else if (sweep->parsed()) run_sweep(df, sf, grid_text, single_ps, repeats);
        else if (inspect->parsed()) run_inspect(df, sf, cluster);
        else if (synth_cmd->parsed()) {
            check(kulcq_synthesize(&synth, synth_out.c_str()));
            std::printf("fixture written to %s\n", synth_out.c_str());
        }
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s: %s\n", kulcq_status_name(e.status), one_line(e.message).c_str());
        return e.status == KULCQ_E_INTERNAL ? 2 : 1;
    }
    return 0;
}
