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

#include "kulcq/kulcq.h"

#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "kulcq/corpus.hpp"
#include "kulcq/error.hpp"
#include "kulcq/experiments.hpp"
#include "kulcq/keywords.hpp"
#include "kulcq/metrics.hpp"
#include "kulcq/report_io.hpp"

struct kulcq_dataset {
    kulcq::BoundDataset bound;
    kulcq::KeywordConfig keywords;
    std::vector<std::pair<std::string, std::string>> inputs;
};

struct kulcq_score_report {
    kulcq::ScoreReport report;
    std::vector<kulcq::ClusterScore> ranking;
    std::optional<std::string> json;
};

struct kulcq_sweep_report {
    kulcq::SweepReport report;
};

struct kulcq_inspection {
    kulcq::InspectionReport report;
    std::string json;
    std::string text;
};

namespace {

thread_local std::string last_error;

kulcq_status to_status(kulcq::ErrorCode code) {
    using kulcq::ErrorCode;
    switch (code) {
        case ErrorCode::io: return KULCQ_E_IO;
        case ErrorCode::parse: return KULCQ_E_PARSE;
        case ErrorCode::empty_file: return KULCQ_E_EMPTY_FILE;
        case ErrorCode::empty_text: return KULCQ_E_EMPTY_TEXT;
        case ErrorCode::duplicate_id: return KULCQ_E_DUPLICATE_ID;
        case ErrorCode::dim_mismatch: return KULCQ_E_DIM_MISMATCH;
        case ErrorCode::zero_vector: return KULCQ_E_ZERO_VECTOR;
        case ErrorCode::length_mismatch: return KULCQ_E_LENGTH_MISMATCH;
        case ErrorCode::missing_embedding: return KULCQ_E_MISSING_EMBEDDING;
        case ErrorCode::missing_assignment: return KULCQ_E_MISSING_ASSIGNMENT;
        case ErrorCode::unknown_id: return KULCQ_E_UNKNOWN_ID;
        case ErrorCode::no_gold: return KULCQ_E_NO_GOLD;
        case ErrorCode::ngram: return KULCQ_E_NGRAM;
        case ErrorCode::range: return KULCQ_E_RANGE;
        case ErrorCode::unknown_cluster: return KULCQ_E_CLUSTER;
        case ErrorCode::single_cluster: return KULCQ_E_SINGLE_CLUSTER;
        case ErrorCode::invalid_argument: return KULCQ_E_ARG;
        case ErrorCode::internal: return KULCQ_E_INTERNAL;
    }
    return KULCQ_E_INTERNAL;
}

kulcq_status fail(kulcq_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
kulcq_status guarded(F&& body) noexcept {
    last_error.clear();
    try {
        body();
        return KULCQ_OK;
    } catch (const kulcq::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(KULCQ_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(KULCQ_E_INTERNAL, e.what());
    } catch (...) {
        return fail(KULCQ_E_INTERNAL, "unknown failure");
    }
}

void require(bool condition, const char* message) {
    if (!condition) throw kulcq::Error(kulcq::ErrorCode::invalid_argument, message);
}

kulcq::ScoreConfig score_config(const kulcq_dataset& dataset, const kulcq_score_options* options) {
    kulcq_score_options defaults;
    kulcq_score_options_init(&defaults);
    const kulcq_score_options& o = options ? *options : defaults;
    require(o.n > 0, "n must be positive");
    require(o.statistical_k > 0, "statistical_k must be positive");

    kulcq::ScoreConfig config;
    config.keywords = dataset.keywords;
    config.keywords.n = o.n;
    config.keywords.statistical_k = o.statistical_k;
    config.seed = o.seed;
    config.jobs = o.jobs == 0 ? 1 : o.jobs;
    config.inputs = dataset.inputs;
    return config;
}

std::optional<kulcq::Metric> to_metric(kulcq_metric metric) {
    switch (metric) {
        case KULCQ_METRIC_KULCQ: return kulcq::Metric::kulcq;
        case KULCQ_METRIC_SILHOUETTE: return kulcq::Metric::silhouette;
    }
    return std::nullopt;
}

kulcq::OutputFormats to_formats(unsigned formats) {
    return {(formats & KULCQ_FORMAT_CSV) != 0, (formats & KULCQ_FORMAT_JSON) != 0};
}

}  // namespace

extern "C" {

const char* kulcq_version(void) { return kulcq::version().data(); }

const char* kulcq_status_name(kulcq_status status) {
    using kulcq::ErrorCode;
    static constexpr ErrorCode codes[] = {
        ErrorCode::io, ErrorCode::parse, ErrorCode::empty_file, ErrorCode::empty_text, ErrorCode::duplicate_id,
        ErrorCode::dim_mismatch, ErrorCode::zero_vector, ErrorCode::length_mismatch, ErrorCode::missing_embedding,
        ErrorCode::missing_assignment, ErrorCode::unknown_id, ErrorCode::no_gold, ErrorCode::ngram, ErrorCode::range,
        ErrorCode::unknown_cluster, ErrorCode::single_cluster, ErrorCode::invalid_argument, ErrorCode::internal,
    };
    if (status == KULCQ_OK) return "OK";
    const auto index = static_cast<std::size_t>(status) - 1;
    if (index >= std::size(codes)) return "E_INTERNAL";
    return kulcq::code_name(codes[index]).data();
}

const char* kulcq_last_error(void) { return last_error.c_str(); }

void kulcq_dataset_options_init(kulcq_dataset_options* options) {
    if (options) *options = kulcq_dataset_options{nullptr, KULCQ_CORPUS_AUTO, nullptr, nullptr, nullptr, nullptr};
}

void kulcq_score_options_init(kulcq_score_options* options) {
    if (options) *options = kulcq_score_options{10, 5, 0, 1};
}

void kulcq_sweep_options_init(kulcq_sweep_options* options) {
    if (!options) return;
    kulcq_score_options_init(&options->scoring);
    options->p_grid = nullptr;
    options->p_count = 0;
    options->repeats = 5;
    options->metrics = 0;
}

void kulcq_synth_options_init(kulcq_synth_options* options) {
    if (options) *options = kulcq_synth_options{4, 50, 16, 4.0, 0};
}

kulcq_status kulcq_dataset_open(const kulcq_dataset_options* options, kulcq_dataset** out) {
    return guarded([&] {
        require(options && out, "null argument");
        require(options->utterances_path && options->embeddings_path, "utterances and embeddings paths are required");
        *out = nullptr;

        const std::filesystem::path utterances(options->utterances_path);
        kulcq::Corpus corpus;
        switch (options->utterances_format) {
            case KULCQ_CORPUS_JSONL: corpus = kulcq::load_corpus(utterances, kulcq::CorpusFormat::jsonl); break;
            case KULCQ_CORPUS_CSV: corpus = kulcq::load_corpus(utterances, kulcq::CorpusFormat::csv); break;
            default: corpus = kulcq::load_corpus(utterances); break;
        }
        const auto embeddings = kulcq::load_embeddings(options->embeddings_path);
        const auto clustering = options->clustering_path ? kulcq::load_clustering(options->clustering_path)
                                                         : kulcq::clustering_from_gold(corpus);

        auto dataset = std::make_unique<kulcq_dataset>(kulcq_dataset{kulcq::bind(corpus, embeddings, clustering), {}, {}});
        dataset->inputs.emplace_back("utterances", options->utterances_path);
        dataset->inputs.emplace_back("embeddings", options->embeddings_path);
        dataset->inputs.emplace_back("clustering", options->clustering_path ? options->clustering_path : "<gold labels>");
        if (options->keywords_path) {
            dataset->keywords.precomputed = std::make_shared<const kulcq::PrecomputedKeywords>(
                kulcq::load_precomputed_keywords(options->keywords_path));
            dataset->inputs.emplace_back("keywords", options->keywords_path);
        }
        if (options->stopwords_path) {
            dataset->keywords.stopwords = kulcq::StopwordList::from_file(options->stopwords_path);
            dataset->inputs.emplace_back("stopwords", options->stopwords_path);
        } else {
            dataset->inputs.emplace_back("stopwords", "<bundled english>");
        }
        *out = dataset.release();
    });
}

void kulcq_dataset_free(kulcq_dataset* dataset) { delete dataset; }

size_t kulcq_dataset_utterance_count(const kulcq_dataset* dataset) { return dataset ? dataset->bound.size() : 0; }
size_t kulcq_dataset_cluster_count(const kulcq_dataset* dataset) {
    return dataset ? dataset->bound.cluster_count() : 0;
}
size_t kulcq_dataset_dim(const kulcq_dataset* dataset) { return dataset ? dataset->bound.dim() : 0; }

kulcq_status kulcq_score(const kulcq_dataset* dataset, kulcq_metric metric, const kulcq_score_options* options,
                         kulcq_score_report** out) {
    return guarded([&] {
        require(dataset && out, "null argument");
        *out = nullptr;
        const auto m = to_metric(metric);
        require(m.has_value(), "unknown metric");
        auto report = std::make_unique<kulcq_score_report>();
        report->report = kulcq::score_dataset(dataset->bound, *m, score_config(*dataset, options));
        report->ranking = report->report.ranking();
        *out = report.release();
    });
}

void kulcq_score_report_free(kulcq_score_report* report) { delete report; }

double kulcq_score_report_dataset_score(const kulcq_score_report* report) {
    return report ? report->report.dataset_score : 0.0;
}

size_t kulcq_score_report_cluster_count(const kulcq_score_report* report) {
    return report ? report->ranking.size() : 0;
}

kulcq_status kulcq_score_report_ranked_cluster(const kulcq_score_report* report, size_t rank_index,
                                               const char** cluster_id, double* score) {
    return guarded([&] {
        require(report != nullptr, "null argument");
        if (rank_index >= report->ranking.size()) {
            throw kulcq::Error(kulcq::ErrorCode::range, "rank index out of range");
        }
        const auto& c = report->ranking[rank_index];
        if (cluster_id) *cluster_id = c.cluster_id.c_str();
        if (score) *score = c.score;
    });
}

kulcq_status kulcq_score_report_utterance(const kulcq_score_report* report, size_t index, const char** utterance_id,
                                          double* intra, double* inter, double* score) {
    return guarded([&] {
        require(report != nullptr, "null argument");
        const auto& records = report->report.utterance_records;
        if (index >= records.size()) throw kulcq::Error(kulcq::ErrorCode::range, "utterance index out of range");
        const auto& r = records[index];
        if (utterance_id) *utterance_id = r.utterance_id.c_str();
        if (intra) *intra = r.intra;
        if (inter) *inter = r.inter;
        if (score) *score = r.score;
    });
}

const char* kulcq_score_report_json(kulcq_score_report* report) {
    if (!report) return "";
    if (!report->json) report->json = kulcq::score_report_json(report->report);
    return report->json->c_str();
}

kulcq_status kulcq_score_report_write(const kulcq_score_report* report, const char* out_dir, unsigned formats) {
    return guarded([&] {
        require(report && out_dir, "null argument");
        kulcq::write_score_report(report->report, out_dir, to_formats(formats));
    });
}

kulcq_status kulcq_keywords_write(const kulcq_dataset* dataset, const kulcq_score_options* options,
                                  const char* out_dir) {
    return guarded([&] {
        require(dataset && out_dir, "null argument");
        kulcq::write_keyword_reports(dataset->bound, score_config(*dataset, options).keywords, out_dir);
    });
}

kulcq_status kulcq_sweep(const kulcq_dataset* dataset, const kulcq_sweep_options* options, kulcq_sweep_report** out) {
    return guarded([&] {
        require(dataset && out, "null argument");
        *out = nullptr;
        kulcq_sweep_options defaults;
        kulcq_sweep_options_init(&defaults);
        const kulcq_sweep_options& o = options ? *options : defaults;

        kulcq::SweepConfig config;
        if (o.p_grid) {
            require(o.p_count > 0, "p grid is empty");
            config.p_grid.assign(o.p_grid, o.p_grid + o.p_count);
        }
        config.repeats = o.repeats;
        config.base_seed = o.scoring.seed;
        const unsigned metrics = o.metrics == 0 ? (KULCQ_METRIC_KULCQ | KULCQ_METRIC_SILHOUETTE) : o.metrics;
        require((metrics & ~unsigned{KULCQ_METRIC_KULCQ | KULCQ_METRIC_SILHOUETTE}) == 0, "unknown metric flag");
        config.metrics.clear();
        if (metrics & KULCQ_METRIC_KULCQ) config.metrics.push_back(kulcq::Metric::kulcq);
        if (metrics & KULCQ_METRIC_SILHOUETTE) config.metrics.push_back(kulcq::Metric::silhouette);
        config.scoring = score_config(*dataset, &o.scoring);

        auto report = std::make_unique<kulcq_sweep_report>();
        report->report = kulcq::run_sweep(dataset->bound, config);
        *out = report.release();
    });
}

void kulcq_sweep_report_free(kulcq_sweep_report* report) { delete report; }

size_t kulcq_sweep_report_record_count(const kulcq_sweep_report* report) {
    return report ? report->report.records.size() : 0;
}

double kulcq_sweep_report_drop(const kulcq_sweep_report* report, kulcq_metric metric) {
    const auto m = to_metric(metric);
    if (!report || !m) return 0.0;
    return report->report.drop(*m);
}

kulcq_status kulcq_sweep_report_write(const kulcq_sweep_report* report, const char* out_dir, unsigned formats) {
    return guarded([&] {
        require(report && out_dir, "null argument");
        kulcq::write_sweep_report(report->report, out_dir, to_formats(formats));
    });
}

kulcq_status kulcq_inspect(const kulcq_dataset* dataset, const char* cluster_id, const kulcq_score_options* options,
                           kulcq_inspection** out) {
    return guarded([&] {
        require(dataset && cluster_id && out, "null argument");
        *out = nullptr;
        const auto config = score_config(*dataset, options);
        auto inspection = std::make_unique<kulcq_inspection>();
        inspection->report = kulcq::inspect_cluster(dataset->bound, cluster_id, config);
        inspection->json = kulcq::inspection_json(inspection->report, config);
        inspection->text = kulcq::inspection_text(inspection->report);
        *out = inspection.release();
    });
}

void kulcq_inspection_free(kulcq_inspection* inspection) { delete inspection; }

const char* kulcq_inspection_json(const kulcq_inspection* inspection) {
    return inspection ? inspection->json.c_str() : "";
}

const char* kulcq_inspection_text(const kulcq_inspection* inspection) {
    return inspection ? inspection->text.c_str() : "";
}

size_t kulcq_inspection_rank(const kulcq_inspection* inspection, kulcq_metric metric) {
    if (!inspection) return 0;
    return metric == KULCQ_METRIC_KULCQ ? inspection->report.kulcq_rank : inspection->report.silhouette_rank;
}

kulcq_status kulcq_synthesize(const kulcq_synth_options* options, const char* out_dir) {
    return guarded([&] {
        require(options && out_dir, "null argument");
        kulcq::FixtureConfig config;
        config.n_clusters = options->n_clusters;
        config.per_cluster = options->per_cluster;
        config.dim = options->dim;
        config.separation = options->separation;
        config.seed = options->seed;
        kulcq::write_fixture(kulcq::synthesize_fixture(config), out_dir);
    });
}

}  // extern "C"
