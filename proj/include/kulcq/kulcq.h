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

/*
 * C interface to the KULCQ clustering-quality toolkit.
 *
 * All objects are opaque handles created by a kulcq_*_create / kulcq_* call and
 * released with the matching kulcq_*_free. Every fallible function returns a
 * kulcq_status; on failure kulcq_last_error() holds a one-line message for the
 * calling thread until its next API call. Strings returned by accessor
 * functions are owned by the handle and stay valid until it is freed.
 */
#ifndef KULCQ_KULCQ_H
#define KULCQ_KULCQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KULCQ_BUILDING_LIBRARY)
#    define KULCQ_API __declspec(dllexport)
#  else
#    define KULCQ_API __declspec(dllimport)
#  endif
#else
#  define KULCQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kulcq_status {
    KULCQ_OK = 0,
    KULCQ_E_IO,
    KULCQ_E_PARSE,
    KULCQ_E_EMPTY_FILE,
    KULCQ_E_EMPTY_TEXT,
    KULCQ_E_DUPLICATE_ID,
    KULCQ_E_DIM_MISMATCH,
    KULCQ_E_ZERO_VECTOR,
    KULCQ_E_LENGTH_MISMATCH,
    KULCQ_E_MISSING_EMBEDDING,
    KULCQ_E_MISSING_ASSIGNMENT,
    KULCQ_E_UNKNOWN_ID,
    KULCQ_E_NO_GOLD,
    KULCQ_E_NGRAM,
    KULCQ_E_RANGE,
    KULCQ_E_CLUSTER,
    KULCQ_E_SINGLE_CLUSTER,
    KULCQ_E_ARG,
    KULCQ_E_INTERNAL
} kulcq_status;

typedef enum kulcq_metric {
    KULCQ_METRIC_KULCQ = 1,
    KULCQ_METRIC_SILHOUETTE = 2
} kulcq_metric;

/* Bit flags for output formats. */
#define KULCQ_FORMAT_CSV 1u
#define KULCQ_FORMAT_JSON 2u

typedef enum kulcq_corpus_format {
    KULCQ_CORPUS_AUTO = 0, /* by extension: .csv is CSV, anything else JSONL */
    KULCQ_CORPUS_JSONL,
    KULCQ_CORPUS_CSV
} kulcq_corpus_format;

typedef struct kulcq_dataset kulcq_dataset;
typedef struct kulcq_score_report kulcq_score_report;
typedef struct kulcq_sweep_report kulcq_sweep_report;
typedef struct kulcq_inspection kulcq_inspection;

typedef struct kulcq_dataset_options {
    const char* utterances_path;
    kulcq_corpus_format utterances_format;
    const char* embeddings_path;
    const char* clustering_path; /* NULL: build clusters from gold labels */
    const char* keywords_path;   /* optional precomputed keyword file */
    const char* stopwords_path;  /* optional; NULL uses the bundled list */
} kulcq_dataset_options;

typedef struct kulcq_score_options {
    size_t n;             /* cluster profile size, default 10 */
    size_t statistical_k; /* statistical keywords per utterance, default 5 */
    uint64_t seed;        /* echoed into reports */
    unsigned jobs;        /* worker threads, default 1 */
} kulcq_score_options;

typedef struct kulcq_sweep_options {
    kulcq_score_options scoring;
    const double* p_grid; /* NULL: 0.0, 0.1, ..., 0.9 */
    size_t p_count;
    size_t repeats;       /* default 5 */
    unsigned metrics;     /* OR of kulcq_metric values; 0 means both */
} kulcq_sweep_options;

typedef struct kulcq_synth_options {
    size_t n_clusters;
    size_t per_cluster;
    size_t dim;
    double separation;
    uint64_t seed;
} kulcq_synth_options;

KULCQ_API const char* kulcq_version(void);

/* "E_IO", "E_RANGE", ... ; "OK" for KULCQ_OK. */
KULCQ_API const char* kulcq_status_name(kulcq_status status);
KULCQ_API const char* kulcq_last_error(void);

KULCQ_API void kulcq_dataset_options_init(kulcq_dataset_options* options);
KULCQ_API void kulcq_score_options_init(kulcq_score_options* options);
KULCQ_API void kulcq_sweep_options_init(kulcq_sweep_options* options);
KULCQ_API void kulcq_synth_options_init(kulcq_synth_options* options);

/* Loads and binds utterances, embeddings and clustering. */
KULCQ_API kulcq_status kulcq_dataset_open(const kulcq_dataset_options* options, kulcq_dataset** out);
KULCQ_API void kulcq_dataset_free(kulcq_dataset* dataset);
KULCQ_API size_t kulcq_dataset_utterance_count(const kulcq_dataset* dataset);
KULCQ_API size_t kulcq_dataset_cluster_count(const kulcq_dataset* dataset);
KULCQ_API size_t kulcq_dataset_dim(const kulcq_dataset* dataset);

KULCQ_API kulcq_status kulcq_score(const kulcq_dataset* dataset, kulcq_metric metric,
                                   const kulcq_score_options* options, kulcq_score_report** out);
KULCQ_API void kulcq_score_report_free(kulcq_score_report* report);
KULCQ_API double kulcq_score_report_dataset_score(const kulcq_score_report* report);
KULCQ_API size_t kulcq_score_report_cluster_count(const kulcq_score_report* report);
/* Cluster at position `rank_index` of the ranking (0 = best). */
KULCQ_API kulcq_status kulcq_score_report_ranked_cluster(const kulcq_score_report* report, size_t rank_index,
                                                         const char** cluster_id, double* score);
KULCQ_API kulcq_status kulcq_score_report_utterance(const kulcq_score_report* report, size_t index,
                                                    const char** utterance_id, double* intra, double* inter,
                                                    double* score);
KULCQ_API const char* kulcq_score_report_json(kulcq_score_report* report);
KULCQ_API kulcq_status kulcq_score_report_write(const kulcq_score_report* report, const char* out_dir,
                                                unsigned formats);

/* utterance_keywords.jsonl and cluster_profiles.jsonl in out_dir. */
KULCQ_API kulcq_status kulcq_keywords_write(const kulcq_dataset* dataset, const kulcq_score_options* options,
                                            const char* out_dir);

KULCQ_API kulcq_status kulcq_sweep(const kulcq_dataset* dataset, const kulcq_sweep_options* options,
                                   kulcq_sweep_report** out);
KULCQ_API void kulcq_sweep_report_free(kulcq_sweep_report* report);
KULCQ_API size_t kulcq_sweep_report_record_count(const kulcq_sweep_report* report);
/* Mean score at the first grid point minus the mean at the last one. */
KULCQ_API double kulcq_sweep_report_drop(const kulcq_sweep_report* report, kulcq_metric metric);
KULCQ_API kulcq_status kulcq_sweep_report_write(const kulcq_sweep_report* report, const char* out_dir,
                                                unsigned formats);

KULCQ_API kulcq_status kulcq_inspect(const kulcq_dataset* dataset, const char* cluster_id,
                                     const kulcq_score_options* options, kulcq_inspection** out);
KULCQ_API void kulcq_inspection_free(kulcq_inspection* inspection);
KULCQ_API const char* kulcq_inspection_json(const kulcq_inspection* inspection);
KULCQ_API const char* kulcq_inspection_text(const kulcq_inspection* inspection);
KULCQ_API size_t kulcq_inspection_rank(const kulcq_inspection* inspection, kulcq_metric metric);

/* Writes utterances.jsonl, embeddings.jsonl, clustering.jsonl and keywords.jsonl. */
KULCQ_API kulcq_status kulcq_synthesize(const kulcq_synth_options* options, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* KULCQ_KULCQ_H */
