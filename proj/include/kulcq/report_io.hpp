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

#include <filesystem>
#include <string>
#include <vector>

#include "kulcq/experiments.hpp"
#include "kulcq/keywords.hpp"
#include "kulcq/metrics.hpp"

namespace kulcq {

std::string_view version() noexcept;

struct OutputFormats {
    bool csv = true;
    bool json = true;
};

std::string score_report_json(const ScoreReport& report);
std::string score_utterances_csv(const ScoreReport& report);
std::string score_clusters_csv(const ScoreReport& report);
std::string score_dataset_csv(const ScoreReport& report);

/// <metric>_utterances.csv, <metric>_clusters.csv, <metric>_dataset.csv and
/// <metric>_report.json. Returns the written paths.
std::vector<std::filesystem::path> write_score_report(const ScoreReport& report,
                                                      const std::filesystem::path& dir,
                                                      OutputFormats formats);

std::string sweep_csv(const SweepReport& report);
std::string sweep_plotdata_csv(const SweepReport& report);
std::string sweep_json(const SweepReport& report);

/// sweep.csv, plotdata.csv and sweep.json.
std::vector<std::filesystem::path> write_sweep_report(const SweepReport& report,
                                                      const std::filesystem::path& dir,
                                                      OutputFormats formats);

std::string inspection_json(const InspectionReport& report, const ScoreConfig& config);
std::string inspection_text(const InspectionReport& report);

/// utterance_keywords.jsonl (keyword file format) and cluster_profiles.jsonl.
std::vector<std::filesystem::path> write_keyword_reports(const BoundDataset& dataset,
                                                         const KeywordConfig& config,
                                                         const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace kulcq
