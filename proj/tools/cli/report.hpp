// Copyright 2026 The oralread Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>

#include "pipeline.hpp"

namespace oralread::cli {

inline constexpr int kReportVersion = 1;

// Per-record outputs of `detect` and `classify`.
std::string DetectDocument(const RecordResult& result);
std::string ClassifyDocument(const RecordResult& result);

// The full evaluation report, one entry per model in the given order.
std::string EvalReportJson(std::span<const ModelReport> models, const Analyses& analyses,
                           std::size_t top_k);

// Delimited tables, one row per model.
std::string WordLevelTsv(std::span<const ModelReport> models, const Analyses& analyses);
std::string ErrorDetectionTsv(std::span<const ModelReport> models);
std::string MiscueDetectionTsv(std::span<const ModelReport> models);
std::string AttemptsTsv(std::span<const ModelReport> models);
std::string FalseRecognitionTsv(std::span<const ModelReport> models);

// Human-readable summary laid out like the published result tables.
std::string SummaryText(std::span<const ModelReport> models, const Analyses& analyses,
                        std::size_t top_k);

}  // namespace oralread::cli
