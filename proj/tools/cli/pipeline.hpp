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

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "oralread/analysis.hpp"
#include "oralread/corpusio.hpp"
#include "oralread/errors.hpp"
#include "oralread/miscue.hpp"

namespace oralread::cli {

// Which parts of the evaluation run. Resolved once per invocation.
struct Analyses {
  bool wer = false;
  bool per = false;
  bool errors = false;
  bool miscues = false;
  bool attempts = false;
  bool false_recognition = false;
  bool confusions = false;
};

// Everything computed for one record under one model.
struct RecordResult {
  std::string id;
  std::string model;
  AlignedTokens prompt_ref;
  AlignedTokens prompt_hyp;
  AlignedTokens ref_hyp;
  std::optional<AlignedTokens> phoneme_ref_hyp;
  std::vector<ErrorPair> truth_errors;
  std::vector<ErrorPair> predicted_errors;
  std::vector<LabeledError> truth_labels;
  std::vector<LabeledError> predicted_labels;
  // A substitution would have needed an embedding score but none was loaded.
  bool wanted_semantic = false;
};

// Corpus-level results for one model. Built by merging per-record
// contributions; merging is associative and commutative.
struct ModelReport {
  std::string model;
  std::size_t records = 0;

  EditCounts word_counts;
  std::size_t word_ref_len = 0;
  EditCounts phoneme_counts;
  std::size_t phoneme_ref_len = 0;
  std::size_t phoneme_records = 0;

  std::size_t predicted_errors = 0;
  std::size_t truth_errors = 0;
  std::map<EditKind, std::size_t> truth_by_kind;  // Sub, Del, Ins
  KindBreakdown error_detection;
  MiscueBreakdown miscue_detection;
  std::size_t restarts_truth = 0;
  std::size_t restarts_predicted = 0;

  AttemptAccuracy attempts;
  FalseRecognitionTally false_recognition;

  ConfusionTable word_confusions;
  ConfusionTable phoneme_confusions;

  ModelReport();
  ModelReport& operator+=(const ModelReport& o);

  std::optional<double> Wer() const;
  std::optional<double> Per() const;
  std::optional<double> ErrorRatioValue() const;
};

struct Resources {
  const EmbeddingProvider* embeddings = nullptr;
};

// Aligns prompt/reference/hypothesis and extracts both error sets.
RecordResult DetectRecord(const CorpusRecord& record, const std::string& model,
                          const Transcript& hypothesis, const RunConfig& cfg);

// Labels truth and predicted errors in place.
void ClassifyRecord(RecordResult& result, const CorpusRecord& record,
                    const RunConfig& cfg, const Resources& res);

// Scores one classified record.
ModelReport ScoreRecord(const RecordResult& result, const CorpusRecord& record,
                        const Analyses& analyses);

// Runs fn(i) for i in [0, n) on at most `jobs` threads. The first exception
// in index order is rethrown once every worker has stopped.
void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

// Shares of each truth error kind in percent, rounded to one decimal with
// largest-remainder rounding so that the shares sum to exactly 100.0.
std::map<EditKind, double> CategoryShares(const std::map<EditKind, std::size_t>& counts);

}  // namespace oralread::cli
