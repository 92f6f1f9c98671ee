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
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oralread/errors.hpp"
#include "oralread/normalize.hpp"

namespace oralread {

// Word-level miscue categories. kRestart marks insertions that are restarts
// or repetitions of upcoming prompt words; they are not miscues and never
// enter miscue evaluation.
enum class MiscueLabel { kSS, kOS, kO, kIm, kD, kRestart };

std::string_view MiscueLabelName(MiscueLabel label);  // "SS","OS","O","I_m","D","restart"
std::optional<MiscueLabel> ParseMiscueLabel(std::string_view name);

// The five evaluated categories, in reporting order.
inline constexpr MiscueLabel kMiscueCategories[] = {
    MiscueLabel::kIm, MiscueLabel::kD, MiscueLabel::kOS, MiscueLabel::kSS,
    MiscueLabel::kO};

struct ClassifierConfig {
  double ortho_threshold = 0.8;
  double sem_threshold = 0.7;
  std::size_t restart_window = 5;
  std::size_t ngram_order = 1;
  // When set, a substitution whose spoken word is not in the lexicon
  // (the embedding vocabulary) is labelled O without scoring.
  bool lexicon_gate = false;

  void Validate() const;  // throws std::invalid_argument
};

// Read-only word -> vector table. Safe to share across threads once built.
class EmbeddingProvider {
 public:
  explicit EmbeddingProvider(std::size_t dim);

  // Throws std::invalid_argument on a dimension mismatch or duplicate word.
  void Add(std::string word, std::vector<double> vec);

  // Out-of-vocabulary words are absent; there is no default vector.
  std::optional<std::span<const double>> Lookup(std::string_view word) const;
  bool Contains(std::string_view word) const { return table_.contains(word); }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return table_.size(); }

  // Vocabulary in sorted order.
  std::vector<std::string> Vocabulary() const;

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>, std::less<>> table_;
};

class EmptyWordError : public std::invalid_argument {
 public:
  EmptyWordError() : std::invalid_argument("string cosine of an empty word") {}
};

// Cosine between character n-gram count vectors (n-grams over code points).
// A word shorter than n contributes itself as a single gram.
double StringCosine(std::string_view a, std::string_view b, std::size_t n = 1);

// Embedding cosine, or nullopt when either word is out of vocabulary.
std::optional<double> SemanticSimilarity(std::string_view a, std::string_view b,
                                         const EmbeddingProvider& emb);

// True iff the inserted word occurs as a substring of a prompt token at index
// gap .. gap + window - 1 (clipped to the prompt end).
bool DetectRestart(std::string_view inserted, const WordSeq& prompt,
                   std::size_t gap, std::size_t window);

struct LabeledError {
  ErrorPair error;
  MiscueLabel label = MiscueLabel::kO;
  std::optional<double> ortho;     // set for scored substitutions
  std::optional<double> semantic;  // set when both words have embeddings

  bool IsMiscue() const { return label != MiscueLabel::kRestart; }
};

// Deletion -> D. Insertion -> restart or I_m. Substitution -> OS when the
// orthographic score reaches ortho_threshold, else SS when the semantic
// score reaches sem_threshold, else O. With a null embedding provider no
// substitution is labelled SS.
LabeledError Classify(const ErrorPair& error, const WordSeq& prompt,
                      const ClassifierConfig& cfg, const EmbeddingProvider* emb);

MiscueLabel ClassifyMiscue(const ErrorPair& error, const WordSeq& prompt,
                           const ClassifierConfig& cfg,
                           const EmbeddingProvider* emb);

std::vector<LabeledError> ClassifyAll(std::span<const ErrorPair> errors,
                                      const WordSeq& prompt,
                                      const ClassifierConfig& cfg,
                                      const EmbeddingProvider* emb);

struct MiscueBreakdown {
  DetectionCounts all;
  std::map<MiscueLabel, DetectionCounts> by_label;  // the five categories

  MiscueBreakdown();
  MiscueBreakdown& operator+=(const MiscueBreakdown& o);
};

// Loose matching on (label, location) per category plus the aggregate.
// Restart entries on either side are ignored.
MiscueBreakdown EvaluateMiscues(std::span<const LabeledError> predicted,
                                std::span<const LabeledError> truth);

}  // namespace oralread
