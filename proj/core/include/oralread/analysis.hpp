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
#include <utility>
#include <vector>

#include "oralread/align.hpp"

namespace oralread {

// An alignment together with the token sequences it indexes.
struct AlignedTokens {
  Alignment alignment;
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
};

AlignedTokens AlignTokens(std::vector<std::string> ref, std::vector<std::string> hyp,
                          const CostConfig& cost = {});

struct ConfusionEntry {
  std::string label;  // "x->G" (hyp->ref) for substitutions, the symbol otherwise
  std::size_t count = 0;

  bool operator==(const ConfusionEntry&) const = default;
};

// Ranked view: each list sorted by descending count, ties by label.
struct ConfusionView {
  std::vector<ConfusionEntry> substitutions;
  std::vector<ConfusionEntry> deletions;
  std::vector<ConfusionEntry> insertions;
};

// Substitution, deletion and insertion tallies. Merging is associative and
// commutative.
class ConfusionTable {
 public:
  void Add(const Alignment& alignment, std::span<const std::string> ref,
           std::span<const std::string> hyp);
  void Add(const AlignedTokens& aligned) {
    Add(aligned.alignment, aligned.ref, aligned.hyp);
  }
  void AddSubstitution(std::string ref, std::string hyp, std::size_t n = 1);
  void AddDeletion(std::string ref, std::size_t n = 1);
  void AddInsertion(std::string hyp, std::size_t n = 1);

  ConfusionTable& operator+=(const ConfusionTable& o);

  // Keyed by (ref, hyp).
  const std::map<std::pair<std::string, std::string>, std::size_t>& substitutions()
      const {
    return subs_;
  }
  const std::map<std::string, std::size_t>& deletions() const { return dels_; }
  const std::map<std::string, std::size_t>& insertions() const { return inss_; }

  EditCounts Totals() const;  // matches is always 0
  ConfusionView TopK(std::size_t k) const;

  bool operator==(const ConfusionTable&) const = default;

 private:
  std::map<std::pair<std::string, std::string>, std::size_t> subs_;
  std::map<std::string, std::size_t> dels_;
  std::map<std::string, std::size_t> inss_;
};

ConfusionView ConfusionTables(std::span<const AlignedTokens> alignments, std::size_t k);

// Tab-separated, three sections side by side as in a "top errors" table:
//   Confusion pairs(C)  Cnum  Deletion(D)  Dnum  Insertion(I)  Inum
// followed by one line per rank. Short columns are left empty.
std::string FormatConfusionTsv(const ConfusionView& view);

enum class AttemptLabel { kCorrectWord, kPartOfWord, kIncorrectWord, kOther };

std::string_view AttemptLabelName(AttemptLabel label);  // correct|part|incorrect|other
std::optional<AttemptLabel> ParseAttemptLabel(std::string_view name);

class LabelCountMismatchError : public std::invalid_argument {
 public:
  LabelCountMismatchError(std::size_t labels, std::size_t ref_len);
};

struct AttemptTally {
  std::size_t matched = 0;
  std::size_t total = 0;

  bool operator==(const AttemptTally&) const = default;
};

// Matched/total counts for correct, part-of-word and incorrect attempts.
struct AttemptAccuracy {
  std::map<AttemptLabel, AttemptTally> tallies;

  AttemptAccuracy();
  // nullopt when no token carries the label.
  std::optional<double> Accuracy(AttemptLabel label) const;
  AttemptAccuracy& operator+=(const AttemptAccuracy& o);
};

// ref_hyp aligns the reference transcript (not the prompt) to the
// hypothesis; labels has one entry per reference token.
AttemptAccuracy ComputeAttemptAccuracy(std::span<const AttemptLabel> labels,
                                       const Alignment& ref_hyp);

enum class FalseRecognitionType {
  kOmittedAttempt,
  kRectified,
  kSingleWordReplacement,
  kMultiWordReplacement,
  kMergedWithSubsequent,  // heuristic: suffix containment
  kUnclassified,
};

std::string_view FalseRecognitionName(FalseRecognitionType t);
inline constexpr FalseRecognitionType kFalseRecognitionTypes[] = {
    FalseRecognitionType::kOmittedAttempt,
    FalseRecognitionType::kRectified,
    FalseRecognitionType::kSingleWordReplacement,
    FalseRecognitionType::kMultiWordReplacement,
    FalseRecognitionType::kMergedWithSubsequent,
    FalseRecognitionType::kUnclassified};

// Categorizes how the recognizer handled an incorrectly read reference
// token that it did not reproduce verbatim. Checked in order:
//   merge   the attempt and the following reference token collapse into one
//           hypothesis token that ends with the following token
//   del     -> OmittedAttempt
//   sub     hyp equals the targeted prompt word -> Rectified
//   sub     with adjacent insertions (>= 2 hyp tokens up to the nearest
//           anchors) -> MultiWordReplacement, otherwise SingleWordReplacement
// Throws std::invalid_argument when the token is matched verbatim.
FalseRecognitionType ClassifyFalseRecognition(
    std::size_t ref_index, const Alignment& ref_hyp,
    std::span<const std::string> ref, std::span<const std::string> hyp,
    const std::optional<std::string>& prompt_link);

struct FalseRecognitionTally {
  std::map<FalseRecognitionType, std::size_t> counts;

  FalseRecognitionTally();
  FalseRecognitionTally& operator+=(const FalseRecognitionTally& o);
  std::size_t Total() const;
};

}  // namespace oralread
