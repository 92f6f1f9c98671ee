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

#include "oralread/analysis.hpp"

#include <algorithm>
#include <sstream>

namespace oralread {

AlignedTokens AlignTokens(std::vector<std::string> ref, std::vector<std::string> hyp,
                          const CostConfig& cost) {
  AlignedTokens out;
  out.alignment = Align(ref, hyp, cost);
  out.ref = std::move(ref);
  out.hyp = std::move(hyp);
  return out;
}

void ConfusionTable::Add(const Alignment& alignment, std::span<const std::string> ref,
                         std::span<const std::string> hyp) {
  for (const auto& op : alignment.ops) {
    switch (op.kind) {
      case EditKind::kMatch:
        break;
      case EditKind::kSub:
        AddSubstitution(ref[*op.ref_index], hyp[*op.hyp_index]);
        break;
      case EditKind::kDel:
        AddDeletion(ref[*op.ref_index]);
        break;
      case EditKind::kIns:
        AddInsertion(hyp[*op.hyp_index]);
        break;
    }
  }
}

void ConfusionTable::AddSubstitution(std::string ref, std::string hyp, std::size_t n) {
  subs_[{std::move(ref), std::move(hyp)}] += n;
}

void ConfusionTable::AddDeletion(std::string ref, std::size_t n) {
  dels_[std::move(ref)] += n;
}

void ConfusionTable::AddInsertion(std::string hyp, std::size_t n) {
  inss_[std::move(hyp)] += n;
}

ConfusionTable& ConfusionTable::operator+=(const ConfusionTable& o) {
  for (const auto& [k, n] : o.subs_) subs_[k] += n;
  for (const auto& [k, n] : o.dels_) dels_[k] += n;
  for (const auto& [k, n] : o.inss_) inss_[k] += n;
  return *this;
}

EditCounts ConfusionTable::Totals() const {
  EditCounts c;
  for (const auto& [k, n] : subs_) c.subs += n;
  for (const auto& [k, n] : dels_) c.dels += n;
  for (const auto& [k, n] : inss_) c.inss += n;
  return c;
}

namespace {

void RankAndTruncate(std::vector<ConfusionEntry>& entries, std::size_t k) {
  std::sort(entries.begin(), entries.end(),
            [](const ConfusionEntry& a, const ConfusionEntry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.label < b.label;
            });
  if (entries.size() > k) entries.resize(k);
}

}  // namespace

ConfusionView ConfusionTable::TopK(std::size_t k) const {
  ConfusionView view;
  for (const auto& [key, n] : subs_) {
    view.substitutions.push_back({key.second + "->" + key.first, n});
  }
  for (const auto& [key, n] : dels_) view.deletions.push_back({key, n});
  for (const auto& [key, n] : inss_) view.insertions.push_back({key, n});
  RankAndTruncate(view.substitutions, k);
  RankAndTruncate(view.deletions, k);
  RankAndTruncate(view.insertions, k);
  return view;
}

ConfusionView ConfusionTables(std::span<const AlignedTokens> alignments, std::size_t k) {
  ConfusionTable table;
  for (const auto& a : alignments) table.Add(a);
  return table.TopK(k);
}

std::string FormatConfusionTsv(const ConfusionView& view) {
  std::ostringstream out;
  out << "Confusion pairs(C)\tCnum\tDeletion(D)\tDnum\tInsertion(I)\tInum\n";
  const std::size_t rows = std::max(
      {view.substitutions.size(), view.deletions.size(), view.insertions.size()});
  auto cell = [&](const std::vector<ConfusionEntry>& list, std::size_t i) {
    if (i < list.size()) {
      out << list[i].label << '\t' << list[i].count;
    } else {
      out << '\t';
    }
  };
  for (std::size_t i = 0; i < rows; ++i) {
    cell(view.substitutions, i);
    out << '\t';
    cell(view.deletions, i);
    out << '\t';
    cell(view.insertions, i);
    out << '\n';
  }
  return out.str();
}

std::string_view AttemptLabelName(AttemptLabel label) {
  switch (label) {
    case AttemptLabel::kCorrectWord: return "correct";
    case AttemptLabel::kPartOfWord: return "part";
    case AttemptLabel::kIncorrectWord: return "incorrect";
    case AttemptLabel::kOther: return "other";
  }
  return "";
}

std::optional<AttemptLabel> ParseAttemptLabel(std::string_view name) {
  for (AttemptLabel l : {AttemptLabel::kCorrectWord, AttemptLabel::kPartOfWord,
                         AttemptLabel::kIncorrectWord, AttemptLabel::kOther}) {
    if (AttemptLabelName(l) == name) return l;
  }
  return std::nullopt;
}

LabelCountMismatchError::LabelCountMismatchError(std::size_t labels, std::size_t ref_len)
    : std::invalid_argument(std::to_string(labels) + " attempt labels for " +
                            std::to_string(ref_len) + " reference tokens") {}

AttemptAccuracy::AttemptAccuracy() {
  for (AttemptLabel l : {AttemptLabel::kCorrectWord, AttemptLabel::kPartOfWord,
                         AttemptLabel::kIncorrectWord}) {
    tallies[l] = {};
  }
}

std::optional<double> AttemptAccuracy::Accuracy(AttemptLabel label) const {
  auto it = tallies.find(label);
  if (it == tallies.end() || it->second.total == 0) return std::nullopt;
  return static_cast<double>(it->second.matched) /
         static_cast<double>(it->second.total);
}

AttemptAccuracy& AttemptAccuracy::operator+=(const AttemptAccuracy& o) {
  for (const auto& [l, t] : o.tallies) {
    tallies[l].matched += t.matched;
    tallies[l].total += t.total;
  }
  return *this;
}

AttemptAccuracy ComputeAttemptAccuracy(std::span<const AttemptLabel> labels,
                                       const Alignment& ref_hyp) {
  if (labels.size() != ref_hyp.ref_len) {
    throw LabelCountMismatchError(labels.size(), ref_hyp.ref_len);
  }
  AttemptAccuracy out;
  for (const auto& op : ref_hyp.ops) {
    if (!op.ref_index) continue;
    auto it = out.tallies.find(labels[*op.ref_index]);
    if (it == out.tallies.end()) continue;  // "other" is not scored
    ++it->second.total;
    if (op.kind == EditKind::kMatch) ++it->second.matched;
  }
  return out;
}

std::string_view FalseRecognitionName(FalseRecognitionType t) {
  switch (t) {
    case FalseRecognitionType::kOmittedAttempt: return "omitted_attempt";
    case FalseRecognitionType::kRectified: return "rectified";
    case FalseRecognitionType::kSingleWordReplacement: return "single_word_replacement";
    case FalseRecognitionType::kMultiWordReplacement: return "multi_word_replacement";
    case FalseRecognitionType::kMergedWithSubsequent: return "merged_with_subsequent";
    case FalseRecognitionType::kUnclassified: return "unclassified";
  }
  return "";
}

namespace {

std::optional<std::size_t> FindRefOp(const Alignment& a, std::size_t ref_index) {
  for (std::size_t k = 0; k < a.ops.size(); ++k) {
    if (a.ops[k].ref_index == ref_index) return k;
  }
  return std::nullopt;
}

bool EndsWithLonger(std::string_view whole, std::string_view tail) {
  return whole.size() > tail.size() && whole.ends_with(tail);
}

}  // namespace

FalseRecognitionType ClassifyFalseRecognition(
    std::size_t ref_index, const Alignment& ref_hyp,
    std::span<const std::string> ref, std::span<const std::string> hyp,
    const std::optional<std::string>& prompt_link) {
  const auto k = FindRefOp(ref_hyp, ref_index);
  if (!k) return FalseRecognitionType::kUnclassified;
  const AlignedOp& op = ref_hyp.ops[*k];
  if (op.kind == EditKind::kMatch) {
    throw std::invalid_argument("attempt was recognized verbatim");
  }

  if (ref_index + 1 < ref.size()) {
    const std::string& next = ref[ref_index + 1];
    const auto nk = FindRefOp(ref_hyp, ref_index + 1);
    if (nk) {
      const AlignedOp& next_op = ref_hyp.ops[*nk];
      if (op.kind == EditKind::kSub && next_op.kind == EditKind::kDel &&
          hyp[*op.hyp_index].ends_with(next)) {
        return FalseRecognitionType::kMergedWithSubsequent;
      }
      if (op.kind == EditKind::kDel && next_op.kind == EditKind::kSub &&
          EndsWithLonger(hyp[*next_op.hyp_index], next)) {
        return FalseRecognitionType::kMergedWithSubsequent;
      }
    }
  }

  if (op.kind == EditKind::kDel) return FalseRecognitionType::kOmittedAttempt;

  const std::string& spoken = hyp[*op.hyp_index];
  if (prompt_link && spoken == *prompt_link) return FalseRecognitionType::kRectified;

  // Hypothesis tokens attributed to this attempt: its own plus any run of
  // insertions on either side, stopping at a match anchor or at another
  // reference token's op.
  std::size_t span = 1;
  for (std::size_t q = *k; q-- > 0 && ref_hyp.ops[q].kind == EditKind::kIns;) ++span;
  for (std::size_t q = *k + 1;
       q < ref_hyp.ops.size() && ref_hyp.ops[q].kind == EditKind::kIns; ++q) {
    ++span;
  }
  return span >= 2 ? FalseRecognitionType::kMultiWordReplacement
                   : FalseRecognitionType::kSingleWordReplacement;
}

FalseRecognitionTally::FalseRecognitionTally() {
  for (auto t : kFalseRecognitionTypes) counts[t] = 0;
}

FalseRecognitionTally& FalseRecognitionTally::operator+=(const FalseRecognitionTally& o) {
  for (const auto& [t, n] : o.counts) counts[t] += n;
  return *this;
}

std::size_t FalseRecognitionTally::Total() const {
  std::size_t n = 0;
  for (const auto& [t, c] : counts) n += c;
  return n;
}

}  // namespace oralread
