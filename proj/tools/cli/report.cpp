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

#include "report.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace oralread::cli {

using nlohmann::ordered_json;

namespace {

constexpr EditKind kKindOrder[] = {EditKind::kIns, EditKind::kSub, EditKind::kDel};

std::string KindTitle(EditKind k) {
  switch (k) {
    case EditKind::kIns: return "Insertion";
    case EditKind::kSub: return "Substitution";
    case EditKind::kDel: return "Deletion";
    case EditKind::kMatch: break;
  }
  return "Match";
}

std::string KindKey(EditKind k) {
  switch (k) {
    case EditKind::kIns: return "insertion";
    case EditKind::kSub: return "substitution";
    case EditKind::kDel: return "deletion";
    case EditKind::kMatch: break;
  }
  return "match";
}

std::string FalseRecognitionTitle(FalseRecognitionType t) {
  switch (t) {
    case FalseRecognitionType::kOmittedAttempt: return "ASR omits incorrectly read attempts";
    case FalseRecognitionType::kRectified: return "Rectify incorrect to correct word";
    case FalseRecognitionType::kSingleWordReplacement: return "Replace with a single word";
    case FalseRecognitionType::kMultiWordReplacement: return "Replace with 2 or more words";
    case FalseRecognitionType::kMergedWithSubsequent:
      return "Merge incorrect sounds and subsequent pronunciation (heuristic)";
    case FalseRecognitionType::kUnclassified: return "Unclassified";
  }
  return "";
}

constexpr AttemptLabel kScoredAttempts[] = {
    AttemptLabel::kCorrectWord, AttemptLabel::kPartOfWord, AttemptLabel::kIncorrectWord};

std::string AttemptTitle(AttemptLabel l) {
  switch (l) {
    case AttemptLabel::kCorrectWord: return "Correctly read word";
    case AttemptLabel::kPartOfWord: return "Part-of-word";
    case AttemptLabel::kIncorrectWord: return "Incorrectly read";
    case AttemptLabel::kOther: break;
  }
  return "Other";
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string Fixed(const std::optional<double>& v, int digits) {
  return v ? Fixed(*v, digits) : "-";
}

ordered_json Optional(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json AlignmentJson(const AlignedTokens& a) {
  ordered_json ops = ordered_json::array();
  for (const auto& op : a.alignment.ops) {
    ordered_json o;
    o["kind"] = EditKindName(op.kind);
    o["ref_index"] = op.ref_index ? ordered_json(*op.ref_index) : ordered_json(nullptr);
    o["hyp_index"] = op.hyp_index ? ordered_json(*op.hyp_index) : ordered_json(nullptr);
    o["ref_token"] = op.ref_index ? ordered_json(a.ref[*op.ref_index]) : ordered_json(nullptr);
    o["hyp_token"] = op.hyp_index ? ordered_json(a.hyp[*op.hyp_index]) : ordered_json(nullptr);
    ops.push_back(std::move(o));
  }
  const EditCounts c = a.alignment.Counts();
  ordered_json out;
  out["ref_len"] = a.alignment.ref_len;
  out["hyp_len"] = a.alignment.hyp_len;
  out["counts"] = {{"match", c.matches}, {"sub", c.subs}, {"del", c.dels}, {"ins", c.inss}};
  out["ops"] = std::move(ops);
  return out;
}

ordered_json ErrorJson(const ErrorPair& e) {
  ordered_json o;
  o["kind"] = EditKindName(e.kind);
  o["location"] = e.location;
  o["ref_token"] = e.ref_token ? ordered_json(*e.ref_token) : ordered_json(nullptr);
  o["hyp_token"] = e.hyp_token ? ordered_json(*e.hyp_token) : ordered_json(nullptr);
  return o;
}

ordered_json ErrorsJson(std::span<const ErrorPair> errors) {
  ordered_json out = ordered_json::array();
  for (const auto& e : errors) out.push_back(ErrorJson(e));
  return out;
}

ordered_json LabelsJson(std::span<const LabeledError> labels) {
  ordered_json out = ordered_json::array();
  for (const auto& l : labels) {
    ordered_json o = ErrorJson(l.error);
    o["label"] = MiscueLabelName(l.label);
    o["miscue"] = l.IsMiscue();
    o["ortho"] = Optional(l.ortho);
    o["semantic"] = Optional(l.semantic);
    out.push_back(std::move(o));
  }
  return out;
}

ordered_json PrfJson(const DetectionCounts& c) {
  const PRF p = ComputePrf(c);
  return {{"tp", c.tp},        {"fp", c.fp},         {"fn", c.fn},
          {"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

ordered_json ConfusionJson(const ConfusionView& v) {
  auto list = [](const std::vector<ConfusionEntry>& entries) {
    ordered_json a = ordered_json::array();
    for (const auto& e : entries) a.push_back({{"label", e.label}, {"count", e.count}});
    return a;
  };
  return {{"substitutions", list(v.substitutions)},
          {"deletions", list(v.deletions)},
          {"insertions", list(v.insertions)}};
}

std::string Dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

// Left-aligned columns separated by two spaces.
std::string Columns(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (row.size() > width.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string Tsv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += '\t';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

std::string ShareLabel(EditKind k, const std::map<EditKind, double>& shares) {
  return KindTitle(k) + " (" + Fixed(shares.at(k), 1) + "%)";
}

std::map<EditKind, double> Shares(std::span<const ModelReport> models) {
  // The truth side does not depend on the model.
  return CategoryShares(models.empty() ? ModelReport().truth_by_kind
                                       : models.front().truth_by_kind);
}

std::vector<std::vector<std::string>> ErrorRows(std::span<const ModelReport> models,
                                                int digits) {
  const auto shares = Shares(models);
  std::vector<std::string> head1 = {"Model", "All errors", "", ""};
  std::vector<std::string> head2 = {"", "P", "R", "F1"};
  for (EditKind k : kKindOrder) {
    head1.insert(head1.end(), {ShareLabel(k, shares), "", ""});
    head2.insert(head2.end(), {"P", "R", "F1"});
  }
  std::vector<std::vector<std::string>> rows = {head1, head2};
  for (const auto& m : models) {
    std::vector<std::string> row = {m.model};
    auto add = [&](const DetectionCounts& c) {
      const PRF p = ComputePrf(c);
      row.insert(row.end(), {Fixed(p.precision, digits), Fixed(p.recall, digits),
                             Fixed(p.f1, digits)});
    };
    add(m.error_detection.all);
    for (EditKind k : kKindOrder) add(m.error_detection.by_kind.at(k));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<std::string>> MiscueRows(std::span<const ModelReport> models,
                                                 int digits) {
  std::vector<std::vector<std::string>> rows = {
      {"Model", "All miscues", "", "", "I_m", "D", "OS", "SS", "O"},
      {"", "P", "R", "F1", "F1", "F1", "F1", "F1", "F1"}};
  for (const auto& m : models) {
    const PRF all = ComputePrf(m.miscue_detection.all);
    std::vector<std::string> row = {m.model, Fixed(all.precision, digits),
                                    Fixed(all.recall, digits), Fixed(all.f1, digits)};
    for (MiscueLabel l : kMiscueCategories) {
      row.push_back(Fixed(ComputePrf(m.miscue_detection.by_label.at(l)).f1, digits));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<std::string>> AttemptRows(std::span<const ModelReport> models,
                                                  int digits) {
  std::vector<std::string> head = {"Model"};
  for (AttemptLabel l : kScoredAttempts) {
    const std::size_t n = models.empty() ? 0 : models.front().attempts.tallies.at(l).total;
    head.push_back(AttemptTitle(l) + " (" + std::to_string(n) + ")");
  }
  std::vector<std::vector<std::string>> rows = {head};
  for (const auto& m : models) {
    std::vector<std::string> row = {m.model};
    for (AttemptLabel l : kScoredAttempts) row.push_back(Fixed(m.attempts.Accuracy(l), digits));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<std::string>> FalseRecognitionRows(
    std::span<const ModelReport> models) {
  std::vector<std::string> head = {"Type of ASR false recognition"};
  for (const auto& m : models) head.push_back(m.model);
  std::vector<std::vector<std::string>> rows = {head};
  for (FalseRecognitionType t : kFalseRecognitionTypes) {
    std::vector<std::string> row = {FalseRecognitionTitle(t)};
    for (const auto& m : models) {
      row.push_back(std::to_string(m.false_recognition.counts.at(t)));
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> total = {"Total"};
  for (const auto& m : models) total.push_back(std::to_string(m.false_recognition.Total()));
  rows.push_back(std::move(total));
  return rows;
}

}  // namespace

std::string DetectDocument(const RecordResult& r) {
  ordered_json doc;
  doc["version"] = kReportVersion;
  doc["id"] = r.id;
  doc["model"] = r.model;
  doc["prompt_reference"] = AlignmentJson(r.prompt_ref);
  doc["prompt_hypothesis"] = AlignmentJson(r.prompt_hyp);
  doc["truth_errors"] = ErrorsJson(r.truth_errors);
  doc["predicted_errors"] = ErrorsJson(r.predicted_errors);
  return Dump(doc);
}

std::string ClassifyDocument(const RecordResult& r) {
  ordered_json doc;
  doc["version"] = kReportVersion;
  doc["id"] = r.id;
  doc["model"] = r.model;
  doc["truth"] = LabelsJson(r.truth_labels);
  doc["predicted"] = LabelsJson(r.predicted_labels);
  return Dump(doc);
}

std::string EvalReportJson(std::span<const ModelReport> models, const Analyses& an,
                           std::size_t top_k) {
  ordered_json doc;
  doc["version"] = kReportVersion;
  doc["averaging"] = "micro";
  ordered_json names = ordered_json::array();
  for (const auto& [on, name] :
       {std::pair{an.wer, "wer"}, {an.per, "per"}, {an.errors, "errors"},
        {an.miscues, "miscues"}, {an.attempts, "attempts"},
        {an.false_recognition, "false_recognition"}, {an.confusions, "confusions"}}) {
    if (on) names.push_back(name);
  }
  doc["analyses"] = std::move(names);
  const auto shares = Shares(models);

  ordered_json list = ordered_json::array();
  for (const auto& m : models) {
    ordered_json o;
    o["model"] = m.model;
    o["records"] = m.records;
    if (an.wer) {
      o["wer"] = Optional(m.Wer());
      o["word_counts"] = {{"ref_len", m.word_ref_len}, {"sub", m.word_counts.subs},
                          {"del", m.word_counts.dels}, {"ins", m.word_counts.inss}};
    }
    if (an.per) {
      o["per"] = Optional(m.Per());
      o["phoneme_counts"] = {{"records", m.phoneme_records},
                             {"ref_len", m.phoneme_ref_len},
                             {"sub", m.phoneme_counts.subs},
                             {"del", m.phoneme_counts.dels},
                             {"ins", m.phoneme_counts.inss}};
    }
    if (an.errors) {
      o["error_ratio"] = Optional(m.ErrorRatioValue());
      o["predicted_errors"] = m.predicted_errors;
      o["truth_errors"] = m.truth_errors;
      ordered_json e;
      e["all"] = PrfJson(m.error_detection.all);
      for (EditKind k : kKindOrder) {
        ordered_json c = PrfJson(m.error_detection.by_kind.at(k));
        c["truth_count"] = m.truth_by_kind.at(k);
        c["share_percent"] = shares.at(k);
        e[KindKey(k)] = std::move(c);
      }
      o["error_detection"] = std::move(e);
    }
    if (an.miscues) {
      ordered_json mi;
      mi["all"] = PrfJson(m.miscue_detection.all);
      for (MiscueLabel l : kMiscueCategories) {
        mi[std::string(MiscueLabelName(l))] = PrfJson(m.miscue_detection.by_label.at(l));
      }
      mi["restarts"] = {{"truth", m.restarts_truth}, {"predicted", m.restarts_predicted}};
      o["miscue_detection"] = std::move(mi);
    }
    if (an.attempts) {
      ordered_json at;
      for (AttemptLabel l : kScoredAttempts) {
        const auto& t = m.attempts.tallies.at(l);
        at[std::string(AttemptLabelName(l))] = {
            {"matched", t.matched}, {"total", t.total}, {"accuracy", Optional(m.attempts.Accuracy(l))}};
      }
      o["attempt_accuracy"] = std::move(at);
    }
    if (an.false_recognition) {
      ordered_json fr;
      for (FalseRecognitionType t : kFalseRecognitionTypes) {
        fr[std::string(FalseRecognitionName(t))] = m.false_recognition.counts.at(t);
      }
      fr["total"] = m.false_recognition.Total();
      o["false_recognition"] = std::move(fr);
    }
    if (an.confusions) {
      ordered_json c;
      c["top_k"] = top_k;
      c["word"] = ConfusionJson(m.word_confusions.TopK(top_k));
      if (an.per) c["phoneme"] = ConfusionJson(m.phoneme_confusions.TopK(top_k));
      o["confusions"] = std::move(c);
    }
    list.push_back(std::move(o));
  }
  doc["models"] = std::move(list);
  return Dump(doc);
}

std::string WordLevelTsv(std::span<const ModelReport> models, const Analyses& an) {
  std::vector<std::vector<std::string>> rows = {{"Model", "WER %", "PER %", "Error Ratio"}};
  for (const auto& m : models) {
    auto pct = [](const std::optional<double>& v) {
      return v ? Fixed(*v * 100.0, 2) : std::string("-");
    };
    rows.push_back({m.model, an.wer ? pct(m.Wer()) : "-", an.per ? pct(m.Per()) : "-",
                    an.errors ? Fixed(m.ErrorRatioValue(), 4) : "-"});
  }
  return Tsv(rows);
}

std::string ErrorDetectionTsv(std::span<const ModelReport> models) {
  return Tsv(ErrorRows(models, 4));
}

std::string MiscueDetectionTsv(std::span<const ModelReport> models) {
  return Tsv(MiscueRows(models, 4));
}

std::string AttemptsTsv(std::span<const ModelReport> models) {
  return Tsv(AttemptRows(models, 4));
}

std::string FalseRecognitionTsv(std::span<const ModelReport> models) {
  return Tsv(FalseRecognitionRows(models));
}

std::string SummaryText(std::span<const ModelReport> models, const Analyses& an,
                        std::size_t top_k) {
  std::ostringstream out;
  out << "Models: " << models.size();
  if (!models.empty()) out << ", records: " << models.front().records;
  out << ", averaging: micro\n";

  if (an.wer || an.per || an.errors) {
    out << "\nRecognition performance\n\n";
    std::vector<std::vector<std::string>> rows = {{"Model", "WER %", "PER %", "Error Ratio"}};
    for (const auto& m : models) {
      auto pct = [](const std::optional<double>& v) {
        return v ? Fixed(*v * 100.0, 1) : std::string("-");
      };
      rows.push_back({m.model, an.wer ? pct(m.Wer()) : "-", an.per ? pct(m.Per()) : "-",
                      an.errors ? Fixed(m.ErrorRatioValue(), 2) : "-"});
    }
    out << Columns(rows);
  }
  if (an.errors) {
    out << "\nError classification with loose location and error type\n\n"
        << Columns(ErrorRows(models, 2));
  }
  if (an.miscues) {
    out << "\nReading miscue detection (restarts excluded)\n\n" << Columns(MiscueRows(models, 2));
  }
  if (an.attempts) {
    out << "\nRecognition accuracy by reading attempt\n\n" << Columns(AttemptRows(models, 2));
  }
  if (an.false_recognition) {
    out << "\nFalse recognition of incorrectly read attempts\n\n"
        << Columns(FalseRecognitionRows(models));
  }
  if (an.confusions) {
    for (const auto& m : models) {
      auto section = [&](const char* level, const ConfusionTable& table) {
        const ConfusionView v = table.TopK(top_k);
        out << "\nTop-" << top_k << " " << level << " recognition errors: " << m.model << "\n\n";
        std::vector<std::vector<std::string>> rows = {
            {"Confusion pairs(C)", "Cnum", "Deletion(D)", "Dnum", "Insertion(I)", "Inum"}};
        const std::size_t n = std::max(
            {v.substitutions.size(), v.deletions.size(), v.insertions.size()});
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<std::string> row;
          for (const auto* list : {&v.substitutions, &v.deletions, &v.insertions}) {
            if (i < list->size()) {
              row.push_back((*list)[i].label);
              row.push_back(std::to_string((*list)[i].count));
            } else {
              row.insert(row.end(), {"", ""});
            }
          }
          rows.push_back(std::move(row));
        }
        out << Columns(rows);
      };
      if (an.per) section("phoneme-level", m.phoneme_confusions);
      section("word-level", m.word_confusions);
    }
  }
  return out.str();
}

}  // namespace oralread::cli
