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

#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace oralread::cli {

ModelReport::ModelReport() {
  for (EditKind k : {EditKind::kIns, EditKind::kSub, EditKind::kDel}) truth_by_kind[k] = 0;
}

ModelReport& ModelReport::operator+=(const ModelReport& o) {
  if (model.empty()) model = o.model;
  records += o.records;
  word_counts += o.word_counts;
  word_ref_len += o.word_ref_len;
  phoneme_counts += o.phoneme_counts;
  phoneme_ref_len += o.phoneme_ref_len;
  phoneme_records += o.phoneme_records;
  predicted_errors += o.predicted_errors;
  truth_errors += o.truth_errors;
  for (const auto& [k, n] : o.truth_by_kind) truth_by_kind[k] += n;
  error_detection += o.error_detection;
  miscue_detection += o.miscue_detection;
  restarts_truth += o.restarts_truth;
  restarts_predicted += o.restarts_predicted;
  attempts += o.attempts;
  false_recognition += o.false_recognition;
  word_confusions += o.word_confusions;
  phoneme_confusions += o.phoneme_confusions;
  return *this;
}

std::optional<double> ModelReport::Wer() const {
  if (word_ref_len == 0) return std::nullopt;
  return EditRate(word_counts, word_ref_len);
}

std::optional<double> ModelReport::Per() const {
  if (phoneme_ref_len == 0) return std::nullopt;
  return EditRate(phoneme_counts, phoneme_ref_len);
}

std::optional<double> ModelReport::ErrorRatioValue() const {
  if (truth_errors == 0) return std::nullopt;
  return ErrorRatio(predicted_errors, truth_errors);
}

RecordResult DetectRecord(const CorpusRecord& record, const std::string& model,
                          const Transcript& hypothesis, const RunConfig& cfg) {
  RecordResult r;
  r.id = record.id;
  r.model = model;
  const auto prompt = record.prompt.norms();
  const auto ref = record.reference.words.norms();
  const auto hyp = hypothesis.words.norms();
  r.prompt_ref = AlignTokens(prompt, ref, cfg.cost);
  r.prompt_hyp = AlignTokens(prompt, hyp, cfg.cost);
  r.ref_hyp = AlignTokens(ref, hyp, cfg.cost);
  if (record.reference.phonemes && hypothesis.phonemes) {
    r.phoneme_ref_hyp = AlignTokens(record.reference.phonemes->symbols(),
                                    hypothesis.phonemes->symbols(), cfg.phoneme_cost);
  }
  r.truth_errors = ExtractErrorPairs(r.prompt_ref.alignment, r.prompt_ref.ref,
                                     r.prompt_ref.hyp);
  r.predicted_errors = ExtractErrorPairs(r.prompt_hyp.alignment, r.prompt_hyp.ref,
                                         r.prompt_hyp.hyp);
  return r;
}

namespace {

bool WantsSemantic(std::span<const LabeledError> labels) {
  return std::any_of(labels.begin(), labels.end(), [](const LabeledError& l) {
    return l.error.kind == EditKind::kSub && l.label != MiscueLabel::kOS;
  });
}

std::size_t CountRestarts(std::span<const LabeledError> labels) {
  return static_cast<std::size_t>(std::count_if(
      labels.begin(), labels.end(), [](const LabeledError& l) { return !l.IsMiscue(); }));
}

}  // namespace

void ClassifyRecord(RecordResult& result, const CorpusRecord& record,
                    const RunConfig& cfg, const Resources& res) {
  result.truth_labels = ClassifyAll(result.truth_errors, record.prompt, cfg.classifier,
                                    res.embeddings);
  result.predicted_labels = ClassifyAll(result.predicted_errors, record.prompt,
                                        cfg.classifier, res.embeddings);
  result.wanted_semantic = res.embeddings == nullptr &&
                           (WantsSemantic(result.truth_labels) ||
                            WantsSemantic(result.predicted_labels));
}

ModelReport ScoreRecord(const RecordResult& r, const CorpusRecord& record,
                        const Analyses& analyses) {
  ModelReport m;
  m.model = r.model;
  m.records = 1;

  m.word_counts = r.ref_hyp.alignment.Counts();
  m.word_ref_len = r.ref_hyp.alignment.ref_len;
  if (r.phoneme_ref_hyp) {
    m.phoneme_counts = r.phoneme_ref_hyp->alignment.Counts();
    m.phoneme_ref_len = r.phoneme_ref_hyp->alignment.ref_len;
    m.phoneme_records = 1;
  }

  m.predicted_errors = r.predicted_errors.size();
  m.truth_errors = r.truth_errors.size();
  for (const auto& e : r.truth_errors) ++m.truth_by_kind[e.kind];
  m.error_detection = MatchLooseByKind(r.predicted_errors, r.truth_errors);

  if (analyses.miscues) {
    m.miscue_detection = EvaluateMiscues(r.predicted_labels, r.truth_labels);
    m.restarts_truth = CountRestarts(r.truth_labels);
    m.restarts_predicted = CountRestarts(r.predicted_labels);
  }

  const auto& labels = record.reference.attempt_labels;
  if (analyses.attempts && labels) {
    m.attempts = ComputeAttemptAccuracy(*labels, r.ref_hyp.alignment);
  }
  if (analyses.false_recognition && labels) {
    const auto& ops = r.ref_hyp.alignment.ops;
    for (std::size_t i = 0; i < labels->size(); ++i) {
      if ((*labels)[i] != AttemptLabel::kIncorrectWord) continue;
      const auto op = std::find_if(ops.begin(), ops.end(), [&](const AlignedOp& o) {
        return o.ref_index == i;
      });
      if (op == ops.end() || op->kind == EditKind::kMatch) continue;
      std::optional<std::string> link;
      if (record.reference.prompt_links && (*record.reference.prompt_links)[i]) {
        link = record.prompt[*(*record.reference.prompt_links)[i]].norm;
      }
      ++m.false_recognition.counts[ClassifyFalseRecognition(i, r.ref_hyp.alignment,
                                                             r.ref_hyp.ref, r.ref_hyp.hyp,
                                                             link)];
    }
  }

  if (analyses.confusions) {
    m.word_confusions.Add(r.ref_hyp);
    if (r.phoneme_ref_hyp) m.phoneme_confusions.Add(*r.phoneme_ref_hyp);
  }
  return m;
}

void ParallelFor(std::size_t n, std::size_t jobs,
                 const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

std::map<EditKind, double> CategoryShares(const std::map<EditKind, std::size_t>& counts) {
  std::map<EditKind, double> out;
  std::size_t total = 0;
  for (const auto& [k, n] : counts) total += n;
  if (total == 0) {
    for (const auto& [k, n] : counts) out[k] = 0.0;
    return out;
  }
  // Work in tenths of a percent.
  struct Part {
    EditKind kind;
    long floor;
    double rem;
  };
  std::vector<Part> parts;
  long assigned = 0;
  for (const auto& [k, n] : counts) {
    const double exact = 1000.0 * static_cast<double>(n) / static_cast<double>(total);
    const long f = static_cast<long>(std::floor(exact));
    parts.push_back({k, f, exact - static_cast<double>(f)});
    assigned += f;
  }
  std::vector<std::size_t> order(parts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return parts[a].rem > parts[b].rem;
  });
  for (std::size_t i = 0; assigned < 1000 && i < order.size(); ++i, ++assigned) {
    ++parts[order[i]].floor;
  }
  for (const auto& p : parts) out[p.kind] = static_cast<double>(p.floor) / 10.0;
  return out;
}

}  // namespace oralread::cli
