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
#include "oralread/miscue.hpp"

#include <algorithm>
#include <cmath>

#include "utf8.hpp"

namespace oralread {

std::string_view MiscueLabelName(MiscueLabel label) {
  switch (label) {
    case MiscueLabel::kSS: return "SS";
    case MiscueLabel::kOS: return "OS";
    case MiscueLabel::kO: return "O";
    case MiscueLabel::kIm: return "I_m";
    case MiscueLabel::kD: return "D";
    case MiscueLabel::kRestart: return "restart";
  }
  return "";
}

std::optional<MiscueLabel> ParseMiscueLabel(std::string_view name) {
  for (MiscueLabel l : {MiscueLabel::kSS, MiscueLabel::kOS, MiscueLabel::kO,
                        MiscueLabel::kIm, MiscueLabel::kD, MiscueLabel::kRestart}) {
    if (MiscueLabelName(l) == name) return l;
  }
  return std::nullopt;
}

void ClassifierConfig::Validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(ortho_threshold) || !in_unit(sem_threshold)) {
    throw std::invalid_argument("classifier thresholds must lie in [0, 1]");
  }
  if (restart_window < 1) throw std::invalid_argument("restart_window must be >= 1");
  if (ngram_order < 1) throw std::invalid_argument("ngram_order must be >= 1");
}

EmbeddingProvider::EmbeddingProvider(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
}

void EmbeddingProvider::Add(std::string word, std::vector<double> vec) {
  if (vec.size() != dim_) {
    throw std::invalid_argument("embedding for '" + word + "' has " +
                                std::to_string(vec.size()) + " values, expected " +
                                std::to_string(dim_));
  }
  auto [it, inserted] = table_.emplace(std::move(word), std::move(vec));
  if (!inserted) throw std::invalid_argument("duplicate embedding for '" + it->first + "'");
}

std::optional<std::span<const double>> EmbeddingProvider::Lookup(
    std::string_view word) const {
  auto it = table_.find(word);
  if (it == table_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

std::vector<std::string> EmbeddingProvider::Vocabulary() const {
  std::vector<std::string> out;
  out.reserve(table_.size());
  for (const auto& [w, v] : table_) out.push_back(w);
  return out;
}

namespace {

std::map<std::u32string, int> NgramCounts(std::string_view word, std::size_t n) {
  const auto cps = utf8::Decode(word);
  std::map<std::u32string, int> counts;
  if (cps.size() < n) {
    ++counts[std::u32string(cps.begin(), cps.end())];
    return counts;
  }
  for (std::size_t i = 0; i + n <= cps.size(); ++i) {
    ++counts[std::u32string(cps.begin() + i, cps.begin() + i + n)];
  }
  return counts;
}

}  // namespace

double StringCosine(std::string_view a, std::string_view b, std::size_t n) {
  if (a.empty() || b.empty()) throw EmptyWordError();
  if (n == 0) throw std::invalid_argument("n-gram order must be >= 1");
  const auto ca = NgramCounts(a, n);
  const auto cb = NgramCounts(b, n);
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [g, c] : ca) {
    na += static_cast<double>(c) * c;
    auto it = cb.find(g);
    if (it != cb.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto& [g, c] : cb) nb += static_cast<double>(c) * c;
  if (ca == cb) return 1.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::optional<double> SemanticSimilarity(std::string_view a, std::string_view b,
                                         const EmbeddingProvider& emb) {
  const auto va = emb.Lookup(a);
  const auto vb = emb.Lookup(b);
  if (!va || !vb) return std::nullopt;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < va->size(); ++i) {
    dot += (*va)[i] * (*vb)[i];
    na += (*va)[i] * (*va)[i];
    nb += (*vb)[i] * (*vb)[i];
  }
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  if (a == b) return 1.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

bool DetectRestart(std::string_view inserted, const WordSeq& prompt,
                   std::size_t gap, std::size_t window) {
  if (inserted.empty()) return false;
  const std::size_t end = std::min(prompt.size(), gap + window);
  for (std::size_t i = gap; i < end; ++i) {
    if (prompt[i].norm.find(inserted) != std::string::npos) return true;
  }
  return false;
}

LabeledError Classify(const ErrorPair& error, const WordSeq& prompt,
                      const ClassifierConfig& cfg, const EmbeddingProvider* emb) {
  LabeledError out{error, MiscueLabel::kO, std::nullopt, std::nullopt};
  switch (error.kind) {
    case EditKind::kDel:
      out.label = MiscueLabel::kD;
      return out;
    case EditKind::kIns: {
      if (!error.hyp_token) throw std::invalid_argument("insertion without hyp token");
      out.label = DetectRestart(*error.hyp_token, prompt, error.location,
                                cfg.restart_window)
                      ? MiscueLabel::kRestart
                      : MiscueLabel::kIm;
      return out;
    }
    case EditKind::kSub:
      break;
    case EditKind::kMatch:
      throw std::invalid_argument("match ops are not errors");
  }

  if (!error.hyp_token) throw std::invalid_argument("substitution without hyp token");
  std::string prompt_word;
  if (error.ref_token) {
    prompt_word = *error.ref_token;
  } else if (error.location < prompt.size()) {
    prompt_word = prompt[error.location].norm;
  } else {
    throw std::invalid_argument("substitution location outside prompt");
  }
  const std::string& spoken = *error.hyp_token;

  if (cfg.lexicon_gate && (emb == nullptr || !emb->Contains(spoken))) {
    out.label = MiscueLabel::kO;
    return out;
  }
  out.ortho = StringCosine(prompt_word, spoken, cfg.ngram_order);
  if (emb != nullptr) out.semantic = SemanticSimilarity(prompt_word, spoken, *emb);

  if (*out.ortho >= cfg.ortho_threshold) {
    out.label = MiscueLabel::kOS;
  } else if (out.semantic && *out.semantic >= cfg.sem_threshold) {
    out.label = MiscueLabel::kSS;
  } else {
    out.label = MiscueLabel::kO;
  }
  return out;
}

MiscueLabel ClassifyMiscue(const ErrorPair& error, const WordSeq& prompt,
                           const ClassifierConfig& cfg,
                           const EmbeddingProvider* emb) {
  return Classify(error, prompt, cfg, emb).label;
}

std::vector<LabeledError> ClassifyAll(std::span<const ErrorPair> errors,
                                      const WordSeq& prompt,
                                      const ClassifierConfig& cfg,
                                      const EmbeddingProvider* emb) {
  std::vector<LabeledError> out;
  out.reserve(errors.size());
  for (const auto& e : errors) out.push_back(Classify(e, prompt, cfg, emb));
  return out;
}

MiscueBreakdown::MiscueBreakdown() {
  for (MiscueLabel l : kMiscueCategories) by_label[l] = {};
}

MiscueBreakdown& MiscueBreakdown::operator+=(const MiscueBreakdown& o) {
  all += o.all;
  for (const auto& [l, c] : o.by_label) by_label[l] += c;
  return *this;
}

MiscueBreakdown EvaluateMiscues(std::span<const LabeledError> predicted,
                                std::span<const LabeledError> truth) {
  auto keys = [](std::span<const LabeledError> xs, std::optional<MiscueLabel> only) {
    std::vector<MatchKey> out;
    for (const auto& x : xs) {
      if (!x.IsMiscue()) continue;
      if (only && x.label != *only) continue;
      out.emplace_back(static_cast<int>(x.label), x.error.location);
    }
    return out;
  };
  MiscueBreakdown out;
  out.all = MatchKeys(keys(predicted, std::nullopt), keys(truth, std::nullopt)).counts;
  for (auto& [label, counts] : out.by_label) {
    counts = MatchKeys(keys(predicted, label), keys(truth, label)).counts;
  }
  return out;
}

}  // namespace oralread
