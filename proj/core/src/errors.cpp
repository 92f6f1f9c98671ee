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
#include "oralread/errors.hpp"

#include <algorithm>

namespace oralread {

std::vector<ErrorPair> ExtractErrorPairs(const Alignment& alignment) {
  std::vector<ErrorPair> out;
  const auto& ops = alignment.ops;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto& op = ops[k];
    switch (op.kind) {
      case EditKind::kMatch:
        break;
      case EditKind::kSub:
      case EditKind::kDel:
        out.push_back({op.kind, *op.ref_index, std::nullopt, std::nullopt});
        break;
      case EditKind::kIns: {
        std::size_t gap = alignment.ref_len;
        for (std::size_t q = k + 1; q < ops.size(); ++q) {
          if (ops[q].ref_index) {
            gap = *ops[q].ref_index;
            break;
          }
        }
        out.push_back({EditKind::kIns, gap, std::nullopt, std::nullopt});
        break;
      }
    }
  }
  return out;
}

std::vector<ErrorPair> ExtractErrorPairs(const Alignment& alignment,
                                         std::span<const std::string> ref,
                                         std::span<const std::string> hyp) {
  if (ref.size() != alignment.ref_len || hyp.size() != alignment.hyp_len) {
    throw std::invalid_argument("token sequences do not match alignment lengths");
  }
  std::vector<ErrorPair> out = ExtractErrorPairs(alignment);
  std::size_t e = 0;
  for (const auto& op : alignment.ops) {
    if (op.kind == EditKind::kMatch) continue;
    if (op.ref_index) out[e].ref_token = ref[*op.ref_index];
    if (op.hyp_index) out[e].hyp_token = hyp[*op.hyp_index];
    ++e;
  }
  return out;
}

double ErrorRatio(std::size_t predicted, std::size_t truth) {
  if (truth == 0) throw NoTrueErrorsError();
  return static_cast<double>(predicted) / static_cast<double>(truth);
}

MatchResult MatchKeys(std::span<const MatchKey> predicted,
                      std::span<const MatchKey> truth) {
  std::map<MatchKey, std::vector<std::size_t>> open_truth;
  for (std::size_t t = 0; t < truth.size(); ++t) open_truth[truth[t]].push_back(t);
  std::map<MatchKey, std::size_t> used;

  MatchResult result;
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    auto it = open_truth.find(predicted[p]);
    if (it == open_truth.end()) continue;
    std::size_t& n = used[predicted[p]];
    if (n < it->second.size()) {
      result.matched.emplace_back(p, it->second[n]);
      ++n;
    }
  }
  result.counts.tp = result.matched.size();
  result.counts.fp = predicted.size() - result.counts.tp;
  result.counts.fn = truth.size() - result.counts.tp;
  return result;
}

namespace {

std::vector<MatchKey> Keys(std::span<const ErrorPair> pairs) {
  std::vector<MatchKey> keys;
  keys.reserve(pairs.size());
  for (const auto& e : pairs) keys.emplace_back(static_cast<int>(e.kind), e.location);
  return keys;
}

}  // namespace

MatchResult MatchLoose(std::span<const ErrorPair> predicted,
                       std::span<const ErrorPair> truth) {
  const auto p = Keys(predicted);
  const auto t = Keys(truth);
  return MatchKeys(p, t);
}

double F1Score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

PRF ComputePrf(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp == 0 && fp == 0 && fn == 0) return {1.0, 1.0, 1.0};
  PRF out;
  if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  out.f1 = F1Score(out.precision, out.recall);
  return out;
}

KindBreakdown::KindBreakdown() {
  for (EditKind k : {EditKind::kIns, EditKind::kSub, EditKind::kDel}) by_kind[k] = {};
}

KindBreakdown& KindBreakdown::operator+=(const KindBreakdown& o) {
  all += o.all;
  for (const auto& [k, c] : o.by_kind) by_kind[k] += c;
  return *this;
}

KindBreakdown MatchLooseByKind(std::span<const ErrorPair> predicted,
                               std::span<const ErrorPair> truth) {
  KindBreakdown out;
  out.all = MatchLoose(predicted, truth).counts;
  for (auto& [kind, counts] : out.by_kind) {
    std::vector<ErrorPair> p;
    std::vector<ErrorPair> t;
    std::copy_if(predicted.begin(), predicted.end(), std::back_inserter(p),
                 [kind = kind](const ErrorPair& e) { return e.kind == kind; });
    std::copy_if(truth.begin(), truth.end(), std::back_inserter(t),
                 [kind = kind](const ErrorPair& e) { return e.kind == kind; });
    counts = MatchLoose(p, t).counts;
  }
  return out;
}

}  // namespace oralread
