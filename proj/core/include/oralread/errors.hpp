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
#include <utility>
#include <vector>

#include "oralread/align.hpp"

namespace oralread {

// A reading error relative to the prompt. For Sub/Del, location is the
// prompt token index; for Ins it is a gap index g in [0, prompt_len]
// meaning "inserted before prompt token g".
struct ErrorPair {
  EditKind kind = EditKind::kSub;
  std::size_t location = 0;
  std::optional<std::string> ref_token;  // Sub, Del
  std::optional<std::string> hyp_token;  // Sub, Ins

  bool operator==(const ErrorPair&) const = default;
};

// Reads one ErrorPair off each non-match op. An insertion is anchored to
// the ref index of the next non-insertion op, or ref_len when none follows.
std::vector<ErrorPair> ExtractErrorPairs(const Alignment& alignment);

// Same, filling ref_token/hyp_token from the aligned sequences.
std::vector<ErrorPair> ExtractErrorPairs(const Alignment& alignment,
                                         std::span<const std::string> ref,
                                         std::span<const std::string> hyp);

class NoTrueErrorsError : public std::invalid_argument {
 public:
  NoTrueErrorsError()
      : std::invalid_argument("error ratio undefined: no true errors") {}
};

// predicted / truth; >1 means over-detection.
double ErrorRatio(std::size_t predicted, std::size_t truth);

// Pooled true/false positive and false negative counts. Addition is
// associative and commutative so per-record results merge in any order.
struct DetectionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  DetectionCounts& operator+=(const DetectionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const DetectionCounts&) const = default;
};

struct MatchResult {
  DetectionCounts counts;
  // (predicted index, truth index) for every true positive.
  std::vector<std::pair<std::size_t, std::size_t>> matched;
};

// Loose criterion: a prediction is a hit when kind and location agree with
// a ground-truth error; token content is ignored. Duplicate keys count with
// multiplicity (tp = sum over keys of min(pred count, truth count)).
MatchResult MatchLoose(std::span<const ErrorPair> predicted,
                       std::span<const ErrorPair> truth);

// Multiset matching on arbitrary (category, location) keys.
using MatchKey = std::pair<int, std::size_t>;
MatchResult MatchKeys(std::span<const MatchKey> predicted,
                      std::span<const MatchKey> truth);

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Zero denominators give 0, except tp = fp = fn = 0 which scores 1/1/1.
PRF ComputePrf(std::size_t tp, std::size_t fp, std::size_t fn);
inline PRF ComputePrf(const DetectionCounts& c) { return ComputePrf(c.tp, c.fp, c.fn); }

// Harmonic mean of precision and recall; 0 when both are 0.
double F1Score(double precision, double recall);

// Per-kind breakdown (Sub/Del/Ins) plus an "all errors" total.
struct KindBreakdown {
  DetectionCounts all;
  std::map<EditKind, DetectionCounts> by_kind;  // always has Sub, Del, Ins

  KindBreakdown();
  KindBreakdown& operator+=(const KindBreakdown& o);
};

KindBreakdown MatchLooseByKind(std::span<const ErrorPair> predicted,
                               std::span<const ErrorPair> truth);

}  // namespace oralread
