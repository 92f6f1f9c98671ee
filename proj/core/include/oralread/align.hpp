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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oralread {

enum class EditKind { kMatch, kSub, kDel, kIns };

std::string_view EditKindName(EditKind kind);  // "match" | "sub" | "del" | "ins"
std::optional<EditKind> ParseEditKind(std::string_view name);

// Match/Sub carry both indices, Del only ref_index, Ins only hyp_index.
struct AlignedOp {
  EditKind kind = EditKind::kMatch;
  std::optional<std::size_t> ref_index;
  std::optional<std::size_t> hyp_index;

  bool operator==(const AlignedOp&) const = default;
};

struct EditCounts {
  std::size_t matches = 0;
  std::size_t subs = 0;
  std::size_t dels = 0;
  std::size_t inss = 0;

  std::size_t errors() const { return subs + dels + inss; }
  EditCounts& operator+=(const EditCounts& o);
  bool operator==(const EditCounts&) const = default;
};

// Match cost is always zero. Substitution must be cheaper than a deletion
// plus an insertion.
struct CostConfig {
  int sub = 4;
  int ins = 3;
  int del = 3;

  // Throws std::invalid_argument when the invariants do not hold.
  void Validate() const;
};

struct Alignment {
  std::vector<AlignedOp> ops;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;

  EditCounts Counts() const;
  long Cost(const CostConfig& cost) const;

  bool operator==(const Alignment&) const = default;
};

class EmptyReferenceError : public std::invalid_argument {
 public:
  EmptyReferenceError() : std::invalid_argument("reference length is zero") {}
};

// Minimum-cost monotone alignment (Levenshtein with typed operations).
// Ties are resolved while tracing back from the sequence ends: diagonal
// (match/sub) first, then deletion, then insertion.
Alignment Align(std::span<const std::string> ref,
                std::span<const std::string> hyp,
                const CostConfig& cost = {});

// (S + D + I) / ref_len. Can exceed 1.
double EditRate(const EditCounts& counts, std::size_t ref_len);

// Checks the structural invariants (index coverage and ordering, op/field
// consistency). Throws std::logic_error on violation.
void CheckAlignment(const Alignment& alignment);

}  // namespace oralread
