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
#include "oralread/align.hpp"

#include <algorithm>

namespace oralread {

std::string_view EditKindName(EditKind kind) {
  switch (kind) {
    case EditKind::kMatch: return "match";
    case EditKind::kSub: return "sub";
    case EditKind::kDel: return "del";
    case EditKind::kIns: return "ins";
  }
  return "";
}

std::optional<EditKind> ParseEditKind(std::string_view name) {
  if (name == "match") return EditKind::kMatch;
  if (name == "sub") return EditKind::kSub;
  if (name == "del") return EditKind::kDel;
  if (name == "ins") return EditKind::kIns;
  return std::nullopt;
}

EditCounts& EditCounts::operator+=(const EditCounts& o) {
  matches += o.matches;
  subs += o.subs;
  dels += o.dels;
  inss += o.inss;
  return *this;
}

void CostConfig::Validate() const {
  if (sub < 0 || ins < 0 || del < 0) {
    throw std::invalid_argument("edit costs must be non-negative");
  }
  if (sub >= ins + del) {
    throw std::invalid_argument(
        "substitution cost must be below insertion + deletion cost");
  }
}

EditCounts Alignment::Counts() const {
  EditCounts c;
  for (const auto& op : ops) {
    switch (op.kind) {
      case EditKind::kMatch: ++c.matches; break;
      case EditKind::kSub: ++c.subs; break;
      case EditKind::kDel: ++c.dels; break;
      case EditKind::kIns: ++c.inss; break;
    }
  }
  return c;
}

long Alignment::Cost(const CostConfig& cost) const {
  const EditCounts c = Counts();
  return static_cast<long>(c.subs) * cost.sub +
         static_cast<long>(c.dels) * cost.del +
         static_cast<long>(c.inss) * cost.ins;
}

Alignment Align(std::span<const std::string> ref,
                std::span<const std::string> hyp, const CostConfig& cost) {
  cost.Validate();
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<long> table((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> long& {
    return table[i * width + j];
  };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<long>(i) * cost.del;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<long>(j) * cost.ins;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const long diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : cost.sub);
      const long del = at(i - 1, j) + cost.del;
      const long ins = at(i, j - 1) + cost.ins;
      at(i, j) = std::min({diag, del, ins});
    }
  }

  Alignment out;
  out.ref_len = n;
  out.hyp_len = m;
  out.ops.reserve(n + m);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : cost.sub)) {
        out.ops.push_back({same ? EditKind::kMatch : EditKind::kSub, i - 1, j - 1});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + cost.del) {
      out.ops.push_back({EditKind::kDel, i - 1, std::nullopt});
      --i;
      continue;
    }
    out.ops.push_back({EditKind::kIns, std::nullopt, j - 1});
    --j;
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

double EditRate(const EditCounts& counts, std::size_t ref_len) {
  if (ref_len == 0) throw EmptyReferenceError();
  return static_cast<double>(counts.errors()) / static_cast<double>(ref_len);
}

void CheckAlignment(const Alignment& a) {
  std::size_t next_ref = 0;
  std::size_t next_hyp = 0;
  for (const auto& op : a.ops) {
    const bool needs_ref = op.kind != EditKind::kIns;
    const bool needs_hyp = op.kind != EditKind::kDel;
    if (op.ref_index.has_value() != needs_ref ||
        op.hyp_index.has_value() != needs_hyp) {
      throw std::logic_error("alignment op fields inconsistent with kind");
    }
    if (needs_ref) {
      if (*op.ref_index != next_ref) throw std::logic_error("ref index out of order");
      ++next_ref;
    }
    if (needs_hyp) {
      if (*op.hyp_index != next_hyp) throw std::logic_error("hyp index out of order");
      ++next_hyp;
    }
  }
  if (next_ref != a.ref_len || next_hyp != a.hyp_len) {
    throw std::logic_error("alignment does not cover both sequences");
  }
}

}  // namespace oralread
