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

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <random>
#include <set>

#include "oralread/corpusio.hpp"
#include "utf8.hpp"

namespace oralread {
namespace {

// Portable bounded draws; std::uniform_int_distribution differs across
// standard libraries and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t Below(std::size_t n) {
    const std::uint64_t range = n;
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % range);
  }

  template <typename T>
  const T& Pick(const std::vector<T>& xs) {
    return xs[Below(xs.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct Site {
  std::size_t slot = 0;  // prompt index, or gap index for insertions
  MiscueLabel label = MiscueLabel::kO;
  std::string word;  // replacement / inserted word
};

class Injector {
 public:
  Injector(const WordSeq& prompt, const EmbeddingProvider& lexicon,
           const ClassifierConfig& cfg)
      : prompt_(prompt), lexicon_(lexicon), cfg_(cfg), vocab_(lexicon.Vocabulary()) {
    for (const auto& t : prompt.tokens()) prompt_words_.insert(t.norm);
  }

  bool IsFree(std::size_t slot) const {
    return std::all_of(used_.begin(), used_.end(), [&](std::size_t u) {
      return (slot > u ? slot - u : u - slot) >= 2;
    });
  }

  std::vector<std::string> Candidates(std::size_t slot, MiscueLabel label) {
    switch (label) {
      case MiscueLabel::kOS:
      case MiscueLabel::kSS:
      case MiscueLabel::kO:
        return SubstitutionCandidates(prompt_[slot].norm, label);
      case MiscueLabel::kIm: {
        std::vector<std::string> out;
        for (const auto& v : vocab_) {
          if (prompt_words_.contains(v)) continue;
          if (DetectRestart(v, prompt_, slot, cfg_.restart_window)) continue;
          out.push_back(v);
        }
        return out;
      }
      case MiscueLabel::kRestart: {
        std::vector<std::string> out;
        if (slot >= prompt_.size()) return out;
        const auto cps = utf8::Decode(prompt_[slot].norm);
        for (std::size_t len = 1; len < cps.size(); ++len) {
          std::string prefix = utf8::Encode(
              std::vector<char32_t>(cps.begin(), cps.begin() + static_cast<long>(len)));
          if (!prompt_words_.contains(prefix)) out.push_back(std::move(prefix));
        }
        return out;
      }
      case MiscueLabel::kD: {
        const std::string& w = prompt_[slot].norm;
        const bool left_same = slot > 0 && prompt_[slot - 1].norm == w;
        const bool right_same = slot + 1 < prompt_.size() && prompt_[slot + 1].norm == w;
        if (left_same || right_same) return {};
        return {std::string()};
      }
    }
    return {};
  }

  void Place(MiscueLabel label, Rng& rng) {
    const bool insertion = label == MiscueLabel::kIm || label == MiscueLabel::kRestart;
    const std::size_t n_slots = insertion ? prompt_.size() + 1 : prompt_.size();
    std::vector<std::size_t> free;
    for (std::size_t s = 0; s < n_slots; ++s) {
      if (IsFree(s)) free.push_back(s);
    }
    if (free.empty()) {
      throw InsufficientPromptError("prompt of " + std::to_string(prompt_.size()) +
                                    " words cannot host another " +
                                    std::string(MiscueLabelName(label)) + " site");
    }
    std::vector<std::pair<std::size_t, std::vector<std::string>>> eligible;
    for (std::size_t s : free) {
      auto c = Candidates(s, label);
      if (!c.empty()) eligible.emplace_back(s, std::move(c));
    }
    if (eligible.empty()) {
      if (label == MiscueLabel::kD) {
        throw InsufficientPromptError("no deletable prompt word left for D");
      }
      throw NoCandidateWordError(label);
    }
    const auto& [slot, words] = rng.Pick(eligible);
    used_.push_back(slot);
    sites_.push_back(Site{slot, label, rng.Pick(words)});
  }

  InjectionResult Finish() const {
    std::vector<Site> sites = sites_;
    std::sort(sites.begin(), sites.end(),
              [](const Site& a, const Site& b) { return a.slot < b.slot; });

    InjectionResult out;
    std::vector<std::string> spoken;
    std::size_t next_site = 0;
    for (std::size_t i = 0; i <= prompt_.size(); ++i) {
      const Site* here = next_site < sites.size() && sites[next_site].slot == i
                             ? &sites[next_site++]
                             : nullptr;
      const bool insertion = here != nullptr && (here->label == MiscueLabel::kIm ||
                                                 here->label == MiscueLabel::kRestart);
      if (insertion) {
        spoken.push_back(here->word);
        out.truth.push_back(
            LabeledError{{EditKind::kIns, i, std::nullopt, here->word}, here->label,
                         std::nullopt, std::nullopt});
      }
      if (i == prompt_.size()) break;
      const std::string& target = prompt_[i].norm;
      if (here == nullptr || insertion) {
        spoken.push_back(target);
      } else if (here->label == MiscueLabel::kD) {
        out.truth.push_back(LabeledError{{EditKind::kDel, i, target, std::nullopt},
                                         MiscueLabel::kD, std::nullopt, std::nullopt});
      } else {
        spoken.push_back(here->word);
        LabeledError e{{EditKind::kSub, i, target, here->word}, here->label,
                       StringCosine(target, here->word, cfg_.ngram_order),
                       SemanticSimilarity(target, here->word, lexicon_)};
        out.truth.push_back(std::move(e));
      }
    }
    out.transcript.words = WordSeq::FromNorms(spoken);
    return out;
  }

 private:
  std::vector<std::string> SubstitutionCandidates(const std::string& target,
                                                  MiscueLabel label) {
    auto key = std::make_pair(target, label);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<std::string> out;
    for (const auto& v : vocab_) {
      if (prompt_words_.contains(v)) continue;
      const double ortho = StringCosine(target, v, cfg_.ngram_order);
      const bool os = ortho >= cfg_.ortho_threshold;
      const auto sem = SemanticSimilarity(target, v, lexicon_);
      const bool ss = sem && *sem >= cfg_.sem_threshold;
      const bool keep = (label == MiscueLabel::kOS && os) ||
                        (label == MiscueLabel::kSS && !os && ss) ||
                        (label == MiscueLabel::kO && !os && !ss);
      if (keep) out.push_back(v);
    }
    cache_.emplace(key, out);
    return out;
  }

  const WordSeq& prompt_;
  const EmbeddingProvider& lexicon_;
  const ClassifierConfig& cfg_;
  std::vector<std::string> vocab_;
  std::set<std::string> prompt_words_;
  std::vector<std::size_t> used_;
  std::vector<Site> sites_;
  std::map<std::pair<std::string, MiscueLabel>, std::vector<std::string>> cache_;
};

}  // namespace

std::size_t InjectionSpec::Total() const {
  std::size_t n = restarts;
  for (const auto& [l, c] : counts) n += c;
  return n;
}

NoCandidateWordError::NoCandidateWordError(MiscueLabel category)
    : std::runtime_error("no lexicon word qualifies for a " +
                         std::string(MiscueLabelName(category)) + " injection"),
      category_(category) {}

InjectionResult InjectMiscues(const WordSeq& prompt, const InjectionSpec& spec,
                              const EmbeddingProvider& lexicon,
                              const ClassifierConfig& cfg) {
  cfg.Validate();
  for (const auto& [label, count] : spec.counts) {
    if (label == MiscueLabel::kRestart && count > 0) {
      throw std::invalid_argument("use InjectionSpec::restarts for restart injections");
    }
  }
  Injector injector(prompt, lexicon, cfg);
  Rng rng(spec.seed);
  // Most constrained categories first so they get first pick of the sites.
  const MiscueLabel order[] = {MiscueLabel::kSS, MiscueLabel::kOS, MiscueLabel::kO,
                               MiscueLabel::kD, MiscueLabel::kIm};
  for (MiscueLabel label : order) {
    auto it = spec.counts.find(label);
    const std::size_t n = it == spec.counts.end() ? 0 : it->second;
    for (std::size_t k = 0; k < n; ++k) injector.Place(label, rng);
  }
  for (std::size_t k = 0; k < spec.restarts; ++k) injector.Place(MiscueLabel::kRestart, rng);
  return injector.Finish();
}

}  // namespace oralread
