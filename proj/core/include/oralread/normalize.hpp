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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oralread {

// A single word of a prompt or transcript. `surface` keeps the raw text
// span (after hyphen splitting) so annotation markers survive normalization.
struct Token {
  std::string surface;
  std::string norm;
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

class WordSeq {
 public:
  WordSeq() = default;
  explicit WordSeq(std::vector<Token> tokens);

  // Builds a sequence whose surface and norm are both the given words.
  static WordSeq FromNorms(const std::vector<std::string>& norms);

  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }

  std::vector<std::string> norms() const;
  std::string Joined() const;  // norms joined by single spaces

  bool operator==(const WordSeq&) const = default;

 private:
  std::vector<Token> tokens_;
};

enum class PhonemeAlphabet { kIpa, kCgn };

std::string_view AlphabetName(PhonemeAlphabet a);
std::optional<PhonemeAlphabet> ParseAlphabet(std::string_view name);

// The 46-symbol CGN phoneme inventory.
const std::set<std::string, std::less<>>& CgnInventory();

// True when `symbol` belongs to the alphabet's inventory. IPA is treated as
// an open inventory: any non-empty symbol without whitespace is accepted, and
// unknown symbols surface later as UnknownSymbolError during mapping.
bool IsValidSymbol(PhonemeAlphabet alphabet, std::string_view symbol);

class PhonemeSeq {
 public:
  PhonemeSeq() = default;
  // Throws std::invalid_argument when a symbol is outside the inventory.
  PhonemeSeq(std::vector<std::string> symbols, PhonemeAlphabet alphabet);

  const std::vector<std::string>& symbols() const { return symbols_; }
  PhonemeAlphabet alphabet() const { return alphabet_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  std::string Joined() const;

  bool operator==(const PhonemeSeq&) const = default;

 private:
  std::vector<std::string> symbols_;
  PhonemeAlphabet alphabet_ = PhonemeAlphabet::kCgn;
};

class PhonemeMappingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSymbolError : public std::runtime_error {
 public:
  UnknownSymbolError(std::string symbol, std::size_t position);
  const std::string& symbol() const { return symbol_; }
  std::size_t position() const { return position_; }

 private:
  std::string symbol_;
  std::size_t position_;
};

// Source symbol -> one or more target symbols.
class PhonemeMapping {
 public:
  PhonemeMapping(PhonemeAlphabet source, PhonemeAlphabet target);

  // Throws PhonemeMappingError on a duplicate source, an empty target list,
  // or a target symbol outside the target inventory.
  void Add(std::string source_symbol, std::vector<std::string> targets);

  const std::vector<std::string>* Find(std::string_view source_symbol) const;
  PhonemeAlphabet source() const { return source_; }
  PhonemeAlphabet target() const { return target_; }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<std::string>, std::less<>>& entries()
      const {
    return entries_;
  }

  // Parses the tab-separated mapping format:
  //   <source>\t<target>[ <target>...]
  // Lines starting with '#' and blank lines are ignored.
  static PhonemeMapping Parse(std::string_view text,
                              PhonemeAlphabet source = PhonemeAlphabet::kIpa,
                              PhonemeAlphabet target = PhonemeAlphabet::kCgn);
  static PhonemeMapping Load(const std::filesystem::path& path);

  // The IPA->CGN table compiled into the library (same content as
  // data/ipa_to_cgn.tsv).
  static const PhonemeMapping& BundledIpaToCgn();

 private:
  PhonemeAlphabet source_;
  PhonemeAlphabet target_;
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

struct NormalizationConfig {
  // Code points (as UTF-8 strings) removed from tokens. Apostrophes are
  // handled separately and should not be listed here.
  std::set<std::string, std::less<>> punctuation = DefaultPunctuation();
  // Normalized tokens dropped by StripCues.
  std::set<std::string, std::less<>> cue_markers = {"ggg", "xxx", "mmm"};
  // Surface prefixes that mark a token as an annotation cue.
  std::vector<std::string> cue_prefixes = {"*"};
  bool convert_numerals = true;
  bool preserve_apostrophes = true;

  static std::set<std::string, std::less<>> DefaultPunctuation();
};

// Lowercases, strips punctuation, splits on whitespace and hyphens, and
// spells out digit strings 0-9999 as Dutch number words. Never throws on
// valid UTF-8; invalid bytes are dropped.
WordSeq NormalizeTokens(std::string_view raw, const NormalizationConfig& cfg);

// Removes annotation cue tokens and re-indexes the remainder.
WordSeq StripCues(const WordSeq& tokens, const NormalizationConfig& cfg);

// NormalizeTokens followed by StripCues.
WordSeq NormalizeText(std::string_view raw, const NormalizationConfig& cfg);

PhonemeSeq MapPhonemes(const PhonemeSeq& seq, const PhonemeMapping& mapping);

// Splits a space-separated phoneme string, dropping cue markers (e.g. "ggg",
// "*"-prefixed symbols) before validating against the alphabet.
PhonemeSeq ParsePhonemes(std::string_view text, PhonemeAlphabet alphabet,
                         const NormalizationConfig& cfg);

// Splits UTF-8 text into one string per code point.
std::vector<std::string> SplitCodePoints(std::string_view text);

// Dutch cardinal for 0..9999 as one or more words ("eenentwintig",
// "duizend tweehonderd"). Returns nullopt outside that range.
std::optional<std::vector<std::string>> DutchNumberWords(int value);

}  // namespace oralread
