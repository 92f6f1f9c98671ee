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
#include "oralread/normalize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "oralread/log.hpp"
#include "utf8.hpp"

namespace oralread {
namespace {

bool IsApostrophe(char32_t cp) {
  return cp == U'\'' || cp == 0x2019 || cp == 0x2018 || cp == 0x02BC ||
         cp == U'`' || cp == 0x00B4;
}

bool IsHyphen(char32_t cp) {
  return cp == U'-' || (cp >= 0x2010 && cp <= 0x2015) || cp == 0x2212;
}

bool IsAsciiDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

bool StartsWithDigit(std::string_view s) {
  return !s.empty() && s.front() >= '0' && s.front() <= '9';
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string part;
  while (in >> part) out.push_back(part);
  return out;
}

// Lowercases and strips punctuation from one whitespace-delimited chunk.
std::string NormalizeChunk(const std::vector<char32_t>& chunk,
                           const NormalizationConfig& cfg) {
  std::vector<char32_t> kept;
  kept.reserve(chunk.size());
  for (char32_t cp : chunk) {
    if (IsApostrophe(cp)) {
      if (cfg.preserve_apostrophes) kept.push_back(U'\'');
      continue;
    }
    const char32_t lower = utf8::ToLower(cp);
    if (cfg.punctuation.contains(utf8::Encode(cp)) ||
        cfg.punctuation.contains(utf8::Encode(lower))) {
      continue;
    }
    kept.push_back(lower);
  }
  if (!cfg.preserve_apostrophes) return utf8::Encode(kept);

  // Trailing apostrophes always go. A leading one survives only when the
  // word was not wrapped in quotes, so "'s" stays while "'kat'" -> "kat".
  const bool quoted = !kept.empty() && kept.back() == U'\'';
  while (!kept.empty() && kept.back() == U'\'') kept.pop_back();
  if (quoted) {
    auto first = std::find_if(kept.begin(), kept.end(),
                              [](char32_t c) { return c != U'\''; });
    kept.erase(kept.begin(), first);
  }
  if (std::all_of(kept.begin(), kept.end(),
                  [](char32_t c) { return c == U'\''; })) {
    kept.clear();
  }
  return utf8::Encode(kept);
}

const char* const kUnits[] = {"nul",  "een", "twee",  "drie", "vier",
                              "vijf", "zes", "zeven", "acht", "negen"};
const char* const kTeens[] = {"tien",     "elf",      "twaalf",
                              "dertien",  "veertien", "vijftien",
                              "zestien",  "zeventien", "achttien",
                              "negentien"};
const char* const kTens[] = {"",       "",        "twintig", "dertig",
                             "veertig", "vijftig", "zestig",  "zeventig",
                             "tachtig", "negentig"};

std::string BelowHundred(int n) {
  if (n < 10) return kUnits[n];
  if (n < 20) return kTeens[n - 10];
  const int tens = n / 10;
  const int unit = n % 10;
  if (unit == 0) return kTens[tens];
  std::string unit_word = kUnits[unit];
  // "twee" + "en" -> "tweeën": the connective takes a diaeresis after -e.
  const char* joiner = unit_word.back() == 'e' ? "\xC3\xABn" : "en";
  return unit_word + joiner + kTens[tens];
}

std::string BelowThousand(int n) {
  const int hundreds = n / 100;
  const int rest = n % 100;
  std::string out;
  if (hundreds == 1) {
    out = "honderd";
  } else if (hundreds > 1) {
    out = std::string(kUnits[hundreds]) + "honderd";
  }
  if (rest != 0 || hundreds == 0) out += BelowHundred(rest);
  return out;
}

}  // namespace

WordSeq::WordSeq(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) tokens_[i].index = i;
}

WordSeq WordSeq::FromNorms(const std::vector<std::string>& norms) {
  std::vector<Token> tokens;
  tokens.reserve(norms.size());
  for (const auto& n : norms) tokens.push_back(Token{n, n, 0});
  return WordSeq(std::move(tokens));
}

std::vector<std::string> WordSeq::norms() const {
  std::vector<std::string> out;
  out.reserve(tokens_.size());
  for (const auto& t : tokens_) out.push_back(t.norm);
  return out;
}

std::string WordSeq::Joined() const {
  std::string out;
  for (const auto& t : tokens_) {
    if (!out.empty()) out.push_back(' ');
    out += t.norm;
  }
  return out;
}

std::string_view AlphabetName(PhonemeAlphabet a) {
  return a == PhonemeAlphabet::kIpa ? "ipa" : "cgn";
}

std::optional<PhonemeAlphabet> ParseAlphabet(std::string_view name) {
  if (name == "ipa" || name == "IPA") return PhonemeAlphabet::kIpa;
  if (name == "cgn" || name == "CGN") return PhonemeAlphabet::kCgn;
  return std::nullopt;
}

const std::set<std::string, std::less<>>& CgnInventory() {
  static const std::set<std::string, std::less<>> kInventory = {
      // plosives
      "p", "b", "t", "d", "k", "g",
      // fricatives
      "f", "v", "s", "z", "S", "Z", "x", "G", "h",
      // sonorants
      "m", "n", "N", "J", "l", "r", "w", "j",
      // short vowels
      "I", "E", "A", "O", "Y", "@",
      // long vowels
      "i", "y", "e:", "2:", "a:", "o:", "u:",
      // diphthongs
      "E+", "Y+", "A+",
      // loan vowels
      "E:", "Y:", "O:",
      // nasal vowels
      "E~", "A~", "O~", "Y~"};
  return kInventory;
}

bool IsValidSymbol(PhonemeAlphabet alphabet, std::string_view symbol) {
  if (symbol.empty()) return false;
  if (alphabet == PhonemeAlphabet::kCgn) return CgnInventory().contains(symbol);
  for (char32_t cp : utf8::Decode(symbol)) {
    if (utf8::IsSpace(cp)) return false;
  }
  return true;
}

PhonemeSeq::PhonemeSeq(std::vector<std::string> symbols,
                       PhonemeAlphabet alphabet)
    : symbols_(std::move(symbols)), alphabet_(alphabet) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!IsValidSymbol(alphabet_, symbols_[i])) {
      throw std::invalid_argument("phoneme '" + symbols_[i] + "' at position " +
                                  std::to_string(i) + " is not in the " +
                                  std::string(AlphabetName(alphabet_)) +
                                  " inventory");
    }
  }
}

std::string PhonemeSeq::Joined() const {
  std::string out;
  for (const auto& s : symbols_) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

UnknownSymbolError::UnknownSymbolError(std::string symbol, std::size_t position)
    : std::runtime_error("no mapping for phoneme '" + symbol + "' at position " +
                         std::to_string(position)),
      symbol_(std::move(symbol)),
      position_(position) {}

PhonemeMapping::PhonemeMapping(PhonemeAlphabet source, PhonemeAlphabet target)
    : source_(source), target_(target) {}

void PhonemeMapping::Add(std::string source_symbol,
                         std::vector<std::string> targets) {
  if (source_symbol.empty()) {
    throw PhonemeMappingError("empty source symbol");
  }
  if (targets.empty()) {
    throw PhonemeMappingError("empty target list for '" + source_symbol + "'");
  }
  for (const auto& t : targets) {
    if (!IsValidSymbol(target_, t)) {
      throw PhonemeMappingError("target '" + t + "' for '" + source_symbol +
                                "' is not in the " +
                                std::string(AlphabetName(target_)) +
                                " inventory");
    }
  }
  auto [it, inserted] =
      entries_.emplace(std::move(source_symbol), std::move(targets));
  if (!inserted) {
    throw PhonemeMappingError("duplicate source symbol '" + it->first + "'");
  }
}

const std::vector<std::string>* PhonemeMapping::Find(
    std::string_view source_symbol) const {
  auto it = entries_.find(source_symbol);
  return it == entries_.end() ? nullptr : &it->second;
}

PhonemeMapping PhonemeMapping::Parse(std::string_view text,
                                     PhonemeAlphabet source,
                                     PhonemeAlphabet target) {
  PhonemeMapping mapping(source, target);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw PhonemeMappingError("line " + std::to_string(line_no) +
                                ": expected <source>\t<targets>");
    }
    std::string src(line.substr(0, tab));
    auto targets = SplitWhitespace(line.substr(tab + 1));
    try {
      mapping.Add(std::move(src), std::move(targets));
    } catch (const PhonemeMappingError& e) {
      throw PhonemeMappingError("line " + std::to_string(line_no) + ": " +
                                e.what());
    }
    if (end == text.size()) break;
  }
  return mapping;
}

PhonemeMapping PhonemeMapping::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PhonemeMappingError("cannot open phoneme mapping " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::set<std::string, std::less<>> NormalizationConfig::DefaultPunctuation() {
  std::set<std::string, std::less<>> out;
  for (char c : std::string_view("!\"#$%&()*+,./:;<=>?@[\\]^_{|}~")) {
    out.insert(std::string(1, c));
  }
  for (const char* s : {"\xC2\xAB", "\xC2\xBB", "\xE2\x80\x9C", "\xE2\x80\x9D",
                        "\xE2\x80\x9E", "\xE2\x80\x9A", "\xE2\x80\xB9",
                        "\xE2\x80\xBA", "\xE2\x80\xA6", "\xC2\xA1", "\xC2\xBF",
                        "\xC2\xB7", "\xE2\x80\xA2"}) {
    out.insert(s);
  }
  return out;
}

std::vector<std::string> SplitCodePoints(std::string_view text) {
  std::vector<std::string> out;
  for (char32_t cp : utf8::Decode(text)) out.push_back(utf8::Encode(cp));
  return out;
}

std::optional<std::vector<std::string>> DutchNumberWords(int value) {
  if (value < 0 || value > 9999) return std::nullopt;
  if (value < 1000) return std::vector<std::string>{BelowThousand(value)};
  const int thousands = value / 1000;
  const int rest = value % 1000;
  std::string head = thousands == 1
                         ? std::string("duizend")
                         : std::string(kUnits[thousands]) + "duizend";
  std::vector<std::string> out{std::move(head)};
  if (rest != 0) out.push_back(BelowThousand(rest));
  return out;
}

WordSeq NormalizeTokens(std::string_view raw, const NormalizationConfig& cfg) {
  std::vector<Token> tokens;
  std::vector<char32_t> chunk;

  auto flush = [&]() {
    if (chunk.empty()) return;
    std::string surface = utf8::Encode(chunk);
    std::string norm = NormalizeChunk(chunk, cfg);
    chunk.clear();
    if (norm.empty()) return;
    if (cfg.convert_numerals && IsAsciiDigits(norm)) {
      const std::string digits = norm;
      const std::size_t first = digits.find_first_not_of('0');
      const std::string significant =
          first == std::string::npos ? "0" : digits.substr(first);
      std::optional<std::vector<std::string>> words;
      if (significant.size() <= 4) {
        words = DutchNumberWords(std::stoi(significant));
      }
      if (words) {
        for (auto& w : *words) tokens.push_back(Token{surface, std::move(w), 0});
        return;
      }
      LogWarning("numeral '" + digits + "' outside 0-9999 left unchanged");
    } else if (cfg.convert_numerals && StartsWithDigit(norm)) {
      LogWarning("token '" + norm + "' (ordinal or mixed numeral) left unchanged");
    }
    tokens.push_back(Token{std::move(surface), std::move(norm), 0});
  };

  for (char32_t cp : utf8::Decode(raw)) {
    if (utf8::IsSpace(cp) || IsHyphen(cp)) {
      flush();
    } else {
      chunk.push_back(cp);
    }
  }
  flush();
  return WordSeq(std::move(tokens));
}

namespace {

bool IsCue(const std::string& norm, const std::string& surface,
           const NormalizationConfig& cfg) {
  if (cfg.cue_markers.contains(norm)) return true;
  return std::any_of(cfg.cue_prefixes.begin(), cfg.cue_prefixes.end(),
                     [&](const std::string& p) {
                       return !p.empty() && surface.starts_with(p);
                     });
}

}  // namespace

WordSeq StripCues(const WordSeq& tokens, const NormalizationConfig& cfg) {
  std::vector<Token> kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens.tokens()) {
    if (!IsCue(t.norm, t.surface, cfg)) kept.push_back(t);
  }
  return WordSeq(std::move(kept));
}

WordSeq NormalizeText(std::string_view raw, const NormalizationConfig& cfg) {
  return StripCues(NormalizeTokens(raw, cfg), cfg);
}

PhonemeSeq MapPhonemes(const PhonemeSeq& seq, const PhonemeMapping& mapping) {
  if (seq.alphabet() != mapping.source()) {
    throw std::invalid_argument(
        "phoneme sequence alphabet " + std::string(AlphabetName(seq.alphabet())) +
        " does not match mapping source " +
        std::string(AlphabetName(mapping.source())));
  }
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto* targets = mapping.Find(seq.symbols()[i]);
    if (targets == nullptr) throw UnknownSymbolError(seq.symbols()[i], i);
    out.insert(out.end(), targets->begin(), targets->end());
  }
  return PhonemeSeq(std::move(out), mapping.target());
}

PhonemeSeq ParsePhonemes(std::string_view text, PhonemeAlphabet alphabet,
                         const NormalizationConfig& cfg) {
  std::vector<std::string> symbols;
  for (auto& s : SplitWhitespace(text)) {
    if (!IsCue(s, s, cfg)) symbols.push_back(std::move(s));
  }
  return PhonemeSeq(std::move(symbols), alphabet);
}

}  // namespace oralread
