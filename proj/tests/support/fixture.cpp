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

#include "fixture.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "oralread/corpusio.hpp"

namespace oralread::testing {

namespace {

const std::vector<std::vector<std::string>>& SynonymGroups() {
  static const std::vector<std::vector<std::string>> kGroups = {
      {"huis", "woning"},     {"groot", "fors"},       {"klein", "gering"},
      {"snel", "vlug"},       {"mooi", "fraai"},       {"boos", "kwaad"},
      {"bang", "angstig"},    {"blij", "vrolijk"},     {"praten", "spreken"},
      {"kijken", "staren"},   {"lopen", "wandelen"},   {"auto", "wagen"},
      {"fiets", "rijwiel"},   {"straat", "laan"},      {"boek", "roman"},
      {"hond", "viervoeter"}, {"kat", "poes"},         {"bos", "woud"},
      {"zee", "oceaan"},      {"berg", "heuvel"},      {"eten", "smullen"},
      {"slapen", "dutten"},   {"mama", "moeder"},      {"papa", "vader"},
      {"school", "leslokaal"},{"juf", "lerares"},      {"vriend", "maat"},
      {"koud", "kil"},        {"warm", "heet"},        {"nat", "vochtig"},
      {"oud", "bejaard"},     {"nieuw", "modern"},     {"zingen", "neuriën"},
      {"springen", "huppen"}, {"rennen", "sprinten"},  {"tuin", "gaard"},
      {"deur", "poort"},      {"raam", "venster"},     {"kamer", "vertrek"},
      {"brood", "boterham"},  {"appel", "fruit"},      {"zon", "zonlicht"},
      {"regen", "bui"},       {"wind", "bries"},       {"boom", "stam"},
      {"bloem", "roos"},      {"vogel", "mus"},        {"vis", "forel"},
  };
  return kGroups;
}

// Function words and unrelated fillers that only serve as O / I_m material.
const std::vector<std::string>& Fillers() {
  static const std::vector<std::string> kFillers = {
      "de", "het", "een", "en", "op", "in", "met", "naar", "onder", "achter",
      "pindakaas", "xylofoon", "chocola", "paraplu", "trommel", "kompas"};
  return kFillers;
}

bool IsVowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

std::vector<std::string> Variants(const std::string& w) {
  std::vector<std::string> out;
  out.push_back(w + "je");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (IsVowel(w[i]) && (i + 1 >= w.size() || w[i + 1] != w[i]) && (i == 0 || w[i - 1] != w[i])) {
      out.push_back(w.substr(0, i + 1) + w.substr(i));
      break;
    }
  }
  return out;
}

EmbeddingProvider BuildLexicon() {
  std::vector<std::vector<std::string>> groups = SynonymGroups();
  std::set<std::string> words;
  for (const auto& g : groups) words.insert(g.begin(), g.end());
  for (const auto& g : SynonymGroups()) {
    for (const auto& v : Variants(g.front())) {
      if (words.insert(v).second && StringCosine(g.front(), v) >= 0.8) groups.push_back({v});
    }
  }
  for (const auto& f : Fillers()) {
    if (words.insert(f).second) groups.push_back({f});
  }
  std::size_t widest = 0;
  for (const auto& g : groups) widest = std::max(widest, g.size());
  const std::size_t dim = groups.size() + widest;
  EmbeddingProvider emb(dim);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (std::size_t k = 0; k < groups[gi].size(); ++k) {
      std::vector<double> v(dim, 0.0);
      v[gi] = 1.0;
      v[groups.size() + k] = 0.5;
      emb.Add(groups[gi][k], std::move(v));
    }
  }
  return emb;
}

}  // namespace

const EmbeddingProvider& DutchLexicon() {
  static const EmbeddingProvider kLexicon = BuildLexicon();
  return kLexicon;
}

const std::vector<std::string>& PromptVocabulary() {
  static const std::vector<std::string> kWords = [] {
    std::vector<std::string> out;
    for (const auto& g : SynonymGroups()) out.push_back(g.front());
    return out;
  }();
  return kWords;
}

WordSeq RandomPrompt(std::uint64_t seed, std::size_t length) {
  std::mt19937_64 rng(seed);
  const auto& vocab = PromptVocabulary();
  std::vector<std::string> words;
  while (words.size() < length) {
    const std::string& w = vocab[rng() % vocab.size()];
    if (!words.empty() && words.back() == w) continue;
    words.push_back(w);
  }
  return WordSeq::FromNorms(words);
}

std::string EmbeddingsText(const EmbeddingProvider& emb) {
  std::ostringstream out;
  WriteEmbeddings(out, emb);
  return out.str();
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("oralread-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::map<std::string, std::string> ReadTree(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[std::filesystem::relative(e.path(), root).generic_string()] = ReadFile(e.path());
    }
  }
  return out;
}

}  // namespace oralread::testing
