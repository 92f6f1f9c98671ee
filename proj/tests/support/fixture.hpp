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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "oralread/miscue.hpp"
#include "oralread/normalize.hpp"

namespace oralread::testing {

// Synthetic Dutch lexicon. Synonym groups share an axis so that members have
// embedding cosine 0.8; every other pair scores at most 0.2. Orthographic
// variants (doubled vowel, diminutive) of prompt words are added as their
// own groups.
const EmbeddingProvider& DutchLexicon();

// Words prompts are drawn from; each has a synonym in the lexicon.
const std::vector<std::string>& PromptVocabulary();

// Random prompt of `length` words with no word repeated back to back.
WordSeq RandomPrompt(std::uint64_t seed, std::size_t length);

std::string EmbeddingsText(const EmbeddingProvider& emb);

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void WriteFile(const std::filesystem::path& path, const std::string& content);
std::string ReadFile(const std::filesystem::path& path);

// Relative path -> content for every regular file under root.
std::map<std::string, std::string> ReadTree(const std::filesystem::path& root);

}  // namespace oralread::testing
